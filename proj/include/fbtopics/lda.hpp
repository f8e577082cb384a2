#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "fbtopics/corpus.hpp"
#include "fbtopics/random.hpp"
#include "fbtopics/topic_model.hpp"
#include "fbtopics/vocabulary.hpp"

namespace fbtopics {

enum class AlphaMode { kFixed, kAuto };

struct LdaConfig {
  std::size_t num_topics = 3;
  // Symmetric document-topic prior; unset means 50 / num_topics.
  std::optional<double> alpha;
  double eta = 0.01;
  std::size_t iterations = 500;
  std::uint64_t seed = 0;
  AlphaMode alpha_mode = AlphaMode::kFixed;
  // Auto mode: first update after `burn_in` sweeps, then every `update_every`.
  std::size_t burn_in = 20;
  std::size_t update_every = 10;

  double initial_alpha() const { return alpha.value_or(50.0 / static_cast<double>(num_topics)); }
};

/// Collapsed Gibbs sampler state. Empty documents hold no tokens.
struct LdaState {
  std::size_t num_topics = 0;
  std::size_t vocab_size = 0;
  std::vector<std::vector<WordId>> docs;
  std::vector<std::vector<std::size_t>> z;  // topic of each token
  std::vector<std::vector<std::int64_t>> doc_topic;   // n_dk
  std::vector<std::vector<std::int64_t>> topic_word;  // n_kw
  std::vector<std::int64_t> topic_total;              // n_k

  /// Uniform random topic per token.
  static LdaState initialize(std::vector<std::vector<WordId>> docs, std::size_t vocab_size,
                             std::size_t num_topics, Rng& rng);

  /// Recomputes every count from z and compares; also checks non-negativity.
  bool counts_consistent() const;
};

// Unnormalized P(z = k | rest) for every k, for one token of word `word` in
// document `doc` whose own assignment has already been removed from the counts:
// (n_dk + alpha_k) (n_kw + eta) / (n_k + V eta).
std::vector<double> lda_topic_weights(const LdaState& state, std::size_t doc, WordId word,
                                      std::span<const double> alpha, double eta);

/// Resamples every token once, in document then position order.
void lda_sweep(LdaState& state, std::span<const double> alpha, double eta, Rng& rng);

struct AlphaUpdate {
  std::vector<double> alpha;
  bool converged = true;
};

// Minka fixed-point update of an asymmetric Dirichlet prior from the
// document-topic counts (documents without tokens are ignored). Runs up to 100
// fixed-point steps; on non-convergence returns the previous alpha with
// converged = false. Components are clamped to [1e-6, 1e3].
AlphaUpdate auto_alpha_update(const std::vector<std::vector<std::int64_t>>& doc_topic,
                              std::span<const double> alpha);

using LdaObserver = std::function<void(const LdaState&, std::size_t sweep)>;

// Fits LDA over the vocabulary-encoded corpus. theta = (n_dk + alpha_k) / (N_d + sum alpha),
// beta = (n_kw + eta) / (n_k + V eta). Empty documents are skipped with a
// warning; their doc_topic row is the normalized prior.
TopicModelResult lda_fit(const Corpus& corpus, const Vocabulary& vocab, const LdaConfig& cfg,
                         const LdaObserver& observer = {});

}  // namespace fbtopics
