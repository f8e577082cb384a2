#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fbtopics/corpus.hpp"
#include "fbtopics/random.hpp"
#include "fbtopics/topic_model.hpp"
#include "fbtopics/vocabulary.hpp"

namespace fbtopics {

struct GsdmmConfig {
  std::size_t k_max = 10;
  double alpha = 0.1;
  double beta = 0.1;
  std::size_t iterations = 30;
  std::uint64_t seed = 0;
};

// Dirichlet multinomial mixture state: one cluster per document.
struct GsdmmState {
  std::size_t k_max = 0;
  std::size_t vocab_size = 0;
  std::vector<std::vector<WordId>> docs;
  std::vector<std::size_t> z;                         // cluster of each document
  std::vector<std::int64_t> cluster_docs;             // m_k
  std::vector<std::vector<std::int64_t>> cluster_word;  // n_kw
  std::vector<std::int64_t> cluster_words;            // n_k

  static GsdmmState initialize(std::vector<std::vector<WordId>> docs, std::size_t vocab_size,
                               std::size_t k_max, Rng& rng);

  std::size_t num_docs() const noexcept { return docs.size(); }

  /// Removes / re-adds document d's counts under cluster z[d] (or k).
  void remove(std::size_t d);
  void add(std::size_t d, std::size_t k);

  bool counts_consistent() const;
};

// log of the unnormalized P(z_d = k | rest). Document d must already be
// removed from the counts:
//   (m_k + a) / (D - 1 + K a) * prod_w prod_{j<c_dw} (n_kw + b + j)
//                              / prod_{i<|d|} (n_k + V b + i)
double gsdmm_log_conditional(std::size_t d, std::size_t k, const GsdmmState& state,
                             const GsdmmConfig& cfg);
double gsdmm_conditional(std::size_t d, std::size_t k, const GsdmmState& state,
                         const GsdmmConfig& cfg);

/// One pass: every document is removed, rescored against all clusters and resampled.
void gsdmm_iteration(GsdmmState& state, const GsdmmConfig& cfg, Rng& rng);

std::size_t populated_clusters(const GsdmmState& state);

struct GsdmmFit {
  TopicModelResult result;  // populated clusters only, in cluster-index order
  std::size_t populated_clusters = 0;
};

using GsdmmObserver = std::function<void(const GsdmmState&, std::size_t iteration)>;

GsdmmFit gsdmm_fit(const Corpus& corpus, const Vocabulary& vocab, const GsdmmConfig& cfg,
                   const GsdmmObserver& observer = {});

}  // namespace fbtopics
