#include "fbtopics/lda.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

#include <boost/math/special_functions/digamma.hpp>

#include "fbtopics/error.hpp"
#include "fbtopics/log.hpp"

namespace fbtopics {

LdaState LdaState::initialize(std::vector<std::vector<WordId>> docs, std::size_t vocab_size,
                              std::size_t num_topics, Rng& rng) {
  LdaState s;
  s.num_topics = num_topics;
  s.vocab_size = vocab_size;
  s.docs = std::move(docs);
  s.z.resize(s.docs.size());
  s.doc_topic.assign(s.docs.size(), std::vector<std::int64_t>(num_topics, 0));
  s.topic_word.assign(num_topics, std::vector<std::int64_t>(vocab_size, 0));
  s.topic_total.assign(num_topics, 0);
  for (std::size_t d = 0; d < s.docs.size(); ++d) {
    s.z[d].resize(s.docs[d].size());
    for (std::size_t n = 0; n < s.docs[d].size(); ++n) {
      const std::size_t k = rng.index(num_topics);
      s.z[d][n] = k;
      ++s.doc_topic[d][k];
      ++s.topic_word[k][s.docs[d][n]];
      ++s.topic_total[k];
    }
  }
  return s;
}

bool LdaState::counts_consistent() const {
  std::vector<std::vector<std::int64_t>> dk(docs.size(), std::vector<std::int64_t>(num_topics, 0));
  std::vector<std::vector<std::int64_t>> kw(num_topics, std::vector<std::int64_t>(vocab_size, 0));
  std::vector<std::int64_t> k_total(num_topics, 0);
  if (z.size() != docs.size()) return false;
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (z[d].size() != docs[d].size()) return false;
    for (std::size_t n = 0; n < docs[d].size(); ++n) {
      if (z[d][n] >= num_topics) return false;
      ++dk[d][z[d][n]];
      ++kw[z[d][n]][docs[d][n]];
      ++k_total[z[d][n]];
    }
  }
  for (std::size_t k = 0; k < num_topics; ++k) {
    const auto row_sum = std::accumulate(topic_word[k].begin(), topic_word[k].end(), std::int64_t{0});
    if (row_sum != topic_total[k]) return false;
  }
  for (std::size_t d = 0; d < docs.size(); ++d) {
    const auto row_sum = std::accumulate(doc_topic[d].begin(), doc_topic[d].end(), std::int64_t{0});
    if (row_sum != static_cast<std::int64_t>(docs[d].size())) return false;
  }
  return dk == doc_topic && kw == topic_word && k_total == topic_total;
}

std::vector<double> lda_topic_weights(const LdaState& state, std::size_t doc, WordId word,
                                      std::span<const double> alpha, double eta) {
  const double v_eta = static_cast<double>(state.vocab_size) * eta;
  std::vector<double> weights(state.num_topics);
  for (std::size_t k = 0; k < state.num_topics; ++k) {
    weights[k] = (static_cast<double>(state.doc_topic[doc][k]) + alpha[k]) *
                 (static_cast<double>(state.topic_word[k][word]) + eta) /
                 (static_cast<double>(state.topic_total[k]) + v_eta);
  }
  return weights;
}

void lda_sweep(LdaState& state, std::span<const double> alpha, double eta, Rng& rng) {
  assert(alpha.size() == state.num_topics);
  const double v_eta = static_cast<double>(state.vocab_size) * eta;
  std::vector<double> weights(state.num_topics);
  for (std::size_t d = 0; d < state.docs.size(); ++d) {
    auto& dk = state.doc_topic[d];
    for (std::size_t n = 0; n < state.docs[d].size(); ++n) {
      const WordId w = state.docs[d][n];
      std::size_t k = state.z[d][n];
      --dk[k];
      --state.topic_word[k][w];
      --state.topic_total[k];

      for (std::size_t j = 0; j < state.num_topics; ++j) {
        weights[j] = (static_cast<double>(dk[j]) + alpha[j]) *
                     (static_cast<double>(state.topic_word[j][w]) + eta) /
                     (static_cast<double>(state.topic_total[j]) + v_eta);
      }
      k = rng.categorical(weights);

      state.z[d][n] = k;
      ++dk[k];
      ++state.topic_word[k][w];
      ++state.topic_total[k];
    }
  }
}

AlphaUpdate auto_alpha_update(const std::vector<std::vector<std::int64_t>>& doc_topic,
                              std::span<const double> alpha) {
  constexpr double kMin = 1e-6;
  constexpr double kMax = 1e3;
  constexpr int kMaxSteps = 100;
  constexpr double kTolerance = 1e-5;
  using boost::math::digamma;

  std::vector<double> current(alpha.begin(), alpha.end());
  const std::size_t num_topics = current.size();
  std::vector<std::int64_t> lengths;
  for (const auto& row : doc_topic) {
    lengths.push_back(std::accumulate(row.begin(), row.end(), std::int64_t{0}));
  }

  for (int step = 0; step < kMaxSteps; ++step) {
    const double alpha_sum = std::accumulate(current.begin(), current.end(), 0.0);
    double denominator = 0.0;
    for (std::size_t d = 0; d < doc_topic.size(); ++d) {
      if (lengths[d] == 0) continue;
      denominator += digamma(static_cast<double>(lengths[d]) + alpha_sum) - digamma(alpha_sum);
    }
    if (denominator <= 0.0) break;

    double max_change = 0.0;
    std::vector<double> next(num_topics);
    for (std::size_t k = 0; k < num_topics; ++k) {
      double numerator = 0.0;
      for (std::size_t d = 0; d < doc_topic.size(); ++d) {
        if (lengths[d] == 0) continue;
        numerator += digamma(static_cast<double>(doc_topic[d][k]) + current[k]) - digamma(current[k]);
      }
      next[k] = std::clamp(current[k] * numerator / denominator, kMin, kMax);
      max_change = std::max(max_change, std::abs(next[k] - current[k]) / current[k]);
    }
    current = std::move(next);
    if (max_change < kTolerance) return {current, true};
  }
  log::warn("auto alpha: fixed-point iteration did not converge; keeping previous alpha");
  return {std::vector<double>(alpha.begin(), alpha.end()), false};
}

TopicModelResult lda_fit(const Corpus& corpus, const Vocabulary& vocab, const LdaConfig& cfg,
                         const LdaObserver& observer) {
  if (cfg.num_topics < 1) throw Error("LDA needs at least one topic");
  if (vocab.empty()) throw Error("LDA needs a non-empty vocabulary");
  if (!(cfg.eta > 0.0) || !(cfg.initial_alpha() > 0.0)) throw Error("LDA priors must be positive");
  if (cfg.iterations < 1) throw Error("LDA needs at least one sweep");

  auto docs = vocab.encode(corpus);
  const auto empty = static_cast<std::size_t>(
      std::count_if(docs.begin(), docs.end(), [](const auto& d) { return d.empty(); }));
  std::size_t tokens = 0;
  for (const auto& d : docs) tokens += d.size();
  if (cfg.num_topics > tokens) throw Error("LDA topic count exceeds the corpus token count");
  if (empty > 0) log::warn("LDA: skipping " + std::to_string(empty) + " empty document(s)");

  Rng rng(cfg.seed);
  LdaState state = LdaState::initialize(std::move(docs), vocab.size(), cfg.num_topics, rng);
  std::vector<double> alpha(cfg.num_topics, cfg.initial_alpha());

  for (std::size_t sweep = 1; sweep <= cfg.iterations; ++sweep) {
    lda_sweep(state, alpha, cfg.eta, rng);
    assert(state.counts_consistent());
    if (cfg.alpha_mode == AlphaMode::kAuto && sweep >= cfg.burn_in &&
        (sweep - cfg.burn_in) % std::max<std::size_t>(cfg.update_every, 1) == 0) {
      alpha = auto_alpha_update(state.doc_topic, alpha).alpha;
    }
    if (observer) observer(state, sweep);
  }

  TopicModelResult result;
  result.model_tag = ModelTag::kLda;
  result.words = vocab.words();
  for (const auto& d : corpus.documents()) result.doc_ids.push_back(d.id);

  const std::size_t K = cfg.num_topics;
  const std::size_t V = vocab.size();
  const double alpha_sum = std::accumulate(alpha.begin(), alpha.end(), 0.0);
  result.doc_topic = DenseMatrix(state.docs.size(), K);
  for (std::size_t d = 0; d < state.docs.size(); ++d) {
    const double denom = static_cast<double>(state.docs[d].size()) + alpha_sum;
    for (std::size_t k = 0; k < K; ++k) {
      result.doc_topic(d, k) = (static_cast<double>(state.doc_topic[d][k]) + alpha[k]) / denom;
    }
  }
  result.topic_word = DenseMatrix(K, V);
  for (std::size_t k = 0; k < K; ++k) {
    const double denom = static_cast<double>(state.topic_total[k]) + static_cast<double>(V) * cfg.eta;
    for (std::size_t w = 0; w < V; ++w) {
      result.topic_word(k, w) = (static_cast<double>(state.topic_word[k][w]) + cfg.eta) / denom;
    }
  }
  return result;
}

}  // namespace fbtopics
