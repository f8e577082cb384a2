#include "fbtopics/gsdmm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <numeric>

#include "fbtopics/error.hpp"

namespace fbtopics {

GsdmmState GsdmmState::initialize(std::vector<std::vector<WordId>> docs, std::size_t vocab_size,
                                  std::size_t k_max, Rng& rng) {
  GsdmmState s;
  s.k_max = k_max;
  s.vocab_size = vocab_size;
  s.docs = std::move(docs);
  s.z.assign(s.docs.size(), 0);
  s.cluster_docs.assign(k_max, 0);
  s.cluster_word.assign(k_max, std::vector<std::int64_t>(vocab_size, 0));
  s.cluster_words.assign(k_max, 0);
  for (std::size_t d = 0; d < s.docs.size(); ++d) s.add(d, rng.index(k_max));
  return s;
}

void GsdmmState::remove(std::size_t d) {
  const std::size_t k = z[d];
  --cluster_docs[k];
  for (WordId w : docs[d]) --cluster_word[k][w];
  cluster_words[k] -= static_cast<std::int64_t>(docs[d].size());
}

void GsdmmState::add(std::size_t d, std::size_t k) {
  z[d] = k;
  ++cluster_docs[k];
  for (WordId w : docs[d]) ++cluster_word[k][w];
  cluster_words[k] += static_cast<std::int64_t>(docs[d].size());
}

bool GsdmmState::counts_consistent() const {
  std::vector<std::int64_t> m(k_max, 0);
  std::vector<std::vector<std::int64_t>> kw(k_max, std::vector<std::int64_t>(vocab_size, 0));
  std::vector<std::int64_t> nk(k_max, 0);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    if (z[d] >= k_max) return false;
    ++m[z[d]];
    for (WordId w : docs[d]) ++kw[z[d]][w];
    nk[z[d]] += static_cast<std::int64_t>(docs[d].size());
  }
  if (std::accumulate(cluster_docs.begin(), cluster_docs.end(), std::int64_t{0}) !=
      static_cast<std::int64_t>(docs.size())) {
    return false;
  }
  for (std::size_t k = 0; k < k_max; ++k) {
    if (std::accumulate(cluster_word[k].begin(), cluster_word[k].end(), std::int64_t{0}) != cluster_words[k]) {
      return false;
    }
  }
  return m == cluster_docs && kw == cluster_word && nk == cluster_words;
}

double gsdmm_log_conditional(std::size_t d, std::size_t k, const GsdmmState& state, const GsdmmConfig& cfg) {
  const double K = static_cast<double>(state.k_max);
  const double D = static_cast<double>(state.num_docs());
  const double v_beta = static_cast<double>(state.vocab_size) * cfg.beta;

  double log_score = std::log(static_cast<double>(state.cluster_docs[k]) + cfg.alpha) -
                     std::log(D - 1.0 + K * cfg.alpha);

  // Repeated words ascend: the j-th copy of w sees n_kw + j.
  std::map<WordId, std::int64_t> seen;
  const auto& words = state.docs[d];
  for (WordId w : words) {
    const std::int64_t j = seen[w]++;
    log_score += std::log(static_cast<double>(state.cluster_word[k][w]) + cfg.beta + static_cast<double>(j));
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    log_score -= std::log(static_cast<double>(state.cluster_words[k]) + v_beta + static_cast<double>(i));
  }
  return log_score;
}

double gsdmm_conditional(std::size_t d, std::size_t k, const GsdmmState& state, const GsdmmConfig& cfg) {
  return std::exp(gsdmm_log_conditional(d, k, state, cfg));
}

void gsdmm_iteration(GsdmmState& state, const GsdmmConfig& cfg, Rng& rng) {
  std::vector<double> weights(state.k_max);
  for (std::size_t d = 0; d < state.num_docs(); ++d) {
    state.remove(d);
    double max_log = -INFINITY;
    for (std::size_t k = 0; k < state.k_max; ++k) {
      weights[k] = gsdmm_log_conditional(d, k, state, cfg);
      max_log = std::max(max_log, weights[k]);
    }
    for (auto& w : weights) w = std::exp(w - max_log);
    state.add(d, rng.categorical(weights));
  }
}

std::size_t populated_clusters(const GsdmmState& state) {
  return static_cast<std::size_t>(
      std::count_if(state.cluster_docs.begin(), state.cluster_docs.end(), [](auto m) { return m > 0; }));
}

GsdmmFit gsdmm_fit(const Corpus& corpus, const Vocabulary& vocab, const GsdmmConfig& cfg,
                   const GsdmmObserver& observer) {
  if (cfg.k_max < 1) throw Error("GSDMM needs k_max >= 1");
  if (vocab.empty()) throw Error("GSDMM needs a non-empty vocabulary");
  if (!(cfg.alpha > 0.0) || !(cfg.beta > 0.0)) throw Error("GSDMM priors must be positive");
  if (cfg.iterations < 1) throw Error("GSDMM needs at least one iteration");
  if (corpus.empty()) throw Error("GSDMM needs at least one document");

  Rng rng(cfg.seed);
  GsdmmState state = GsdmmState::initialize(vocab.encode(corpus), vocab.size(), cfg.k_max, rng);
  for (std::size_t it = 1; it <= cfg.iterations; ++it) {
    gsdmm_iteration(state, cfg, rng);
    assert(state.counts_consistent());
    if (observer) observer(state, it);
  }

  std::vector<std::size_t> remap(cfg.k_max, cfg.k_max);
  std::vector<std::size_t> populated;
  for (std::size_t k = 0; k < cfg.k_max; ++k) {
    if (state.cluster_docs[k] > 0) {
      remap[k] = populated.size();
      populated.push_back(k);
    }
  }

  GsdmmFit fit;
  fit.populated_clusters = populated.size();
  auto& result = fit.result;
  result.model_tag = ModelTag::kGsdmm;
  result.k_max = cfg.k_max;
  result.words = vocab.words();
  for (const auto& d : corpus.documents()) result.doc_ids.push_back(d.id);

  const std::size_t V = vocab.size();
  result.topic_word = DenseMatrix(populated.size(), V);
  for (std::size_t t = 0; t < populated.size(); ++t) {
    const std::size_t k = populated[t];
    const double denom = static_cast<double>(state.cluster_words[k]) + static_cast<double>(V) * cfg.beta;
    for (std::size_t w = 0; w < V; ++w) {
      result.topic_word(t, w) = (static_cast<double>(state.cluster_word[k][w]) + cfg.beta) / denom;
    }
  }
  result.doc_topic = DenseMatrix(state.num_docs(), populated.size());
  for (std::size_t d = 0; d < state.num_docs(); ++d) result.doc_topic(d, remap[state.z[d]]) = 1.0;
  return fit;
}

}  // namespace fbtopics
