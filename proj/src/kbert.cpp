#include "fbtopics/kbert.hpp"

#include <algorithm>
#include <numeric>

#include "fbtopics/error.hpp"

namespace fbtopics {

std::vector<ClusterTopic> extract_cluster_topics(const ClusterResult& clusters, const EmbeddingMatrix& embeddings,
                                                 const Corpus& corpus, const Vocabulary& vocab, std::size_t m,
                                                 std::size_t top_k) {
  if (m < 1 || top_k < 1) throw Error("representatives and top_k must be at least 1");
  if (embeddings.size() != corpus.size() || clusters.assignment.size() != corpus.size()) {
    throw Error("clusters, embeddings and corpus must have the same number of documents");
  }
  const std::size_t k = clusters.centroids.rows();
  std::vector<std::vector<std::pair<double, std::size_t>>> members(k);
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const std::size_t c = clusters.assignment[d];
    members[c].emplace_back(squared_distance(embeddings.vectors.row(d), clusters.centroids.row(c)), d);
  }

  std::vector<ClusterTopic> topics;
  for (std::size_t c = 0; c < k; ++c) {
    auto& list = members[c];
    std::sort(list.begin(), list.end());  // by distance, then document index
    const std::size_t take = std::min(m, list.size());

    ClusterTopic topic;
    topic.cluster_id = c;
    std::vector<std::size_t> counts(vocab.size(), 0);
    for (std::size_t i = 0; i < take; ++i) {
      const auto& doc = corpus[list[i].second];
      topic.representative_doc_ids.push_back(doc.id);
      for (const auto& t : doc.tokens) {
        if (auto id = vocab.find(t)) ++counts[*id];
      }
    }
    std::vector<WordId> ids;
    for (WordId w = 0; w < counts.size(); ++w) {
      if (counts[w] > 0) ids.push_back(w);
    }
    std::stable_sort(ids.begin(), ids.end(), [&](WordId a, WordId b) { return counts[a] > counts[b]; });
    ids.resize(std::min(ids.size(), top_k));
    for (WordId w : ids) topic.top_words.emplace_back(vocab.word(w), counts[w]);
    topics.push_back(std::move(topic));
  }
  return topics;
}

KbertFit kbert_fit(const Corpus& corpus, const Vocabulary& vocab, const EmbeddingMatrix& embeddings,
                   const KbertConfig& cfg) {
  if (embeddings.size() != corpus.size()) throw Error("embeddings are not aligned with the corpus");
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    if (embeddings.doc_ids[d] != corpus[d].id) throw Error("embeddings are not aligned with the corpus");
  }
  embeddings.validate();

  EmbeddingMatrix working = embeddings;
  if (cfg.normalize) normalize_rows(working);

  KbertFit fit;
  KMeansOptions options;
  options.k = cfg.k;
  options.seed = cfg.seed;
  options.max_iter = cfg.max_iter;
  options.tol = cfg.tol;
  fit.clusters = kmeans_fit(working.vectors, options);
  fit.topics = extract_cluster_topics(fit.clusters, working, corpus, vocab, cfg.representatives, cfg.top_k);

  auto& result = fit.result;
  result.model_tag = ModelTag::kKbert;
  result.words = vocab.words();
  for (const auto& d : corpus.documents()) result.doc_ids.push_back(d.id);
  result.doc_topic = DenseMatrix(corpus.size(), cfg.k);
  for (std::size_t d = 0; d < corpus.size(); ++d) result.doc_topic(d, fit.clusters.assignment[d]) = 1.0;

  // Full representative-document frequencies, not just the top_k.
  const auto all_words = extract_cluster_topics(fit.clusters, working, corpus, vocab, cfg.representatives,
                                                std::max<std::size_t>(vocab.size(), 1));
  result.topic_word = DenseMatrix(cfg.k, vocab.size());
  for (std::size_t c = 0; c < cfg.k; ++c) {
    std::size_t total = 0;
    for (const auto& [_, count] : all_words[c].top_words) total += count;
    auto row = result.topic_word.row(c);
    if (total == 0) {
      std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(vocab.size()));
      continue;
    }
    for (const auto& [word, count] : all_words[c].top_words) {
      row[*vocab.find(word)] = static_cast<double>(count) / static_cast<double>(total);
    }
  }
  return fit;
}

}  // namespace fbtopics
