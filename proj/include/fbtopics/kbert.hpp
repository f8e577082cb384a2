#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fbtopics/corpus.hpp"
#include "fbtopics/embeddings.hpp"
#include "fbtopics/kmeans.hpp"
#include "fbtopics/topic_model.hpp"
#include "fbtopics/vocabulary.hpp"

namespace fbtopics {

struct ClusterTopic {
  std::size_t cluster_id = 0;
  std::vector<std::string> representative_doc_ids;  // nearest first
  std::vector<std::pair<std::string, std::size_t>> top_words;
};

// For each cluster, takes the m members nearest the centroid (all members when
// the cluster is smaller) and ranks vocabulary words by their total count in
// those documents' tokens, ties broken by ascending word id.
std::vector<ClusterTopic> extract_cluster_topics(const ClusterResult& clusters,
                                                 const EmbeddingMatrix& embeddings,
                                                 const Corpus& corpus, const Vocabulary& vocab,
                                                 std::size_t m, std::size_t top_k);

struct KbertConfig {
  std::size_t k = 3;
  std::uint64_t seed = 0;
  std::size_t representatives = 10;
  std::size_t top_k = 10;
  bool normalize = false;  // cluster unit-length rows
  std::size_t max_iter = 300;
  double tol = 1e-6;
};

struct KbertFit {
  TopicModelResult result;
  ClusterResult clusters;
  std::vector<ClusterTopic> topics;
};

// Embeddings must be aligned with the corpus. doc_topic rows are one-hot
// cluster memberships; topic_word rows are normalized word counts over each
// cluster's representatives (uniform when those documents have no
// in-vocabulary tokens).
KbertFit kbert_fit(const Corpus& corpus, const Vocabulary& vocab, const EmbeddingMatrix& embeddings,
                   const KbertConfig& cfg);

}  // namespace fbtopics
