#pragma once

#include <cstdint>
#include <vector>

#include "fbtopics/corpus.hpp"
#include "fbtopics/embeddings.hpp"
#include "fbtopics/matrix.hpp"

namespace fbtopics::synthetic {

struct LabeledCorpus {
  Corpus corpus;
  std::vector<std::size_t> labels;
};

// groups x docs_per_group documents; each token is drawn uniformly from its
// group's private vocabulary of words_per_group words ("g<group>w<index>").
LabeledCorpus disjoint_vocabulary(std::size_t groups, std::size_t docs_per_group,
                                  std::size_t tokens_per_doc, std::size_t words_per_group,
                                  std::uint64_t seed);

struct Blobs {
  DenseMatrix points;
  std::vector<std::size_t> labels;
};

/// Isotropic Gaussian clusters with centres drawn uniformly in [-separation, separation]^dim.
Blobs gaussian_blobs(std::size_t clusters, std::size_t points_per_cluster, std::size_t dim,
                     double separation, double spread, std::uint64_t seed);

struct FeedbackFixture {
  Corpus corpus;  // raw text only; run preprocess() before modeling
  std::vector<std::size_t> labels;
  EmbeddingMatrix embeddings;
};

// Short patient-style comments over three planted themes (staff conduct and
// cleanliness, safety protocols, efficiency of service). Each comment mixes
// theme words drawn from a decaying distribution, a few words shared by all
// themes, and stopword filler. Embeddings sit around a per-theme centre; a
// comment's scatter around the centre grows with its share of shared or
// off-theme words, so the most on-theme comments are nearest their centroid.
FeedbackFixture planted_feedback(std::size_t docs_per_theme, std::uint64_t seed,
                                 std::size_t dim = 16);

}  // namespace fbtopics::synthetic
