#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fbtopics/error.hpp"
#include "fbtopics/kbert.hpp"
#include "fbtopics/kmeans.hpp"
#include "fbtopics/metrics.hpp"
#include "fbtopics/random.hpp"
#include "fbtopics/synthetic.hpp"
#include "fbtopics/assets.hpp"
#include "support.hpp"

using namespace fbtopics;

namespace {

DenseMatrix random_points(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  DenseMatrix m(n, d);
  for (double& v : m.data()) v = rng.normal();
  return m;
}

EmbeddingMatrix as_embeddings(const DenseMatrix& points) {
  EmbeddingMatrix e{points, {}};
  for (std::size_t i = 0; i < points.rows(); ++i) e.doc_ids.push_back(std::to_string(i));
  return e;
}

}  // namespace

TEST_SUITE("kmeans") {

TEST_CASE("Lloyd inertia never increases") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto pts = random_points(200, 5, seed);
    const auto r = kmeans_fit(pts, {.k = 6, .seed = seed});
    REQUIRE(!r.inertia_history.empty());
    for (std::size_t i = 1; i < r.inertia_history.size(); ++i) {
      CHECK(r.inertia_history[i] <= r.inertia_history[i - 1] + 1e-9);
    }
    CHECK(r.inertia == doctest::Approx(r.inertia_history.back()));
  }
}

TEST_CASE("three blobs are recovered") {
  const auto blobs = synthetic::gaussian_blobs(3, 100, 8, 10.0, 1.0, 17);
  const auto r = kmeans_fit(blobs.points, {.k = 3, .seed = 17});
  CHECK(testing::adjusted_rand_index(r.assignment, blobs.labels) >= 0.99);
  CHECK(r.converged);
  CHECK(r.centroids.rows() == 3);
  CHECK(r.centroids.cols() == 8);
}

TEST_CASE("converged state: centroids are member means, points sit at their nearest centroid") {
  const auto pts = random_points(150, 3, 4);
  const auto r = kmeans_fit(pts, {.k = 4, .seed = 4});
  REQUIRE(r.converged);
  for (std::size_t c = 0; c < 4; ++c) {
    std::vector<double> mean(3, 0.0);
    std::size_t n = 0;
    for (std::size_t i = 0; i < pts.rows(); ++i) {
      if (r.assignment[i] != c) continue;
      ++n;
      for (std::size_t j = 0; j < 3; ++j) mean[j] += pts(i, j);
    }
    REQUIRE(n > 0);
    for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(mean[j] / static_cast<double>(n) - r.centroids(c, j)) <= 1e-9);
  }
  double inertia = 0.0;
  for (std::size_t i = 0; i < pts.rows(); ++i) {
    const double own = squared_distance(pts.row(i), r.centroids.row(r.assignment[i]));
    inertia += own;
    for (std::size_t c = 0; c < 4; ++c) CHECK(own <= squared_distance(pts.row(i), r.centroids.row(c)) + 1e-9);
  }
  CHECK(r.inertia == doctest::Approx(inertia).epsilon(1e-12));
}

TEST_CASE("k = n gives zero inertia") {
  const auto pts = random_points(12, 4, 2);
  const auto r = kmeans_fit(pts, {.k = 12, .seed = 2});
  CHECK(r.inertia == 0.0);
  std::vector<std::size_t> sorted = r.assignment;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::size_t> expected(12);
  std::iota(expected.begin(), expected.end(), 0);
  CHECK(sorted == expected);
}

TEST_CASE("identical points with k = 2 converge") {
  DenseMatrix pts(20, 3, 1.5);
  const auto r = kmeans_fit(pts, {.k = 2, .seed = 1});
  CHECK(r.converged);
  CHECK(r.inertia == 0.0);
  for (auto a : r.assignment) CHECK(a < 2);
}

TEST_CASE("permuting rows permutes assignments under fixed initial centroids") {
  const auto pts = random_points(60, 4, 8);
  DenseMatrix init(3, 4);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t j = 0; j < 4; ++j) init(c, j) = pts(c * 7, j);
  }
  const auto base = kmeans_fit(pts, {.k = 3, .initial_centroids = init});

  std::vector<std::size_t> perm(60);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(3);
  for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.index(i + 1)]);
  DenseMatrix shuffled(60, 4);
  for (std::size_t i = 0; i < 60; ++i) {
    for (std::size_t j = 0; j < 4; ++j) shuffled(i, j) = pts(perm[i], j);
  }
  const auto moved = kmeans_fit(shuffled, {.k = 3, .initial_centroids = init});
  for (std::size_t i = 0; i < 60; ++i) CHECK(moved.assignment[i] == base.assignment[perm[i]]);
  CHECK(moved.inertia == doctest::Approx(base.inertia).epsilon(1e-12));
}

TEST_CASE("same seed, same clustering") {
  const auto pts = random_points(100, 6, 5);
  const auto a = kmeans_fit(pts, {.k = 5, .seed = 42});
  const auto b = kmeans_fit(pts, {.k = 5, .seed = 42});
  CHECK(a.assignment == b.assignment);
  CHECK(a.centroids == b.centroids);
}

TEST_CASE("k-means++ picks distinct data points") {
  const auto pts = random_points(30, 2, 6);
  const auto c = kmeans_plus_plus(pts, 5, 6);
  CHECK(c.rows() == 5);
  for (std::size_t a = 0; a < 5; ++a) {
    bool found = false;
    for (std::size_t i = 0; i < pts.rows(); ++i) found |= squared_distance(c.row(a), pts.row(i)) == 0.0;
    CHECK(found);
    for (std::size_t b = a + 1; b < 5; ++b) CHECK(squared_distance(c.row(a), c.row(b)) > 0.0);
  }
}

TEST_CASE("invalid k") {
  const auto pts = random_points(5, 2, 1);
  CHECK_THROWS_AS(kmeans_fit(pts, {.k = 0}), Error);
  CHECK_THROWS_AS(kmeans_fit(pts, {.k = 6}), Error);
  CHECK_THROWS_AS(kmeans_fit(pts, {.k = 2, .initial_centroids = DenseMatrix(3, 2)}), Error);
}

}  // TEST_SUITE

TEST_SUITE("kbert") {

TEST_CASE("representative word counts break ties by word id") {
  const auto corpus = Corpus::from_tokens({{"doctor", "time"}, {"doctor", "time"}, {"doctor", "time"}, {"nurse"}});
  const auto vocab = build_vocabulary(corpus);
  DenseMatrix pts(4, 1);
  pts(0, 0) = 0.0;
  pts(1, 0) = 0.1;
  pts(2, 0) = -0.1;
  pts(3, 0) = 5.0;
  ClusterResult clusters;
  clusters.assignment = {0, 0, 0, 0};
  clusters.centroids = DenseMatrix(1, 1, 0.0);
  const auto topics = extract_cluster_topics(clusters, as_embeddings(pts), corpus, vocab, 3, 5);
  REQUIRE(topics.size() == 1);
  using Ranked = std::vector<std::pair<std::string, std::size_t>>;
  CHECK(topics[0].top_words == Ranked{{"doctor", 3}, {"time", 3}});
  CHECK(topics[0].representative_doc_ids == std::vector<std::string>{"0", "1", "2"});
}

TEST_CASE("small clusters use every member") {
  const auto corpus = Corpus::from_tokens({{"a"}, {"b", "b"}, {"c"}});
  const auto vocab = build_vocabulary(corpus);
  DenseMatrix pts(3, 1);
  pts(0, 0) = 0.0;
  pts(1, 0) = 1.0;
  pts(2, 0) = 10.0;
  ClusterResult clusters;
  clusters.assignment = {0, 0, 1};
  clusters.centroids = DenseMatrix(2, 1);
  clusters.centroids(0, 0) = 0.9;
  clusters.centroids(1, 0) = 10.0;
  const auto topics = extract_cluster_topics(clusters, as_embeddings(pts), corpus, vocab, 10, 5);
  // Nearest first: doc 1 sits at distance 0.1, doc 0 at 0.9.
  CHECK(topics[0].representative_doc_ids == std::vector<std::string>{"1", "0"});
  CHECK(topics[0].top_words.front() == std::pair<std::string, std::size_t>{"b", 2});
  CHECK(topics[1].representative_doc_ids == std::vector<std::string>{"2"});
}

TEST_CASE("k = 1 is one topic holding every document") {
  const auto blobs = synthetic::gaussian_blobs(2, 10, 3, 5.0, 0.5, 3);
  std::vector<std::vector<std::string>> docs(20, {"x", "y"});
  const auto corpus = Corpus::from_tokens(docs);
  const auto fit = kbert_fit(corpus, build_vocabulary(corpus), as_embeddings(blobs.points), {.k = 1, .seed = 3});
  CHECK(fit.result.num_topics() == 1);
  for (std::size_t d = 0; d < 20; ++d) CHECK(fit.result.doc_topic(d, 0) == 1.0);
}

TEST_CASE("blob embeddings give one-hot topics for each cluster") {
  const auto blobs = synthetic::gaussian_blobs(3, 40, 8, 10.0, 1.0, 9);
  std::vector<std::vector<std::string>> docs;
  for (auto label : blobs.labels) docs.push_back({"w" + std::to_string(label), "shared"});
  const auto corpus = Corpus::from_tokens(docs);
  const auto fit = kbert_fit(corpus, build_vocabulary(corpus), as_embeddings(blobs.points), {.k = 3, .seed = 9});
  CHECK(fit.result.num_topics() == 3);
  CHECK(fit.result.model_tag == ModelTag::kKbert);
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const auto row = fit.result.doc_topic.row(d);
    CHECK(std::count(row.begin(), row.end(), 1.0) == 1);
    CHECK(std::accumulate(row.begin(), row.end(), 0.0) == 1.0);
  }
  CHECK(testing::adjusted_rand_index(fit.result.hard_assignment(), blobs.labels) >= 0.99);
  for (std::size_t k = 0; k < 3; ++k) {
    const auto row = fit.result.topic_word.row(k);
    CHECK(std::accumulate(row.begin(), row.end(), 0.0) == doctest::Approx(1.0));
  }
}

TEST_CASE("planted feedback themes give disjoint top-5 lists") {
  const auto assets = Assets::load(AssetPaths::defaults());
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto fx = synthetic::planted_feedback(100, seed);
    const auto corpus = preprocess(fx.corpus, assets.stopwords);
    const auto fit = kbert_fit(corpus, build_vocabulary(corpus), fx.embeddings, {.k = 3, .seed = seed});
    const auto lists = fit.result.topic_word_lists(5);
    CHECK(irbo_avg(lists).irbo_avg == 1.0);
  }
}

TEST_CASE("misaligned embeddings are rejected") {
  const auto corpus = Corpus::from_tokens({{"a"}, {"b"}});
  EmbeddingMatrix e{DenseMatrix(2, 1), {"1", "0"}};
  CHECK_THROWS_AS(kbert_fit(corpus, build_vocabulary(corpus), e, {.k = 1}), Error);
}

}  // TEST_SUITE
