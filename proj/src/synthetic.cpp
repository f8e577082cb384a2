#include "fbtopics/synthetic.hpp"

#include <array>
#include <cmath>
#include <string_view>

#include "fbtopics/random.hpp"

namespace fbtopics::synthetic {

LabeledCorpus disjoint_vocabulary(std::size_t groups, std::size_t docs_per_group, std::size_t tokens_per_doc,
                                  std::size_t words_per_group, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<std::string>> docs;
  std::vector<std::size_t> labels;
  for (std::size_t g = 0; g < groups; ++g) {
    for (std::size_t i = 0; i < docs_per_group; ++i) {
      std::vector<std::string> tokens;
      for (std::size_t t = 0; t < tokens_per_doc; ++t) {
        tokens.push_back("g" + std::to_string(g) + "w" + std::to_string(rng.index(words_per_group)));
      }
      docs.push_back(std::move(tokens));
      labels.push_back(g);
    }
  }
  return {Corpus::from_tokens(std::move(docs)), std::move(labels)};
}

Blobs gaussian_blobs(std::size_t clusters, std::size_t points_per_cluster, std::size_t dim, double separation,
                     double spread, std::uint64_t seed) {
  Rng rng(seed);
  DenseMatrix centres(clusters, dim);
  for (double& v : centres.data()) v = (2.0 * rng.uniform() - 1.0) * separation;
  Blobs blobs{DenseMatrix(clusters * points_per_cluster, dim), {}};
  for (std::size_t c = 0; c < clusters; ++c) {
    for (std::size_t i = 0; i < points_per_cluster; ++i) {
      const std::size_t row = c * points_per_cluster + i;
      for (std::size_t j = 0; j < dim; ++j) blobs.points(row, j) = centres(c, j) + spread * rng.normal();
      blobs.labels.push_back(c);
    }
  }
  return blobs;
}

namespace {

constexpr std::array<std::array<std::string_view, 12>, 3> kThemeWords{{
    {"clean", "good", "professional", "friendly", "great", "courteous", "kind", "respectful", "tidy",
     "polite", "spotless", "helpful"},
    {"mask", "wearing", "safe", "gloves", "sanitizer", "distancing", "precautions", "covid", "screening",
     "protocols", "masks", "hygiene"},
    {"wait", "doctor", "appointment", "waiting", "room", "late", "hours", "schedule", "delayed", "minutes",
     "arrived", "rescheduled"},
}};

constexpr std::array<std::string_view, 6> kSharedWords{"hospital", "staff", "visit", "experience", "nurse", "care"};
constexpr double kOffThemeRate = 0.08;
constexpr std::array<std::string_view, 8> kFiller{"the", "was", "and", "very", "were", "my", "of", "a"};

// Theme word ranks follow 1/(rank + 1).
std::size_t draw_theme_word(Rng& rng) {
  static const std::vector<double> weights = [] {
    std::vector<double> w;
    for (std::size_t r = 0; r < kThemeWords[0].size(); ++r) w.push_back(1.0 / static_cast<double>(r + 1));
    return w;
  }();
  return rng.categorical(weights);
}

}  // namespace

FeedbackFixture planted_feedback(std::size_t docs_per_theme, std::uint64_t seed, std::size_t dim) {
  Rng rng(seed);
  constexpr std::size_t kThemes = kThemeWords.size();

  DenseMatrix centres(kThemes, dim);
  for (double& v : centres.data()) v = (2.0 * rng.uniform() - 1.0) * 4.0;

  FeedbackFixture fx;
  std::vector<Document> docs;
  fx.embeddings.vectors = DenseMatrix(kThemes * docs_per_theme, dim);
  for (std::size_t theme = 0; theme < kThemes; ++theme) {
    for (std::size_t i = 0; i < docs_per_theme; ++i) {
      const std::size_t row = docs.size();
      const std::size_t length = 4 + rng.index(5);
      const double shared_rate = 0.5 * rng.uniform();
      std::size_t stray = 0;
      std::string text;
      for (std::size_t t = 0; t < length; ++t) {
        if (rng.uniform() < 0.4) {
          text += kFiller[rng.index(kFiller.size())];
          text += ' ';
        }
        const double u = rng.uniform();
        if (u < shared_rate) {
          text += kSharedWords[rng.index(kSharedWords.size())];
          ++stray;
        } else if (u < shared_rate + kOffThemeRate) {
          const std::size_t other = (theme + 1 + rng.index(kThemes - 1)) % kThemes;
          text += kThemeWords[other][draw_theme_word(rng)];
          ++stray;
        } else {
          text += kThemeWords[theme][draw_theme_word(rng)];
        }
        text += t + 1 < length ? " " : ".";
      }
      // Off-theme content scatters the comment further from its blob centre.
      const double stray_share = static_cast<double>(stray) / static_cast<double>(length);
      for (std::size_t j = 0; j < dim; ++j) {
        fx.embeddings.vectors(row, j) = centres(theme, j) + (0.05 + 1.5 * stray_share) * rng.normal();
      }
      const std::string id = "fb" + std::to_string(row);
      fx.embeddings.doc_ids.push_back(id);
      docs.push_back({id, std::move(text), {}});
      fx.labels.push_back(theme);
    }
  }
  fx.corpus = Corpus(std::move(docs), "synthetic:planted_feedback");
  return fx;
}

}  // namespace fbtopics::synthetic
