#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fbtopics/corpus.hpp"

namespace fbtopics {

// Document mode treats every document as one window; sliding mode uses
// windows of `width` tokens with stride 1 inside each document (a document
// shorter than the width is a single window).
struct WindowMode {
  std::size_t width = 0;  // 0 = document mode

  static WindowMode document() { return {}; }
  static WindowMode sliding(std::size_t width) { return {width}; }
  bool is_document() const noexcept { return width == 0; }
};

/// Boolean window occurrence counts for words and word pairs.
class CooccurrenceCounts {
 public:
  std::size_t total_windows() const noexcept { return total_windows_; }
  WindowMode mode() const noexcept { return mode_; }

  bool contains(std::string_view word) const;
  std::size_t count(std::string_view word) const;
  std::size_t count(std::string_view a, std::string_view b) const;

 private:
  friend CooccurrenceCounts build_counts(const Corpus&, WindowMode);
  WindowMode mode_;
  std::size_t total_windows_ = 0;
  // Sorted window indices per word.
  std::unordered_map<std::string, std::vector<std::size_t>> postings_;
};

/// Throws Error on an empty corpus.
CooccurrenceCounts build_counts(const Corpus& corpus, WindowMode mode = WindowMode::document());

// log2((P(a,b) + eps) / (P(a) P(b))) / -log2(P(a,b) + eps), probabilities as
// window ratios. Words present in every window together score 1. A word
// absent from the counts has no defined marginal; the pair scores -1.
double npmi(std::string_view a, std::string_view b, const CooccurrenceCounts& counts,
            double epsilon = 1e-12);

struct CoherenceOptions {
  std::size_t top_n = 5;
  double gamma = 1.0;
  double epsilon = 1e-12;
};

struct CoherenceReport {
  std::vector<std::optional<double>> per_topic;  // nullopt: fewer than 2 scorable words
  double mean_cv = 0.0;                          // over scored topics
  std::size_t top_n = 0;
  double gamma = 1.0;
  double epsilon = 0.0;
  std::vector<std::string> missing_words;  // top words absent from the counts
};

// Per topic: mean over unordered pairs of its first top_n in-count words of
// sign(x) |x|^gamma, x = NPMI. Out-of-count words are skipped and listed.
CoherenceReport cv_coherence(std::span<const std::vector<std::string>> topics,
                             const CooccurrenceCounts& counts, const CoherenceOptions& options = {});

// Rank-biased overlap truncated at depth min(|S|, |T|) with no extrapolation:
// (1 - p) sum_{d=1..l} p^(d-1) |S[:d] & T[:d]| / d.
// Throws Error on an empty list, a duplicate within a list, or p outside (0, 1).
double rbo(std::span<const std::string> s, std::span<const std::string> t, double p = 0.9);

struct DiversityReport {
  std::vector<std::vector<double>> pairwise_rbo;  // unit diagonal
  double irbo_avg = 0.0;
  double p = 0.9;
};

/// Mean of 1 - rbo over unordered topic pairs. Throws Error for fewer than two lists.
DiversityReport irbo_avg(std::span<const std::vector<std::string>> topics, double p = 0.9);

nlohmann::json to_json(const CoherenceReport& report);
nlohmann::json to_json(const DiversityReport& report);

}  // namespace fbtopics
