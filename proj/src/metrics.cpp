#include "fbtopics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "fbtopics/error.hpp"
#include "fbtopics/log.hpp"

namespace fbtopics {

bool CooccurrenceCounts::contains(std::string_view word) const {
  return postings_.contains(std::string(word));
}

std::size_t CooccurrenceCounts::count(std::string_view word) const {
  auto it = postings_.find(std::string(word));
  return it == postings_.end() ? 0 : it->second.size();
}

std::size_t CooccurrenceCounts::count(std::string_view a, std::string_view b) const {
  auto ia = postings_.find(std::string(a));
  auto ib = postings_.find(std::string(b));
  if (ia == postings_.end() || ib == postings_.end()) return 0;
  const auto& x = ia->second;
  const auto& y = ib->second;
  std::size_t common = 0;
  for (std::size_t i = 0, j = 0; i < x.size() && j < y.size();) {
    if (x[i] < y[j]) {
      ++i;
    } else if (y[j] < x[i]) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return common;
}

CooccurrenceCounts build_counts(const Corpus& corpus, WindowMode mode) {
  if (corpus.empty()) throw Error("cannot build co-occurrence counts from an empty corpus");
  CooccurrenceCounts counts;
  counts.mode_ = mode;
  std::size_t window = 0;
  auto add_window = [&](auto begin, auto end) {
    std::unordered_set<std::string_view> seen;
    for (auto it = begin; it != end; ++it) {
      if (seen.insert(*it).second) counts.postings_[*it].push_back(window);
    }
    ++window;
  };
  for (const auto& doc : corpus.documents()) {
    const auto& t = doc.tokens;
    if (mode.is_document() || t.size() <= mode.width) {
      add_window(t.begin(), t.end());
    } else {
      for (std::size_t start = 0; start + mode.width <= t.size(); ++start) {
        add_window(t.begin() + static_cast<std::ptrdiff_t>(start),
                   t.begin() + static_cast<std::ptrdiff_t>(start + mode.width));
      }
    }
  }
  counts.total_windows_ = window;
  return counts;
}

double npmi(std::string_view a, std::string_view b, const CooccurrenceCounts& counts, double epsilon) {
  const std::size_t ca = counts.count(a);
  const std::size_t cb = counts.count(b);
  if (ca == 0 || cb == 0) return -1.0;
  const double total = static_cast<double>(counts.total_windows());
  const std::size_t cab = counts.count(a, b);
  if (cab == counts.total_windows()) return 1.0;
  const double joint = static_cast<double>(cab) / total + epsilon;
  const double pa = static_cast<double>(ca) / total;
  const double pb = static_cast<double>(cb) / total;
  return std::log2(joint / (pa * pb)) / -std::log2(joint);
}

CoherenceReport cv_coherence(std::span<const std::vector<std::string>> topics, const CooccurrenceCounts& counts,
                             const CoherenceOptions& options) {
  CoherenceReport report;
  report.top_n = options.top_n;
  report.gamma = options.gamma;
  report.epsilon = options.epsilon;

  std::unordered_set<std::string> missing_seen;
  double sum = 0.0;
  std::size_t scored = 0;
  for (std::size_t t = 0; t < topics.size(); ++t) {
    std::vector<std::string_view> words;
    for (std::size_t i = 0; i < std::min(options.top_n, topics[t].size()); ++i) {
      const auto& w = topics[t][i];
      if (counts.contains(w)) {
        words.push_back(w);
      } else if (missing_seen.insert(w).second) {
        report.missing_words.push_back(w);
      }
    }
    if (words.size() < 2) {
      log::warn("coherence: topic " + std::to_string(t) + " has fewer than two scorable words; excluded");
      report.per_topic.push_back(std::nullopt);
      continue;
    }
    double topic_sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < words.size(); ++i) {
      for (std::size_t j = i + 1; j < words.size(); ++j) {
        const double x = npmi(words[i], words[j], counts, options.epsilon);
        topic_sum += std::copysign(std::pow(std::abs(x), options.gamma), x);
        ++pairs;
      }
    }
    const double score = topic_sum / static_cast<double>(pairs);
    report.per_topic.push_back(score);
    sum += score;
    ++scored;
  }
  report.mean_cv = scored ? sum / static_cast<double>(scored) : 0.0;
  return report;
}

double rbo(std::span<const std::string> s, std::span<const std::string> t, double p) {
  if (s.empty() || t.empty()) throw Error("rbo: ranked lists must be non-empty");
  if (!(p > 0.0 && p < 1.0)) throw Error("rbo: p must lie in (0, 1)");
  auto check_unique = [](std::span<const std::string> list) {
    std::unordered_set<std::string_view> seen;
    for (const auto& w : list) {
      if (!seen.insert(w).second) throw Error("rbo: duplicate item '" + w + "' in ranked list");
    }
  };
  check_unique(s);
  check_unique(t);

  const std::size_t depth = std::min(s.size(), t.size());
  std::unordered_set<std::string_view> seen_s, seen_t;
  std::size_t overlap = 0;
  double weight = 1.0 - p;
  double sum = 0.0;
  for (std::size_t d = 1; d <= depth; ++d) {
    const std::string_view x = s[d - 1];
    const std::string_view y = t[d - 1];
    if (x == y) {
      ++overlap;
    } else {
      if (seen_t.contains(x)) ++overlap;
      if (seen_s.contains(y)) ++overlap;
    }
    seen_s.insert(x);
    seen_t.insert(y);
    sum += weight * static_cast<double>(overlap) / static_cast<double>(d);
    weight *= p;
  }
  return sum;
}

DiversityReport irbo_avg(std::span<const std::vector<std::string>> topics, double p) {
  const std::size_t k = topics.size();
  if (k < 2) throw Error("irbo_avg needs at least two topics");
  DiversityReport report;
  report.p = p;
  report.pairwise_rbo.assign(k, std::vector<double>(k, 1.0));
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const double r = rbo(topics[i], topics[j], p);
      report.pairwise_rbo[i][j] = report.pairwise_rbo[j][i] = r;
      sum += 1.0 - r;
    }
  }
  report.irbo_avg = sum / static_cast<double>(k * (k - 1) / 2);
  return report;
}

nlohmann::json to_json(const CoherenceReport& report) {
  nlohmann::json per_topic = nlohmann::json::array();
  for (const auto& v : report.per_topic) per_topic.push_back(v ? nlohmann::json(*v) : nlohmann::json());
  return {{"per_topic", per_topic},
          {"mean_cv", report.mean_cv},
          {"top_n", report.top_n},
          {"gamma", report.gamma},
          {"epsilon", report.epsilon},
          {"missing_words", report.missing_words},
          {"definition", "mean pairwise sign-preserving NPMI^gamma over top_n words"}};
}

nlohmann::json to_json(const DiversityReport& report) {
  return {{"pairwise_rbo", report.pairwise_rbo},
          {"irbo_avg", report.irbo_avg},
          {"p", report.p},
          {"rbo_convention", "truncated at min list length, no extrapolation"}};
}

}  // namespace fbtopics
