// Helpers and independent oracles shared by the unit and acceptance tests.
// The oracles deliberately avoid calling into the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace testing {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("fbtopics-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline double choose2(double n) { return n * (n - 1.0) / 2.0; }

// Adjusted Rand index from the contingency table:
// (sum_ij C(n_ij,2) - E) / (0.5 (sum_i C(a_i,2) + sum_j C(b_j,2)) - E),
// E = sum_i C(a_i,2) sum_j C(b_j,2) / C(n,2).
inline double adjusted_rand_index(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
  std::map<std::pair<std::size_t, std::size_t>, double> table;
  std::map<std::size_t, double> rows, cols;
  for (std::size_t i = 0; i < x.size(); ++i) {
    table[{x[i], y[i]}] += 1;
    rows[x[i]] += 1;
    cols[y[i]] += 1;
  }
  double index = 0, sum_rows = 0, sum_cols = 0;
  for (const auto& [_, n] : table) index += choose2(n);
  for (const auto& [_, n] : rows) sum_rows += choose2(n);
  for (const auto& [_, n] : cols) sum_cols += choose2(n);
  const double expected = sum_rows * sum_cols / choose2(static_cast<double>(x.size()));
  const double max_index = 0.5 * (sum_rows + sum_cols);
  if (max_index == expected) return 1.0;  // both partitions trivial
  return (index - expected) / (max_index - expected);
}

// Rank-biased overlap by direct set intersection at every depth, truncated at
// the shorter list.
inline double rbo_oracle(const std::vector<std::string>& s, const std::vector<std::string>& t, double p) {
  const std::size_t depth = std::min(s.size(), t.size());
  double sum = 0.0;
  for (std::size_t d = 1; d <= depth; ++d) {
    std::set<std::string> a(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(d));
    std::set<std::string> b(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(d));
    std::vector<std::string> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    sum += std::pow(p, static_cast<double>(d - 1)) * static_cast<double>(common.size()) / static_cast<double>(d);
  }
  return (1.0 - p) * sum;
}

// NPMI straight from document-level occurrence, each document one window.
inline double npmi_oracle(const std::vector<std::vector<std::string>>& docs, const std::string& a,
                          const std::string& b, double eps) {
  double na = 0, nb = 0, nab = 0;
  for (const auto& d : docs) {
    const bool ha = std::find(d.begin(), d.end(), a) != d.end();
    const bool hb = std::find(d.begin(), d.end(), b) != d.end();
    na += ha;
    nb += hb;
    nab += ha && hb;
  }
  const double n = static_cast<double>(docs.size());
  const double pab = nab / n + eps;
  return std::log2(pab / ((na / n) * (nb / n))) / -std::log2(pab);
}

// Every topic's top words come from a single planted group ("g<group>w<i>").
inline bool topics_aligned(const std::vector<std::vector<std::string>>& lists) {
  std::set<std::string> groups_seen;
  for (const auto& list : lists) {
    std::set<std::string> groups;
    for (const auto& w : list) groups.insert(w.substr(0, w.find('w')));
    if (groups.size() != 1) return false;
    groups_seen.insert(*groups.begin());
  }
  return groups_seen.size() == lists.size();
}

}  // namespace testing
