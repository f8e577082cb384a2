#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace fbtopics {

/// NFC-normalizes then case-folds UTF-8 text. Invalid sequences become U+FFFD.
std::string normalize(std::string_view text);

// Splits text into lowercased tokens: maximal runs of letters and digits,
// with apostrophes kept only between two alphanumerics ("don't", "staff's").
// Curly apostrophes are folded to '\''. Everything else separates tokens,
// including hyphens.
std::vector<std::string> tokenize(std::string_view text);

class StopwordSet {
 public:
  StopwordSet() = default;
  explicit StopwordSet(std::span<const std::string> words) { add(words); }
  StopwordSet(std::initializer_list<std::string_view> words);

  /// UTF-8 file, one word per line; '#' starts a comment.
  static StopwordSet load(const std::filesystem::path& path);

  /// Entries are normalized the same way tokens are.
  void add(std::string_view word);
  void add(std::span<const std::string> words);

  bool contains(std::string_view word) const { return words_.contains(std::string(word)); }
  std::size_t size() const noexcept { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
};

/// Drops every stopword; relative order of the rest is preserved.
std::vector<std::string> remove_stopwords(std::span<const std::string> tokens,
                                          const StopwordSet& stopwords);

}  // namespace fbtopics
