#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace fbtopics {

enum class Pos { kNoun, kVerb, kAdj, kAdv, kUnknown };

/// Accepts "noun|verb|adj|adv" or the single-letter WordNet codes "n|v|a|r".
std::optional<Pos> parse_pos(std::string_view text);
std::string_view to_string(Pos pos);

// Dictionary lemmatizer backed by a TSV lexicon (`inflected<TAB>pos<TAB>lemma`).
//
// Lookup order:
//   1. an exact lexicon row for (token, pos), or for any pos when pos is
//      kUnknown (first row in file order wins);
//   2. suffix stripping (-s, -es, -ies, -ed, -ing, -er, -est with consonant
//      undoubling and e-restoration), accepted only when the candidate is a
//      lemma the lexicon knows;
//   3. the token unchanged.
class Lemmatizer {
 public:
  Lemmatizer() = default;

  static Lemmatizer load(const std::filesystem::path& path);

  void add(std::string inflected, Pos pos, std::string lemma);

  std::string lemmatize(std::string_view token, Pos pos = Pos::kUnknown) const;

  bool is_known_lemma(std::string_view word) const {
    return lemmas_.contains(std::string(word));
  }
  std::size_t size() const noexcept { return rows_; }

 private:
  struct Entry {
    Pos pos;
    std::string lemma;
  };
  std::unordered_map<std::string, std::vector<Entry>> table_;
  std::unordered_set<std::string> lemmas_;
  std::size_t rows_ = 0;
};

}  // namespace fbtopics
