#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fbtopics/corpus.hpp"
#include "fbtopics/lemmatizer.hpp"

namespace fbtopics {

enum class KeywordCategory { kFull, kShort, kPrefix, kJargon };

KeywordCategory parse_keyword_category(std::string_view text);
std::string_view to_string(KeywordCategory category);

struct KeywordEntry {
  std::string surface;
  KeywordCategory category;
  // Prefix entries only: tokens starting with any of these are not hits.
  std::vector<std::string> guards;

  bool operator==(const KeywordEntry&) const = default;
};

// CSV `surface,category[,guard]` with guards separated by '|'. '#' lines and
// an optional header row are skipped. Rejects unknown categories, duplicate
// (surface, category) pairs, prefixes longer than 4 characters and short
// keywords under 4 characters.
std::vector<KeywordEntry> load_lexicon(const std::filesystem::path& path);

/// Lemma -> forms across noun/verb/adjective/adverb, from a TSV `lemma<TAB>pos<TAB>form`.
class WordForms {
 public:
  struct Form {
    Pos pos;
    std::string form;
  };

  WordForms() = default;
  static WordForms load(const std::filesystem::path& path);

  void add(std::string lemma, Pos pos, std::string form);

  // Every form of every family the keyword belongs to (as a lemma or as one
  // of the forms), always including the keyword itself.
  std::set<std::string> forms(std::string_view keyword) const;
  /// Same, keeping each form's POS tag (the keyword itself is tagged kUnknown).
  std::vector<Form> tagged_forms(std::string_view keyword) const;

 private:
  std::map<std::string, std::vector<Form>> families_;
  std::unordered_map<std::string, std::vector<std::string>> family_of_form_;
};

struct ExpandedLexicon {
  std::set<std::string> lemma_set;
  std::vector<KeywordEntry> prefixes;
  std::set<std::string> jargon;
  // lemma_set member -> the entries it was derived from, in lexicon order.
  std::map<std::string, std::vector<KeywordEntry>> provenance;
};

enum class ExpansionMode {
  kExact,     // raw Full/Short surfaces
  kLemma,     // lemmatized surfaces
  kLemmaPos,  // lemmatized word forms across POS
};

ExpansionMode parse_expansion_mode(std::string_view text);
std::string_view to_string(ExpansionMode mode);

ExpandedLexicon expand_lexicon(std::span<const KeywordEntry> entries, const WordForms& forms,
                               const Lemmatizer& lemmatizer,
                               ExpansionMode mode = ExpansionMode::kLemmaPos);

enum class MatchKind { kNone, kPrefixHit, kJargonHit, kLemmaHit };
std::string_view to_string(MatchKind kind);

struct TokenMatch {
  MatchKind kind = MatchKind::kNone;
  std::string form;
  KeywordCategory category = KeywordCategory::kFull;

  explicit operator bool() const noexcept { return kind != MatchKind::kNone; }
};

// Prefix -> jargon -> lemma; the first hit wins. In kExact expansion the
// lemma stage compares the raw token instead of its lemma.
TokenMatch match_token(std::string_view token, const ExpandedLexicon& lex,
                       const Lemmatizer& lemmatizer,
                       ExpansionMode mode = ExpansionMode::kLemmaPos);

struct TraceEntry {
  std::string token;
  std::string form;
  KeywordCategory category;
  MatchKind kind;
};

struct FilterResult {
  std::vector<std::string> negatives;
  std::vector<std::string> positives;
  // Keyed by negative document id.
  std::map<std::string, std::vector<TraceEntry>> match_trace;
};

/// One verdict per document: negative iff at least one token matches.
FilterResult filter_feedback(const Corpus& corpus, const ExpandedLexicon& lex,
                             const Lemmatizer& lemmatizer,
                             ExpansionMode mode = ExpansionMode::kLemmaPos);

/// Number of documents flagged when the lexicon is expanded with `mode`.
std::size_t match_count(const Corpus& corpus, std::span<const KeywordEntry> entries,
                        const WordForms& forms, const Lemmatizer& lemmatizer, ExpansionMode mode);

}  // namespace fbtopics
