#include "fbtopics/lemmatizer.hpp"

#include <array>
#include <fstream>

#include "fbtopics/error.hpp"
#include "fbtopics/text.hpp"

namespace fbtopics {
namespace {

struct SuffixRule {
  std::string_view suffix;
  std::string_view replacement;
  bool undouble;  // "stopped" -> "stopp" -> "stop"
};

constexpr std::array kNounRules{
    SuffixRule{"ies", "y", false},
    SuffixRule{"es", "", false},
    SuffixRule{"s", "", false},
};

constexpr std::array kVerbRules{
    SuffixRule{"ies", "y", false}, SuffixRule{"ied", "y", false}, SuffixRule{"es", "", false},
    SuffixRule{"s", "", false},    SuffixRule{"ing", "", true},   SuffixRule{"ing", "e", false},
    SuffixRule{"ing", "", false},  SuffixRule{"ed", "", true},    SuffixRule{"ed", "e", false},
    SuffixRule{"ed", "", false},
};

constexpr std::array kAdjRules{
    SuffixRule{"iest", "y", false}, SuffixRule{"ier", "y", false}, SuffixRule{"est", "", true},
    SuffixRule{"est", "e", false},  SuffixRule{"est", "", false},  SuffixRule{"er", "", true},
    SuffixRule{"er", "e", false},   SuffixRule{"er", "", false},
};

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

std::optional<std::string> apply(std::string_view token, const SuffixRule& rule) {
  if (token.size() <= rule.suffix.size() + 1 || !token.ends_with(rule.suffix)) return std::nullopt;
  std::string stem(token.substr(0, token.size() - rule.suffix.size()));
  if (rule.suffix == "s" && (stem.ends_with('s') || stem.ends_with('u') || stem.ends_with('i'))) {
    return std::nullopt;  // "class", "bus", "analysis"
  }
  if (rule.undouble) {
    const std::size_t n = stem.size();
    if (n < 3 || stem[n - 1] != stem[n - 2] || is_vowel(stem[n - 1])) return std::nullopt;
    stem.pop_back();
  }
  stem += rule.replacement;
  return stem;
}

template <std::size_t N>
std::optional<std::string> first_known(std::string_view token, const std::array<SuffixRule, N>& rules,
                                       const Lemmatizer& lemmatizer) {
  for (const auto& rule : rules) {
    if (auto candidate = apply(token, rule); candidate && lemmatizer.is_known_lemma(*candidate)) {
      return candidate;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Pos> parse_pos(std::string_view text) {
  if (text == "noun" || text == "n") return Pos::kNoun;
  if (text == "verb" || text == "v") return Pos::kVerb;
  if (text == "adj" || text == "a" || text == "s") return Pos::kAdj;
  if (text == "adv" || text == "r") return Pos::kAdv;
  if (text == "unknown" || text == "x") return Pos::kUnknown;
  return std::nullopt;
}

std::string_view to_string(Pos pos) {
  switch (pos) {
    case Pos::kNoun: return "noun";
    case Pos::kVerb: return "verb";
    case Pos::kAdj: return "adj";
    case Pos::kAdv: return "adv";
    case Pos::kUnknown: break;
  }
  return "unknown";
}

Lemmatizer Lemmatizer::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lemma lexicon " + path.string());
  Lemmatizer lemmatizer;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos) throw ParseError(path.string(), line_no, "expected 3 tab-separated columns");
    const auto pos = parse_pos(std::string_view(line).substr(tab1 + 1, tab2 - tab1 - 1));
    if (!pos) throw ParseError(path.string(), line_no, "unknown part of speech");
    lemmatizer.add(normalize(line.substr(0, tab1)), *pos, normalize(line.substr(tab2 + 1)));
  }
  return lemmatizer;
}

void Lemmatizer::add(std::string inflected, Pos pos, std::string lemma) {
  lemmas_.insert(lemma);
  table_[std::move(inflected)].push_back({pos, std::move(lemma)});
  ++rows_;
}

std::string Lemmatizer::lemmatize(std::string_view token, Pos pos) const {
  if (auto it = table_.find(std::string(token)); it != table_.end()) {
    for (const auto& entry : it->second) {
      if (pos == Pos::kUnknown || entry.pos == pos) return entry.lemma;
    }
  }
  if (is_known_lemma(token)) return std::string(token);

  std::optional<std::string> candidate;
  switch (pos) {
    case Pos::kNoun: candidate = first_known(token, kNounRules, *this); break;
    case Pos::kVerb: candidate = first_known(token, kVerbRules, *this); break;
    case Pos::kAdj: candidate = first_known(token, kAdjRules, *this); break;
    case Pos::kAdv: break;
    case Pos::kUnknown:
      candidate = first_known(token, kVerbRules, *this);
      if (!candidate) candidate = first_known(token, kNounRules, *this);
      if (!candidate) candidate = first_known(token, kAdjRules, *this);
      break;
  }
  return candidate.value_or(std::string(token));
}

}  // namespace fbtopics
