#include "fbtopics/keywords.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "fbtopics/error.hpp"
#include "fbtopics/text.hpp"

namespace fbtopics {
namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::size_t codepoints(std::string_view utf8) {
  return static_cast<std::size_t>(
      std::count_if(utf8.begin(), utf8.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

bool has_whitespace(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

KeywordCategory parse_keyword_category(std::string_view text) {
  if (text == "full") return KeywordCategory::kFull;
  if (text == "short") return KeywordCategory::kShort;
  if (text == "prefix") return KeywordCategory::kPrefix;
  if (text == "jargon") return KeywordCategory::kJargon;
  throw Error("unknown keyword category '" + std::string(text) + "'");
}

std::string_view to_string(KeywordCategory category) {
  switch (category) {
    case KeywordCategory::kFull: return "full";
    case KeywordCategory::kShort: return "short";
    case KeywordCategory::kPrefix: return "prefix";
    case KeywordCategory::kJargon: return "jargon";
  }
  return "full";
}

std::vector<KeywordEntry> load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon " + path.string());
  std::vector<KeywordEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  const std::string source = path.string();
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    auto cols = split(stripped, ',');
    if (cols.size() < 2 || cols.size() > 3) {
      throw ParseError(source, line_no, "expected surface,category[,guard]");
    }
    if (cols[0] == "surface" && cols[1] == "category") continue;

    KeywordEntry entry;
    entry.surface = normalize(cols[0]);
    try {
      entry.category = parse_keyword_category(normalize(cols[1]));
    } catch (const Error& e) {
      throw ParseError(source, line_no, e.what());
    }
    if (entry.surface.empty() || has_whitespace(entry.surface)) {
      throw ParseError(source, line_no, "keyword must be a single non-empty word");
    }
    if (entry.category == KeywordCategory::kPrefix && codepoints(entry.surface) > 4) {
      throw ParseError(source, line_no, "prefix '" + entry.surface + "' is longer than 4 characters");
    }
    if (entry.category == KeywordCategory::kShort && codepoints(entry.surface) < 4) {
      throw ParseError(source, line_no,
                       "short keyword '" + entry.surface + "' is ambiguous; store its full form");
    }
    if (cols.size() == 3 && !cols[2].empty()) {
      if (entry.category != KeywordCategory::kPrefix) {
        throw ParseError(source, line_no, "guards are only valid on prefix entries");
      }
      for (auto& g : split(cols[2], '|')) {
        if (!g.empty()) entry.guards.push_back(normalize(g));
      }
    }
    const bool duplicate = std::any_of(entries.begin(), entries.end(), [&](const KeywordEntry& e) {
      return e.surface == entry.surface && e.category == entry.category;
    });
    if (duplicate) throw ParseError(source, line_no, "duplicate entry '" + entry.surface + "'");
    entries.push_back(std::move(entry));
  }
  return entries;
}

WordForms WordForms::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open word-forms file " + path.string());
  WordForms forms;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto cols = split(line, '\t');
    if (cols.size() != 3) throw ParseError(path.string(), line_no, "expected lemma<TAB>pos<TAB>form");
    auto pos = parse_pos(cols[1]);
    if (!pos) throw ParseError(path.string(), line_no, "unknown part of speech '" + cols[1] + "'");
    forms.add(normalize(cols[0]), *pos, normalize(cols[2]));
  }
  return forms;
}

void WordForms::add(std::string lemma, Pos pos, std::string form) {
  auto& family_list = family_of_form_[form];
  if (std::find(family_list.begin(), family_list.end(), lemma) == family_list.end()) {
    family_list.push_back(lemma);
  }
  auto& lemma_list = family_of_form_[lemma];
  if (std::find(lemma_list.begin(), lemma_list.end(), lemma) == lemma_list.end()) {
    lemma_list.push_back(lemma);
  }
  families_[std::move(lemma)].push_back({pos, std::move(form)});
}

std::vector<WordForms::Form> WordForms::tagged_forms(std::string_view keyword) const {
  std::vector<Form> out{{Pos::kUnknown, std::string(keyword)}};
  auto it = family_of_form_.find(std::string(keyword));
  if (it == family_of_form_.end()) return out;
  for (const auto& lemma : it->second) {
    out.push_back({Pos::kUnknown, lemma});
    for (const auto& f : families_.at(lemma)) out.push_back(f);
  }
  return out;
}

std::set<std::string> WordForms::forms(std::string_view keyword) const {
  std::set<std::string> out;
  for (auto& f : tagged_forms(keyword)) out.insert(std::move(f.form));
  return out;
}

ExpansionMode parse_expansion_mode(std::string_view text) {
  if (text == "exact") return ExpansionMode::kExact;
  if (text == "lemma") return ExpansionMode::kLemma;
  if (text == "lemma_pos") return ExpansionMode::kLemmaPos;
  throw Error("unknown match mode '" + std::string(text) + "'");
}

std::string_view to_string(ExpansionMode mode) {
  switch (mode) {
    case ExpansionMode::kExact: return "exact";
    case ExpansionMode::kLemma: return "lemma";
    case ExpansionMode::kLemmaPos: return "lemma_pos";
  }
  return "lemma_pos";
}

ExpandedLexicon expand_lexicon(std::span<const KeywordEntry> entries, const WordForms& forms,
                               const Lemmatizer& lemmatizer, ExpansionMode mode) {
  ExpandedLexicon lex;
  auto record = [&](std::string form, const KeywordEntry& origin) {
    lex.lemma_set.insert(form);
    auto& origins = lex.provenance[std::move(form)];
    if (std::find(origins.begin(), origins.end(), origin) == origins.end()) origins.push_back(origin);
  };

  for (const auto& entry : entries) {
    switch (entry.category) {
      case KeywordCategory::kPrefix:
        lex.prefixes.push_back(entry);
        break;
      case KeywordCategory::kJargon:
        lex.jargon.insert(entry.surface);
        break;
      case KeywordCategory::kFull:
      case KeywordCategory::kShort:
        switch (mode) {
          case ExpansionMode::kExact:
            record(entry.surface, entry);
            break;
          case ExpansionMode::kLemma:
            record(lemmatizer.lemmatize(entry.surface), entry);
            break;
          case ExpansionMode::kLemmaPos:
            for (const auto& f : forms.tagged_forms(entry.surface)) {
              record(lemmatizer.lemmatize(f.form, f.pos), entry);
            }
            break;
        }
        break;
    }
  }
  return lex;
}

std::string_view to_string(MatchKind kind) {
  switch (kind) {
    case MatchKind::kNone: return "none";
    case MatchKind::kPrefixHit: return "prefix";
    case MatchKind::kJargonHit: return "jargon";
    case MatchKind::kLemmaHit: return "lemma";
  }
  return "none";
}

TokenMatch match_token(std::string_view token, const ExpandedLexicon& lex, const Lemmatizer& lemmatizer,
                       ExpansionMode mode) {
  for (const auto& prefix : lex.prefixes) {
    if (!token.starts_with(prefix.surface)) continue;
    const bool guarded = std::any_of(prefix.guards.begin(), prefix.guards.end(),
                                     [&](const std::string& g) { return token.starts_with(g); });
    if (!guarded) return {MatchKind::kPrefixHit, prefix.surface, KeywordCategory::kPrefix};
  }
  if (lex.jargon.contains(std::string(token))) {
    return {MatchKind::kJargonHit, std::string(token), KeywordCategory::kJargon};
  }
  std::string key = mode == ExpansionMode::kExact ? std::string(token) : lemmatizer.lemmatize(token);
  if (auto it = lex.provenance.find(key); it != lex.provenance.end()) {
    return {MatchKind::kLemmaHit, std::move(key), it->second.front().category};
  }
  return {};
}

FilterResult filter_feedback(const Corpus& corpus, const ExpandedLexicon& lex, const Lemmatizer& lemmatizer,
                             ExpansionMode mode) {
  FilterResult result;
  for (const auto& doc : corpus.documents()) {
    std::vector<TraceEntry> hits;
    for (const auto& token : doc.tokens) {
      if (auto m = match_token(token, lex, lemmatizer, mode)) {
        hits.push_back({token, std::move(m.form), m.category, m.kind});
      }
    }
    if (hits.empty()) {
      result.positives.push_back(doc.id);
    } else {
      result.negatives.push_back(doc.id);
      result.match_trace.emplace(doc.id, std::move(hits));
    }
  }
  return result;
}

std::size_t match_count(const Corpus& corpus, std::span<const KeywordEntry> entries, const WordForms& forms,
                        const Lemmatizer& lemmatizer, ExpansionMode mode) {
  const auto lex = expand_lexicon(entries, forms, lemmatizer, mode);
  return filter_feedback(corpus, lex, lemmatizer, mode).negatives.size();
}

}  // namespace fbtopics
