#include <doctest.h>

#include <algorithm>
#include <set>

#include "fbtopics/assets.hpp"
#include "fbtopics/error.hpp"
#include "fbtopics/keywords.hpp"
#include "fbtopics/random.hpp"
#include "support.hpp"

using namespace fbtopics;

namespace {

const Assets& shipped() {
  static const Assets assets = Assets::load(AssetPaths::defaults());
  return assets;
}

Corpus shipped_fixture() {
  const auto raw = load_corpus(default_data_dir() / "fixtures" / "keyword_fixture.jsonl", CorpusFormat::kJsonl);
  return preprocess(raw, shipped().stopwords);
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

TEST_SUITE("keywords") {

TEST_CASE("load_lexicon parses categories and guards") {
  testing::TempDir dir;
  const auto path = testing::write_file(dir / "lex.csv",
                                        "# comment\nsurface,category,guard\n"
                                        "delay,full\nun,prefix,under|union\nhippa,jargon\nabuse,short\n");
  const auto entries = load_lexicon(path);
  REQUIRE(entries.size() == 4);
  CHECK(entries[0] == KeywordEntry{"delay", KeywordCategory::kFull, {}});
  CHECK(entries[1].category == KeywordCategory::kPrefix);
  CHECK(entries[1].guards == std::vector<std::string>{"under", "union"});
  CHECK(entries[2] == KeywordEntry{"hippa", KeywordCategory::kJargon, {}});
  CHECK(entries[3].category == KeywordCategory::kShort);
}

TEST_CASE("load_lexicon rejects bad rows") {
  testing::TempDir dir;
  auto load = [&](const std::string& body) { return load_lexicon(testing::write_file(dir / "l.csv", body)); };
  CHECK_THROWS_AS(load("delay,fullish\n"), Error);
  CHECK_THROWS_AS(load("delay,full\ndelay,full\n"), Error);
  CHECK_THROWS_AS(load("comp,short\nabu,short\n"), Error);  // short keywords need >= 4 characters
  CHECK_THROWS_AS(load("under,prefix\n"), Error);      // prefixes are at most 4 characters
  CHECK_THROWS_AS(load("two words,full\n"), Error);
  CHECK_NOTHROW(load("delay,full\ndelay,jargon\n"));   // same surface, different category
}

TEST_CASE("shipped lexicon contains the sample entries") {
  const auto& lex = shipped().lexicon;
  auto has = [&](const char* s, KeywordCategory c) {
    return std::any_of(lex.begin(), lex.end(), [&](const auto& e) { return e.surface == s && e.category == c; });
  };
  CHECK(has("delay", KeywordCategory::kFull));
  CHECK(has("un", KeywordCategory::kPrefix));
  CHECK(has("hippa", KeywordCategory::kJargon));
  CHECK(has("mrsa", KeywordCategory::kJargon));
  for (const auto& e : lex) {
    if (e.category == KeywordCategory::kShort) CHECK(e.surface.size() >= 4);
    if (e.category == KeywordCategory::kPrefix) CHECK(e.surface.size() <= 4);
  }
}

TEST_CASE("word_forms from the shipped lexicon") {
  const auto& wf = shipped().word_forms;
  const auto argue = wf.forms("argue");
  for (const char* f : {"argue", "argument", "argues", "argued", "arguing"}) CHECK(argue.contains(f));
  CHECK(wf.forms("zzqx") == std::set<std::string>{"zzqx"});
  const auto abuse = wf.forms("abuse");
  for (const char* f : {"abuse", "abusive", "abused"}) CHECK(abuse.contains(f));
  // Any member of a family reaches the whole family.
  CHECK(wf.forms("arguing").contains("argument"));
}

TEST_CASE("expand_lexicon routes categories") {
  const auto& a = shipped();
  const std::vector<KeywordEntry> argue{{"argue", KeywordCategory::kFull, {}}};
  const auto lex = expand_lexicon(argue, a.word_forms, a.lemmatizer);
  CHECK(lex.lemma_set.contains("argue"));
  CHECK(lex.lemma_set.contains("argument"));
  for (const auto& w : lex.lemma_set) {
    REQUIRE(lex.provenance.contains(w));
    CHECK(lex.provenance.at(w).size() >= 1);
  }

  const std::vector<KeywordEntry> un{{"un", KeywordCategory::kPrefix, {}}};
  const auto lex_un = expand_lexicon(un, a.word_forms, a.lemmatizer);
  CHECK(lex_un.lemma_set.empty());
  REQUIRE(lex_un.prefixes.size() == 1);
  CHECK(lex_un.prefixes[0].surface == "un");

  const std::vector<KeywordEntry> mrsa{{"mrsa", KeywordCategory::kJargon, {}}};
  CHECK(expand_lexicon(mrsa, a.word_forms, a.lemmatizer).jargon == std::set<std::string>{"mrsa"});
}

TEST_CASE("lemma_set covers the lemma of every full entry") {
  const auto& a = shipped();
  for (auto mode : {ExpansionMode::kLemma, ExpansionMode::kLemmaPos}) {
    const auto lex = expand_lexicon(a.lexicon, a.word_forms, a.lemmatizer, mode);
    for (const auto& e : a.lexicon) {
      if (e.category == KeywordCategory::kFull) CHECK(lex.lemma_set.contains(a.lemmatizer.lemmatize(e.surface)));
    }
  }
}

TEST_CASE("match_token order and kinds") {
  const auto& a = shipped();
  const auto lex = expand_lexicon(a.lexicon, a.word_forms, a.lemmatizer);
  const auto un = match_token("unprofessional", lex, a.lemmatizer);
  CHECK(un.kind == MatchKind::kPrefixHit);
  CHECK(un.form == "un");
  const auto hippa = match_token("hippa", lex, a.lemmatizer);
  CHECK(hippa.kind == MatchKind::kJargonHit);
  CHECK(hippa.form == "hippa");
  const auto delayed = match_token("delayed", lex, a.lemmatizer);
  CHECK(delayed.kind == MatchKind::kLemmaHit);
  CHECK(delayed.form == "delay");
  CHECK_FALSE(match_token("careful", lex, a.lemmatizer));
  // Guard list keeps benign words out of prefix hits.
  CHECK_FALSE(match_token("understanding", lex, a.lemmatizer));
  CHECK_FALSE(match_token("mission", lex, a.lemmatizer));
}

TEST_CASE("prefix hits ignore lemma membership") {
  Lemmatizer lem;
  WordForms forms;
  const std::vector<KeywordEntry> entries{{"mis", KeywordCategory::kPrefix, {}},
                                          {"mistake", KeywordCategory::kFull, {}}};
  const auto lex = expand_lexicon(entries, forms, lem);
  const auto m = match_token("mistake", lex, lem);
  CHECK(m.kind == MatchKind::kPrefixHit);
  CHECK(m.category == KeywordCategory::kPrefix);
}

TEST_CASE("filter_feedback examples") {
  const auto& a = shipped();
  const auto lex = expand_lexicon(a.lexicon, a.word_forms, a.lemmatizer);
  const Corpus raw(std::vector<Document>{{"d1", "the appointment was delayed", {}}, {"d2", "everyone was careful", {}}});
  const auto corpus = preprocess(raw, a.stopwords);
  const auto result = filter_feedback(corpus, lex, a.lemmatizer);
  CHECK(result.negatives == std::vector<std::string>{"d1"});
  CHECK(result.positives == std::vector<std::string>{"d2"});
  REQUIRE(result.match_trace.contains("d1"));
  const auto& hit = result.match_trace.at("d1").front();
  CHECK(hit.token == "delayed");
  CHECK(hit.form == "delay");
  CHECK(hit.kind == MatchKind::kLemmaHit);

  const auto empty = filter_feedback(Corpus{}, lex, a.lemmatizer);
  CHECK(empty.negatives.empty());
  CHECK(empty.positives.empty());
  CHECK(empty.match_trace.empty());
}

TEST_CASE("trace records every hit and replays") {
  const auto& a = shipped();
  const auto lex = expand_lexicon(a.lexicon, a.word_forms, a.lemmatizer);
  const auto corpus = preprocess(Corpus(std::vector<Document>{{"x", "Unfriendly nurse, long delay and MRSA worries", {}}}), a.stopwords);
  const auto result = filter_feedback(corpus, lex, a.lemmatizer);
  const auto& trace = result.match_trace.at("x");
  CHECK(trace.size() == 3);
  for (const auto& t : trace) {
    const auto replay = match_token(t.token, lex, a.lemmatizer);
    CHECK(replay.kind == t.kind);
    CHECK(replay.form == t.form);
    CHECK(replay.category == t.category);
  }
}

TEST_CASE("shipped fixture: each expansion mode adds one document") {
  const auto& a = shipped();
  const auto corpus = shipped_fixture();
  CHECK(match_count(corpus, a.lexicon, a.word_forms, a.lemmatizer, ExpansionMode::kExact) == 2);
  CHECK(match_count(corpus, a.lexicon, a.word_forms, a.lemmatizer, ExpansionMode::kLemma) == 3);
  CHECK(match_count(corpus, a.lexicon, a.word_forms, a.lemmatizer, ExpansionMode::kLemmaPos) == 4);

  const auto lex = expand_lexicon(a.lexicon, a.word_forms, a.lemmatizer);
  const auto result = filter_feedback(corpus, lex, a.lemmatizer);
  CHECK(result.negatives == std::vector<std::string>{"k1", "k2", "k3", "k4"});
  CHECK(result.positives == std::vector<std::string>{"k5", "k6"});
}

TEST_CASE("empty lexicon matches nothing") {
  const auto& a = shipped();
  const auto corpus = shipped_fixture();
  for (auto mode : {ExpansionMode::kExact, ExpansionMode::kLemma, ExpansionMode::kLemmaPos}) {
    CHECK(match_count(corpus, {}, a.word_forms, a.lemmatizer, mode) == 0);
  }
}

TEST_CASE("partition and monotonicity on random corpora") {
  const auto& a = shipped();
  std::vector<std::string> pool{"delay", "delayed", "argument", "argued", "unkind", "under", "hippa",
                                "staff", "clean", "wait", "abusive", "abused", "nurse", "mission",
                                "bruise", "kind", "room", "neglectful", "violent", "misread"};
  Rng rng(11);
  const auto lex = expand_lexicon(a.lexicon, a.word_forms, a.lemmatizer);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<std::string>> docs(rng.index(12));
    for (auto& d : docs) {
      d.resize(rng.index(6));
      for (auto& t : d) t = pool[rng.index(pool.size())];
    }
    const auto corpus = Corpus::from_tokens(docs);
    const auto r = filter_feedback(corpus, lex, a.lemmatizer);
    CHECK(r.negatives.size() + r.positives.size() == corpus.size());
    for (const auto& id : r.negatives) {
      CHECK_FALSE(contains(r.positives, id));
      CHECK(r.match_trace.contains(id));
    }
    const auto e = match_count(corpus, a.lexicon, a.word_forms, a.lemmatizer, ExpansionMode::kExact);
    const auto l = match_count(corpus, a.lexicon, a.word_forms, a.lemmatizer, ExpansionMode::kLemma);
    const auto lp = match_count(corpus, a.lexicon, a.word_forms, a.lemmatizer, ExpansionMode::kLemmaPos);
    CHECK(e <= l);
    CHECK(l <= lp);
  }
}

}  // TEST_SUITE
