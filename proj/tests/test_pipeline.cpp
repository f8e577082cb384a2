#include <doctest.h>

#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

#include "fbtopics/log.hpp"
#include "fbtopics/pipeline.hpp"
#include "fbtopics/synthetic.hpp"
#include "support.hpp"

using namespace fbtopics;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Planted feedback written to disk: corpus.jsonl plus embeddings.txt.
void write_workspace(const fs::path& dir, std::size_t per_theme = 30, std::uint64_t seed = 3) {
  const auto fx = synthetic::planted_feedback(per_theme, seed);
  std::ofstream corpus(dir / "corpus.jsonl", std::ios::binary);
  for (std::size_t i = 0; i < fx.corpus.size(); ++i) {
    corpus << json{{"id", fx.corpus[i].id}, {"text", fx.corpus[i].raw_text}}.dump() << '\n';
  }
  save_embeddings(fx.embeddings, dir / "embeddings.txt");
}

PipelineConfig small_config(const fs::path& dir, const fs::path& out = "out") {
  PipelineConfig cfg;
  cfg.corpus_path = dir / "corpus.jsonl";
  cfg.kbert.embeddings = dir / "embeddings.txt";
  cfg.topic_counts = {3, 5};
  cfg.lda.iterations = 60;
  cfg.gsdmm.iterations = 15;
  cfg.output_dir = dir / out;
  return cfg;
}

const CoherenceCell* find_cell(const RunReport& r, std::string_view model, std::size_t k) {
  for (const auto& c : r.coherence) {
    if (c.model == model && c.topic_count == k) return &c;
  }
  return nullptr;
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("full run fills every cell and writes its outputs") {
  testing::TempDir dir;
  write_workspace(dir.path());
  const auto cfg = small_config(dir.path());
  const auto report = run(cfg);

  CHECK(report.coherence.size() == 6);
  CHECK(report.diversity.size() == 3);
  CHECK(report.all_succeeded());
  for (const char* model : {"lda", "gsdmm", "kbert"}) {
    for (std::size_t k : {3u, 5u}) {
      const auto* cell = find_cell(report, model, k);
      REQUIRE(cell != nullptr);
      CHECK(cell->cv.has_value());
      // GSDMM reports only its populated clusters.
      CHECK(cell->per_topic.size() == cell->populated_clusters.value_or(k));
      CHECK(cell->populated_clusters.has_value() == (std::string_view(model) == "gsdmm"));
      CHECK(fs::exists(cfg.output_dir / "topics" / (std::string(model) + "-" + std::to_string(k) + ".json")));
    }
  }
  for (const auto& row : report.diversity) {
    CHECK(row.topic_count == 3);
    REQUIRE(row.irbo_avg.has_value());
    CHECK(*row.irbo_avg >= 0.0);
    CHECK(*row.irbo_avg <= 1.0);
  }
  REQUIRE(report.filter.has_value());
  CHECK(report.filter->negatives + report.filter->positives == 90);

  for (const char* name : {"report.json", "coherence.csv", "diversity.csv", "filter.json"}) {
    CHECK(fs::exists(cfg.output_dir / name));
  }
  const auto written = json::parse(testing::read_file(cfg.output_dir / "report.json"));
  CHECK(written.at("generated_topics").is_null());
  CHECK(written.at("config").at("metrics").contains("cv_definition"));
  CHECK_FALSE(written.at("config").contains("output_dir"));
  CHECK(testing::read_file(cfg.output_dir / "coherence.csv") == emit_table(report, TableKind::kCoherence));

  const auto back = run_report_from_json(written);
  CHECK(to_json(back) == to_json(report));
}

TEST_CASE("kbert without embeddings fails alone") {
  testing::TempDir dir;
  write_workspace(dir.path());
  auto cfg = small_config(dir.path());
  cfg.kbert.embeddings.reset();
  const auto report = run(cfg);
  CHECK_FALSE(report.all_succeeded());
  for (std::size_t k : {3u, 5u}) {
    CHECK(find_cell(report, "lda", k)->cv.has_value());
    CHECK(find_cell(report, "gsdmm", k)->cv.has_value());
    const auto* kbert = find_cell(report, "kbert", k);
    CHECK_FALSE(kbert->cv.has_value());
    REQUIRE(kbert->failure.has_value());
    CHECK(kbert->failure->find("embedding") != std::string::npos);
  }
  CHECK(emit_table(report, TableKind::kCoherence).find("kbert,3,N/A,") != std::string::npos);
  CHECK(emit_table(report, TableKind::kDiversity).find("kbert,3,N/A\n") != std::string::npos);
  CHECK_FALSE(fs::exists(cfg.output_dir / "topics" / "kbert-3.json"));
}

TEST_CASE("same configuration, same report") {
  testing::TempDir dir;
  write_workspace(dir.path());
  const auto a = run(small_config(dir.path(), "a"));
  const auto b = run(small_config(dir.path(), "b"));
  CHECK(to_json(a, false).dump() == to_json(b, false).dump());
  for (const char* name : {"coherence.csv", "diversity.csv", "filter.json", "topics/lda-5.json"}) {
    CHECK(testing::read_file(dir / "a" / name) == testing::read_file(dir / "b" / name));
  }
  auto other = small_config(dir.path(), "c");
  other.seed = 43;
  CHECK(to_json(run(other), false).dump() != to_json(a, false).dump());
}

TEST_CASE("diversity topic count outside topic_counts fails those rows") {
  testing::TempDir dir;
  write_workspace(dir.path());
  auto cfg = small_config(dir.path());
  cfg.models = {ModelTag::kGsdmm};
  cfg.topic_counts = {3};
  cfg.diversity_topic_count = 4;
  const auto report = run(cfg);
  REQUIRE(report.diversity.size() == 1);
  CHECK(report.diversity[0].failure.has_value());
  CHECK(report.diversity[0].topic_count == 4);
}

TEST_CASE("tables") {
  RunReport report;
  report.coherence.push_back({"lda", 3, 0.123456, {}, std::nullopt, std::nullopt});
  report.coherence.push_back({"gsdmm", 3, 0.5, {}, 2, std::nullopt});
  report.coherence.push_back({"kbert", 3, std::nullopt, {}, std::nullopt, "no embeddings"});
  report.diversity.push_back({"lda", 3, 0.25, std::nullopt});
  report.diversity.push_back({"gsdmm", 3, 1.0, std::nullopt});
  report.diversity.push_back({"kbert", 3, 0.98765, std::nullopt});
  report.diversity.push_back({"bertopic", 3, std::nullopt, "not run"});
  report.filter = FilterSummary{2, 3, 4, 4, 6};

  CHECK(emit_table(report, TableKind::kCoherence) ==
        "model,topic_count,cv,populated_clusters\n"
        "lda,3,0.1235,\n"
        "gsdmm,3,0.5000,2\n"
        "kbert,3,N/A,\n");
  CHECK(emit_table(report, TableKind::kDiversity) ==
        "model,topic_count,irbo_avg\n"
        "lda,3,0.2500\n"
        "gsdmm,3,1.0000\n"
        "kbert,3,0.9877\n"
        "bertopic,3,N/A\n");
  CHECK(emit_table(report, TableKind::kFilter) ==
        "metric,value\nmatch_exact,2\nmatch_lemma,3\nmatch_lemma_pos,4\nnegatives,4\npositives,6\n");

  const RunReport empty;
  CHECK(emit_table(empty, TableKind::kCoherence) == "model,topic_count,cv,populated_clusters\n");
  CHECK(emit_table(empty, TableKind::kDiversity) == "model,topic_count,irbo_avg\n");
  CHECK(emit_table(empty, TableKind::kFilter) == "metric,value\n");

  CHECK(parse_table_kind("diversity") == TableKind::kDiversity);
  CHECK_THROWS_AS(parse_table_kind("topics"), Error);
}

TEST_CASE("config file paths resolve against the file") {
  testing::TempDir dir;
  fs::create_directories(dir / "sub");
  write_workspace(dir / "sub");
  const auto path = testing::write_file(dir / "sub" / "config.json", R"({
    // comments are allowed
    "corpus": {"path": "corpus.jsonl", "text_field": "body"},
    "models": ["gsdmm", "lda"],
    "lda": {"alpha": 0.2, "alpha_mode": "auto"},
    "gsdmm": {"k_max": 8},
    "kbert": {"embeddings": "embeddings.txt"},
    "topic_counts": [2, 4],
    "metrics": {"p": 0.5, "window": 10},
    "seed": 7,
    "output_dir": "results"
  })");
  const auto cfg = PipelineConfig::load(path);
  CHECK(cfg.corpus_path == dir / "sub" / "corpus.jsonl");
  CHECK(cfg.kbert.embeddings == dir / "sub" / "embeddings.txt");
  CHECK(cfg.output_dir == dir / "sub" / "results");
  CHECK(cfg.load_options.text_field == "body");
  CHECK(cfg.models == std::vector<ModelTag>{ModelTag::kGsdmm, ModelTag::kLda});
  CHECK(cfg.lda.alpha == 0.2);
  CHECK(cfg.lda.alpha_mode == AlphaMode::kAuto);
  CHECK(cfg.gsdmm.k_max == 8u);
  CHECK(cfg.topic_counts == std::vector<std::size_t>{2, 4});
  CHECK(cfg.metrics.p == 0.5);
  CHECK(cfg.metrics.window == 10);
  CHECK(cfg.seed == 7);
  CHECK_NOTHROW(cfg.validate());

  // The echo reads back to the same configuration.
  const auto again = PipelineConfig::from_json(cfg.to_json());
  CHECK(again.to_json() == cfg.to_json());
}

TEST_CASE("config errors") {
  testing::TempDir dir;
  auto load_text = [&](const std::string& text) {
    return PipelineConfig::load(testing::write_file(dir / "c.json", text));
  };
  CHECK_THROWS_AS(PipelineConfig::load(dir / "missing.json"), ConfigError);
  CHECK_THROWS_AS(load_text("{ not json"), ConfigError);
  CHECK_THROWS_AS(load_text("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(load_text(R"({"models": ["lda", "nmf"]})"), ConfigError);
  CHECK_THROWS_AS(load_text(R"({"lda": {"alpha_mode": "sometimes"}})"), ConfigError);
  CHECK_THROWS_AS(load_text(R"({"topic_counts": "many"})"), ConfigError);
  CHECK_THROWS_AS(load_text(R"({"corpus": {"format": "xml"}})"), ConfigError);

  write_workspace(dir.path());
  auto invalid = [&](auto mutate) {
    auto cfg = small_config(dir.path());
    mutate(cfg);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  };
  CHECK_NOTHROW(small_config(dir.path()).validate());
  invalid([](PipelineConfig& c) { c.topic_counts.clear(); });
  invalid([](PipelineConfig& c) { c.topic_counts = {3, 0}; });
  invalid([](PipelineConfig& c) { c.models.clear(); });
  invalid([](PipelineConfig& c) { c.metrics.p = 1.0; });
  invalid([](PipelineConfig& c) { c.metrics.top_n = 1; });
  invalid([](PipelineConfig& c) { c.min_doc_freq = 0; });
  invalid([&](PipelineConfig& c) { c.corpus_path = dir / "nope.jsonl"; });
  invalid([](PipelineConfig& c) { c.corpus_path.clear(); });
  invalid([&](PipelineConfig& c) { c.kbert.embeddings = dir / "nope.txt"; });
  invalid([&](PipelineConfig& c) { c.assets.lexicon = dir / "nope.csv"; });
  CHECK_THROWS_AS(run([&] {
                    auto c = small_config(dir.path());
                    c.topic_counts.clear();
                    return c;
                  }()),
                  ConfigError);
}

TEST_CASE("stage seeds are stable and distinct per cell") {
  CHECK(stage_seed(42, "lda", 5) == stage_seed(42, "lda", 5));
  std::set<std::uint64_t> seen;
  for (std::uint64_t master : {1u, 42u}) {
    for (const char* model : {"lda", "gsdmm", "kbert"}) {
      for (std::size_t k : {3u, 5u, 10u, 15u, 20u}) seen.insert(stage_seed(master, model, k));
    }
  }
  CHECK(seen.size() == 30);
}

TEST_CASE("fit_model") {
  testing::TempDir dir;
  write_workspace(dir.path());
  const auto cfg = small_config(dir.path());
  const auto prepared = prepare_corpus(cfg);
  CHECK(prepared.corpus.size() == 90);
  CHECK_THROWS_AS(fit_model(cfg, prepared, ModelTag::kKbert, 3), Error);

  const auto embeddings = obtain_embeddings(cfg, prepared.corpus);
  const auto kbert = fit_model(cfg, prepared, ModelTag::kKbert, 3, &embeddings);
  CHECK(kbert.result.num_topics() == 3);

  const auto gsdmm = fit_model(cfg, prepared, ModelTag::kGsdmm, 4);
  REQUIRE(gsdmm.populated_clusters.has_value());
  CHECK(gsdmm.result.k_max == 4u);  // k_max follows the cell's topic count
  CHECK(gsdmm.result.num_topics() == *gsdmm.populated_clusters);

  auto no_source = cfg;
  no_source.kbert.embeddings.reset();
  CHECK_THROWS_AS(obtain_embeddings(no_source, prepared.corpus), Error);
}

}  // TEST_SUITE
