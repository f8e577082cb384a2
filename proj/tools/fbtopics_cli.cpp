// fbtopics: keyword filtering, topic fitting and evaluation for short feedback text.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fbtopics/metrics.hpp"
#include "fbtopics/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fbtopics;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPartial = 2;

struct GlobalFlags {
  std::optional<fs::path> config;
  std::optional<std::uint64_t> seed;
  std::optional<fs::path> out;
};

// Flags given on the command line win over the config file.
struct CorpusFlags {
  std::optional<fs::path> corpus;
  std::optional<std::string> format;
  std::optional<std::string> text_field;
};

PipelineConfig base_config(const GlobalFlags& g, const CorpusFlags& c) {
  PipelineConfig cfg = g.config ? PipelineConfig::load(*g.config) : PipelineConfig{};
  if (g.seed) cfg.seed = *g.seed;
  if (g.out) cfg.output_dir = *g.out;
  if (c.corpus) {
    cfg.corpus_path = *c.corpus;
    cfg.corpus_format = corpus_format_for(*c.corpus);
  }
  if (c.format) cfg.corpus_format = parse_corpus_format(*c.format);
  if (c.text_field) cfg.load_options.text_field = *c.text_field;
  return cfg;
}

void add_corpus_flags(CLI::App* app, CorpusFlags& c) {
  app->add_option("--corpus", c.corpus, "Corpus file (.jsonl or .csv)");
  app->add_option("--format", c.format, "Corpus format: jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
  app->add_option("--text-field", c.text_field, "Name of the text field or column");
}

void write_json(const fs::path& path, const json& doc) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error("malformed JSON in " + path.string() + ": " + e.what());
  }
}

int cmd_filter(const GlobalFlags& g, const CorpusFlags& c) {
  PipelineConfig cfg = base_config(g, c);
  cfg.validate();
  const auto prepared = prepare_corpus(cfg);
  FilterSummary s;
  const auto result = run_filter(prepared, &s);
  write_json(cfg.output_dir / "filter.json", to_json(result));
  std::printf("matches  exact=%zu lemma=%zu lemma_pos=%zu\n", s.exact, s.lemma, s.lemma_pos);
  std::printf("negative %zu\npositive %zu\n", s.negatives, s.positives);
  std::printf("wrote %s\n", (cfg.output_dir / "filter.json").string().c_str());
  return kExitOk;
}

struct FitFlags {
  std::string model = "lda";
  std::size_t k = 3;
  std::optional<std::size_t> k_max;
  std::optional<fs::path> embeddings;
  std::optional<std::string> embed_url;
  std::size_t show = 10;
};

int cmd_fit(const GlobalFlags& g, const CorpusFlags& c, const FitFlags& f) {
  PipelineConfig cfg = base_config(g, c);
  const ModelTag model = parse_model_tag(f.model);
  if (f.k_max) cfg.gsdmm.k_max = *f.k_max;
  if (f.embeddings) cfg.kbert.embeddings = *f.embeddings;
  if (f.embed_url) cfg.kbert.embed_url = *f.embed_url;
  cfg.models = {model};
  cfg.topic_counts = {f.k};
  cfg.validate();

  const auto prepared = prepare_corpus(cfg);
  std::optional<EmbeddingMatrix> embeddings;
  if (model == ModelTag::kKbert) embeddings = obtain_embeddings(cfg, prepared.corpus);
  ModelFit fit;
  try {
    fit = fit_model(cfg, prepared, model, f.k, embeddings ? &*embeddings : nullptr);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s-%zu failed: %s\n", f.model.c_str(), f.k, e.what());
    return kExitPartial;
  }

  const fs::path path = cfg.output_dir / "topics" / (f.model + "-" + std::to_string(f.k) + ".json");
  write_json(path, to_json(fit.result, cfg.topic_words_written));
  for (std::size_t k = 0; k < fit.result.num_topics(); ++k) {
    const auto words = fit.result.top_words(k, f.show);
    if (words.empty() || words.front().second == 0.0) continue;  // empty GSDMM cluster
    std::printf("topic %2zu:", k);
    for (const auto& [w, _] : words) std::printf(" %s", w.c_str());
    std::printf("\n");
  }
  if (fit.populated_clusters) std::printf("populated clusters: %zu\n", *fit.populated_clusters);
  std::printf("wrote %s\n", path.string().c_str());
  return kExitOk;
}

struct EvalFlags {
  fs::path topics;
  std::optional<double> p;
  std::optional<double> gamma;
  std::optional<double> epsilon;
  std::optional<std::size_t> top_n;
  std::optional<std::size_t> window;
};

int cmd_evaluate(const GlobalFlags& g, const CorpusFlags& c, const EvalFlags& e) {
  PipelineConfig cfg = base_config(g, c);
  if (e.p) cfg.metrics.p = *e.p;
  if (e.gamma) cfg.metrics.gamma = *e.gamma;
  if (e.epsilon) cfg.metrics.epsilon = *e.epsilon;
  if (e.top_n) cfg.metrics.top_n = *e.top_n;
  if (e.window) cfg.metrics.window = *e.window;
  cfg.validate();

  const auto lists = topic_lists_from_json(read_json(e.topics));
  const auto prepared = prepare_corpus(cfg);
  const auto counts = build_counts(prepared.corpus, WindowMode{cfg.metrics.window});
  const auto coherence =
      cv_coherence(lists, counts, {cfg.metrics.top_n, cfg.metrics.gamma, cfg.metrics.epsilon});

  std::vector<std::vector<std::string>> truncated;
  for (const auto& l : lists) {
    truncated.emplace_back(l.begin(), l.begin() + static_cast<std::ptrdiff_t>(std::min(l.size(), cfg.metrics.top_n)));
  }
  json out{{"topics", e.topics.string()}, {"coherence", to_json(coherence)}};
  if (truncated.size() >= 2) {
    out["diversity"] = to_json(irbo_avg(truncated, cfg.metrics.p));
  } else {
    out["diversity"] = nullptr;
  }
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

int cmd_run(const GlobalFlags& g, const CorpusFlags& c) {
  if (!g.config && !c.corpus) throw ConfigError("run needs --config or --corpus");
  const PipelineConfig cfg = base_config(g, c);
  const RunReport report = run(cfg);
  std::cout << emit_table(report, TableKind::kCoherence) << '\n' << emit_table(report, TableKind::kDiversity);
  std::printf("\nreport written to %s\n", (cfg.output_dir / "report.json").string().c_str());
  return report.all_succeeded() ? kExitOk : kExitPartial;
}

int cmd_report(const GlobalFlags& g, const std::optional<fs::path>& report_path, const std::string& table) {
  const TableKind kind = parse_table_kind(table);
  const fs::path path = report_path ? *report_path : g.out.value_or("out") / "report.json";
  std::cout << emit_table(run_report_from_json(read_json(path)), kind);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Keyword filtering and topic modeling for short feedback comments"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(tool_version()));

  GlobalFlags g;
  app.add_option("--config", g.config, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Master seed (overrides the config)");
  app.add_option("--out", g.out, "Output directory (overrides the config)");

  CorpusFlags corpus_flags;

  auto* filter = app.add_subcommand("filter", "Split comments into complaint-bearing and other");
  add_corpus_flags(filter, corpus_flags);

  FitFlags fit_flags;
  auto* fit = app.add_subcommand("fit", "Fit one topic model at one topic count");
  add_corpus_flags(fit, corpus_flags);
  fit->add_option("--model", fit_flags.model, "lda, gsdmm or kbert")
      ->check(CLI::IsMember({"lda", "gsdmm", "kbert"}));
  fit->add_option("--k", fit_flags.k, "Number of topics")->check(CLI::PositiveNumber);
  fit->add_option("--kmax", fit_flags.k_max, "GSDMM cluster bound (default: --k)")->check(CLI::PositiveNumber);
  fit->add_option("--embeddings", fit_flags.embeddings, "Embedding file for kbert")->check(CLI::ExistingFile);
  fit->add_option("--embed-url", fit_flags.embed_url, "Embedding service base URL for kbert");
  fit->add_option("--show", fit_flags.show, "Words to print per topic");

  EvalFlags eval_flags;
  auto* evaluate = app.add_subcommand("evaluate", "Score a topics file for coherence and diversity");
  add_corpus_flags(evaluate, corpus_flags);
  evaluate->add_option("--topics", eval_flags.topics, "topics/<model>-<k>.json")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--p", eval_flags.p, "RBO persistence");
  evaluate->add_option("--gamma", eval_flags.gamma, "NPMI exponent");
  evaluate->add_option("--epsilon", eval_flags.epsilon, "Smoothing inside the log");
  evaluate->add_option("--top-n", eval_flags.top_n, "Words per topic to score");
  evaluate->add_option("--window", eval_flags.window, "Sliding window width (0: whole documents)");

  auto* run_cmd = app.add_subcommand("run", "Run the full experiment described by --config");
  add_corpus_flags(run_cmd, corpus_flags);

  std::optional<fs::path> report_path;
  std::string table = "coherence";
  auto* report = app.add_subcommand("report", "Print a table from an existing report.json as CSV");
  report->add_option("--table", table, "coherence, diversity or filter");
  report->add_option("--report", report_path, "Report file (default: <out>/report.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*filter) return cmd_filter(g, corpus_flags);
    if (*fit) return cmd_fit(g, corpus_flags, fit_flags);
    if (*evaluate) return cmd_evaluate(g, corpus_flags, eval_flags);
    if (*run_cmd) return cmd_run(g, corpus_flags);
    if (*report) return cmd_report(g, report_path, table);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return kExitOk;
}
