#include "fbtopics/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <sstream>

#include "fbtopics/gsdmm.hpp"
#include "fbtopics/kbert.hpp"
#include "fbtopics/log.hpp"

#ifndef FBTOPICS_VERSION
#define FBTOPICS_VERSION "0.0.0"
#endif

namespace fbtopics {
namespace fs = std::filesystem;
using nlohmann::json;

std::string_view tool_version() { return FBTOPICS_VERSION; }

namespace {

fs::path resolve(const fs::path& base, const std::string& value) {
  fs::path p(value);
  return p.is_relative() && !base.empty() ? base / p : p;
}

template <typename T>
void read_optional(const json& obj, const char* key, T& out) {
  if (auto it = obj.find(key); it != obj.end() && !it->is_null()) out = it->get<T>();
}

template <typename T>
void read_optional(const json& obj, const char* key, std::optional<T>& out) {
  if (auto it = obj.find(key); it != obj.end() && !it->is_null()) out = it->get<T>();
}

json optional_json(const auto& value) { return value ? json(*value) : json(); }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

std::string format_value(const std::optional<double>& v) {
  if (!v) return "N/A";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

struct CellOutcome {
  CoherenceCell coherence;
  std::optional<std::vector<std::vector<std::string>>> topic_lists;
  std::optional<json> topics_json;
  double seconds = 0.0;
};

}  // namespace

PipelineConfig PipelineConfig::from_json(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  PipelineConfig cfg;
  try {
    if (auto c = doc.find("corpus"); c != doc.end()) {
      if (auto p = c->find("path"); p != c->end()) {
        cfg.corpus_path = resolve(base_dir, p->get<std::string>());
        cfg.corpus_format = corpus_format_for(cfg.corpus_path);
      }
      if (auto f = c->find("format"); f != c->end()) cfg.corpus_format = parse_corpus_format(f->get<std::string>());
      read_optional(*c, "text_field", cfg.load_options.text_field);
      read_optional(*c, "id_field", cfg.load_options.id_field);
    }
    if (auto a = doc.find("assets"); a != doc.end()) {
      if (auto d = a->find("data_dir"); d != a->end()) {
        cfg.assets = AssetPaths::defaults(resolve(base_dir, d->get<std::string>()));
      }
      auto path_field = [&](const char* key, fs::path& out) {
        if (auto it = a->find(key); it != a->end()) out = resolve(base_dir, it->get<std::string>());
      };
      path_field("stopwords", cfg.assets.stopwords);
      path_field("lemmas", cfg.assets.lemmas);
      path_field("word_forms", cfg.assets.word_forms);
      path_field("lexicon", cfg.assets.lexicon);
      read_optional(*a, "extra_stopwords", cfg.extra_stopwords);
    }
    if (auto p = doc.find("preprocess"); p != doc.end()) {
      read_optional(*p, "min_doc_freq", cfg.min_doc_freq);
      read_optional(*p, "lemmatize_tokens", cfg.lemmatize_tokens);
    }
    if (auto m = doc.find("models"); m != doc.end()) {
      cfg.models.clear();
      for (const auto& name : *m) cfg.models.push_back(parse_model_tag(name.get<std::string>()));
    }
    if (auto l = doc.find("lda"); l != doc.end()) {
      read_optional(*l, "alpha", cfg.lda.alpha);
      read_optional(*l, "eta", cfg.lda.eta);
      read_optional(*l, "iterations", cfg.lda.iterations);
      if (auto mode = l->find("alpha_mode"); mode != l->end()) {
        const auto s = mode->get<std::string>();
        if (s != "fixed" && s != "auto") throw ConfigError("lda.alpha_mode must be fixed or auto");
        cfg.lda.alpha_mode = s == "auto" ? AlphaMode::kAuto : AlphaMode::kFixed;
      }
    }
    if (auto g = doc.find("gsdmm"); g != doc.end()) {
      read_optional(*g, "k_max", cfg.gsdmm.k_max);
      read_optional(*g, "alpha", cfg.gsdmm.alpha);
      read_optional(*g, "beta", cfg.gsdmm.beta);
      read_optional(*g, "iterations", cfg.gsdmm.iterations);
    }
    if (auto k = doc.find("kbert"); k != doc.end()) {
      if (auto e = k->find("embeddings"); e != k->end() && !e->is_null()) {
        cfg.kbert.embeddings = resolve(base_dir, e->get<std::string>());
      }
      read_optional(*k, "embed_url", cfg.kbert.embed_url);
      read_optional(*k, "batch_size", cfg.kbert.batch_size);
      read_optional(*k, "representatives", cfg.kbert.representatives);
      read_optional(*k, "normalize", cfg.kbert.normalize);
    }
    read_optional(doc, "topic_counts", cfg.topic_counts);
    read_optional(doc, "diversity_topic_count", cfg.diversity_topic_count);
    if (auto m = doc.find("metrics"); m != doc.end()) {
      read_optional(*m, "p", cfg.metrics.p);
      read_optional(*m, "gamma", cfg.metrics.gamma);
      read_optional(*m, "epsilon", cfg.metrics.epsilon);
      read_optional(*m, "top_n", cfg.metrics.top_n);
      read_optional(*m, "window", cfg.metrics.window);
    }
    read_optional(doc, "seed", cfg.seed);
    if (auto o = doc.find("output_dir"); o != doc.end()) cfg.output_dir = resolve(base_dir, o->get<std::string>());
    read_optional(doc, "topic_words_written", cfg.topic_words_written);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid configuration value: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

PipelineConfig PipelineConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed configuration " + path.string() + ": " + e.what());
  }
  return from_json(doc, path.parent_path());
}

json PipelineConfig::to_json() const {
  json models_json = json::array();
  for (auto m : models) models_json.push_back(to_string(m));
  // output_dir is deliberately absent: it names where the report goes, not what it contains.
  return {
      {"corpus",
       {{"path", corpus_path.generic_string()},
        {"format", corpus_format == CorpusFormat::kCsv ? "csv" : "jsonl"},
        {"text_field", load_options.text_field},
        {"id_field", load_options.id_field}}},
      {"assets",
       {{"stopwords", assets.stopwords.generic_string()},
        {"lemmas", assets.lemmas.generic_string()},
        {"word_forms", assets.word_forms.generic_string()},
        {"lexicon", assets.lexicon.generic_string()},
        {"extra_stopwords", extra_stopwords}}},
      {"preprocess", {{"min_doc_freq", min_doc_freq}, {"lemmatize_tokens", lemmatize_tokens}}},
      {"models", models_json},
      {"lda",
       {{"alpha", optional_json(lda.alpha)},
        {"eta", lda.eta},
        {"iterations", lda.iterations},
        {"alpha_mode", lda.alpha_mode == AlphaMode::kAuto ? "auto" : "fixed"}}},
      {"gsdmm",
       {{"k_max", optional_json(gsdmm.k_max)},
        {"alpha", gsdmm.alpha},
        {"beta", gsdmm.beta},
        {"iterations", gsdmm.iterations}}},
      {"kbert",
       {{"embeddings", kbert.embeddings ? json(kbert.embeddings->generic_string()) : json()},
        {"embed_url", optional_json(kbert.embed_url)},
        {"batch_size", kbert.batch_size},
        {"representatives", kbert.representatives},
        {"normalize", kbert.normalize}}},
      {"topic_counts", topic_counts},
      {"diversity_topic_count", optional_json(diversity_topic_count)},
      {"metrics",
       {{"p", metrics.p},
        {"gamma", metrics.gamma},
        {"epsilon", metrics.epsilon},
        {"top_n", metrics.top_n},
        {"window", metrics.window},
        {"cv_definition", "mean pairwise sign-preserving NPMI^gamma"},
        {"rbo_convention", "truncated at min list length, no extrapolation"}}},
      {"seed", seed},
      {"topic_words_written", topic_words_written},
  };
}

void PipelineConfig::validate() const {
  if (topic_counts.empty()) throw ConfigError("topic_counts must not be empty");
  for (auto k : topic_counts) {
    if (k < 1) throw ConfigError("every topic count must be at least 1");
  }
  if (models.empty()) throw ConfigError("no models requested");
  if (min_doc_freq < 1) throw ConfigError("min_doc_freq must be at least 1");
  if (!(metrics.p > 0.0 && metrics.p < 1.0)) throw ConfigError("metrics.p must lie in (0, 1)");
  if (metrics.top_n < 2) throw ConfigError("metrics.top_n must be at least 2");
  if (corpus_path.empty()) throw ConfigError("corpus.path is required");
  auto require = [](const fs::path& p, const char* what) {
    if (!fs::exists(p)) throw ConfigError(std::string(what) + " not found: " + p.string());
  };
  require(corpus_path, "corpus");
  require(assets.stopwords, "stopword file");
  require(assets.lemmas, "lemma lexicon");
  require(assets.word_forms, "word-forms file");
  require(assets.lexicon, "keyword lexicon");
  if (kbert.embeddings) require(*kbert.embeddings, "embedding file");
}

std::uint64_t stage_seed(std::uint64_t master, std::string_view model, std::size_t topic_count) {
  return derive_seed(master, std::string(model) + "/" + std::to_string(topic_count));
}

bool RunReport::all_succeeded() const {
  for (const auto& c : coherence) {
    if (c.failure) return false;
  }
  for (const auto& d : diversity) {
    if (d.failure) return false;
  }
  return true;
}

json to_json(const FilterResult& result) {
  json trace = json::object();
  for (const auto& [id, hits] : result.match_trace) {
    json list = json::array();
    for (const auto& h : hits) {
      list.push_back({{"token", h.token}, {"form", h.form}, {"category", to_string(h.category)},
                      {"kind", to_string(h.kind)}});
    }
    trace[id] = std::move(list);
  }
  return {{"negatives", result.negatives}, {"positives", result.positives}, {"match_trace", std::move(trace)}};
}

json to_json(const RunReport& report, bool include_timings) {
  json coherence = json::array();
  for (const auto& c : report.coherence) {
    json per_topic = json::array();
    for (const auto& v : c.per_topic) per_topic.push_back(optional_json(v));
    coherence.push_back({{"model", c.model},
                         {"topic_count", c.topic_count},
                         {"cv", optional_json(c.cv)},
                         {"per_topic", per_topic},
                         {"populated_clusters", optional_json(c.populated_clusters)},
                         {"failure", optional_json(c.failure)}});
  }
  json diversity = json::array();
  for (const auto& d : report.diversity) {
    diversity.push_back({{"model", d.model},
                         {"topic_count", d.topic_count},
                         {"irbo_avg", optional_json(d.irbo_avg)},
                         {"failure", optional_json(d.failure)}});
  }
  json out{{"tool_version", report.tool_version},
           {"config", report.config},
           {"filter", report.filter ? json{{"exact", report.filter->exact},
                                           {"lemma", report.filter->lemma},
                                           {"lemma_pos", report.filter->lemma_pos},
                                           {"negatives", report.filter->negatives},
                                           {"positives", report.filter->positives}}
                                     : json()},
           {"coherence", coherence},
           {"diversity", diversity},
           {"generated_topics", json()}};
  if (include_timings) out["timings_seconds"] = report.timings_seconds;
  return out;
}

RunReport run_report_from_json(const json& doc) {
  RunReport report;
  try {
    report.tool_version = doc.value("tool_version", "");
    report.config = doc.value("config", json::object());
    if (auto f = doc.find("filter"); f != doc.end() && !f->is_null()) {
      report.filter = FilterSummary{f->at("exact").get<std::size_t>(), f->at("lemma").get<std::size_t>(),
                                    f->at("lemma_pos").get<std::size_t>(), f->at("negatives").get<std::size_t>(),
                                    f->at("positives").get<std::size_t>()};
    }
    for (const auto& c : doc.value("coherence", json::array())) {
      CoherenceCell cell;
      cell.model = c.at("model").get<std::string>();
      cell.topic_count = c.at("topic_count").get<std::size_t>();
      read_optional(c, "cv", cell.cv);
      read_optional(c, "populated_clusters", cell.populated_clusters);
      read_optional(c, "failure", cell.failure);
      for (const auto& v : c.value("per_topic", json::array())) {
        cell.per_topic.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
      }
      report.coherence.push_back(std::move(cell));
    }
    for (const auto& d : doc.value("diversity", json::array())) {
      DiversityRow row;
      row.model = d.at("model").get<std::string>();
      row.topic_count = d.at("topic_count").get<std::size_t>();
      read_optional(d, "irbo_avg", row.irbo_avg);
      read_optional(d, "failure", row.failure);
      report.diversity.push_back(std::move(row));
    }
    if (auto t = doc.find("timings_seconds"); t != doc.end()) {
      report.timings_seconds = t->get<std::map<std::string, double>>();
    }
  } catch (const json::exception& e) {
    throw Error(std::string("malformed report: ") + e.what());
  }
  return report;
}

TableKind parse_table_kind(std::string_view text) {
  if (text == "coherence") return TableKind::kCoherence;
  if (text == "diversity") return TableKind::kDiversity;
  if (text == "filter") return TableKind::kFilter;
  throw Error("unknown table '" + std::string(text) + "' (expected coherence, diversity or filter)");
}

std::string emit_table(const RunReport& report, TableKind table) {
  std::ostringstream out;
  switch (table) {
    case TableKind::kCoherence:
      out << "model,topic_count,cv,populated_clusters\n";
      for (const auto& c : report.coherence) {
        out << c.model << ',' << c.topic_count << ',' << format_value(c.failure ? std::nullopt : c.cv) << ','
            << (c.populated_clusters ? std::to_string(*c.populated_clusters) : std::string()) << '\n';
      }
      break;
    case TableKind::kDiversity:
      out << "model,topic_count,irbo_avg\n";
      for (const auto& d : report.diversity) {
        out << d.model << ',' << d.topic_count << ',' << format_value(d.failure ? std::nullopt : d.irbo_avg)
            << '\n';
      }
      break;
    case TableKind::kFilter:
      out << "metric,value\n";
      if (report.filter) {
        const auto& f = *report.filter;
        out << "match_exact," << f.exact << '\n'
            << "match_lemma," << f.lemma << '\n'
            << "match_lemma_pos," << f.lemma_pos << '\n'
            << "negatives," << f.negatives << '\n'
            << "positives," << f.positives << '\n';
      }
      break;
  }
  return out.str();
}

PreparedCorpus prepare_corpus(const PipelineConfig& config) {
  Assets assets = Assets::load(config.assets);
  assets.stopwords.add(config.extra_stopwords);
  const Corpus raw = load_corpus(config.corpus_path, config.corpus_format, config.load_options);
  Corpus corpus = preprocess(raw, assets.stopwords, &assets.lemmatizer,
                             PreprocessOptions{.lemmatize_tokens = config.lemmatize_tokens});
  Vocabulary vocab = build_vocabulary(corpus, config.min_doc_freq);
  return {std::move(assets), std::move(corpus), std::move(vocab)};
}

FilterResult run_filter(const PreparedCorpus& prepared, FilterSummary* summary) {
  const auto& a = prepared.assets;
  const auto lex = expand_lexicon(a.lexicon, a.word_forms, a.lemmatizer, ExpansionMode::kLemmaPos);
  FilterResult filtered = filter_feedback(prepared.corpus, lex, a.lemmatizer);
  if (summary) {
    summary->exact = match_count(prepared.corpus, a.lexicon, a.word_forms, a.lemmatizer, ExpansionMode::kExact);
    summary->lemma = match_count(prepared.corpus, a.lexicon, a.word_forms, a.lemmatizer, ExpansionMode::kLemma);
    summary->lemma_pos = filtered.negatives.size();
    summary->negatives = filtered.negatives.size();
    summary->positives = filtered.positives.size();
  }
  return filtered;
}

EmbeddingMatrix obtain_embeddings(const PipelineConfig& config, const Corpus& corpus) {
  if (config.kbert.embeddings) return align_embeddings(load_embeddings(*config.kbert.embeddings), corpus);
  if (config.kbert.embed_url) {
    FetchOptions options;
    options.batch_size = config.kbert.batch_size;
    return fetch_embeddings(*config.kbert.embed_url, corpus, options);
  }
  throw Error("no embedding source configured (kbert.embeddings or kbert.embed_url)");
}

ModelFit fit_model(const PipelineConfig& config, const PreparedCorpus& prepared, ModelTag model,
                   std::size_t topic_count, const EmbeddingMatrix* embeddings) {
  const std::uint64_t seed = stage_seed(config.seed, to_string(model), topic_count);
  switch (model) {
    case ModelTag::kLda: {
      LdaConfig cfg{.num_topics = topic_count, .alpha = config.lda.alpha, .eta = config.lda.eta,
                    .iterations = config.lda.iterations, .seed = seed, .alpha_mode = config.lda.alpha_mode};
      return {lda_fit(prepared.corpus, prepared.vocab, cfg), std::nullopt};
    }
    case ModelTag::kGsdmm: {
      GsdmmConfig cfg{.k_max = config.gsdmm.k_max.value_or(topic_count), .alpha = config.gsdmm.alpha,
                      .beta = config.gsdmm.beta, .iterations = config.gsdmm.iterations, .seed = seed};
      auto fit = gsdmm_fit(prepared.corpus, prepared.vocab, cfg);
      return {std::move(fit.result), fit.populated_clusters};
    }
    case ModelTag::kKbert: {
      if (!embeddings) throw Error("kbert needs document embeddings");
      KbertConfig cfg;
      cfg.k = topic_count;
      cfg.seed = seed;
      cfg.representatives = config.kbert.representatives;
      cfg.top_k = std::max(config.metrics.top_n, config.topic_words_written);
      cfg.normalize = config.kbert.normalize;
      return {kbert_fit(prepared.corpus, prepared.vocab, *embeddings, cfg).result, std::nullopt};
    }
  }
  throw Error("unknown model");
}

RunReport run(const PipelineConfig& config) {
  config.validate();
  using Clock = std::chrono::steady_clock;
  auto seconds_since = [](Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  RunReport report;
  report.tool_version = std::string(tool_version());
  report.config = config.to_json();

  auto t0 = Clock::now();
  const PreparedCorpus prepared = prepare_corpus(config);
  report.timings_seconds["load"] = seconds_since(t0);

  t0 = Clock::now();
  FilterSummary summary;
  const FilterResult filtered = run_filter(prepared, &summary);
  report.filter = summary;
  report.timings_seconds["filter"] = seconds_since(t0);

  const CooccurrenceCounts counts = build_counts(prepared.corpus, WindowMode{config.metrics.window});
  const CoherenceOptions coherence_options{config.metrics.top_n, config.metrics.gamma, config.metrics.epsilon};

  // Embeddings are shared by every kBERT cell; a failure here fails only those cells.
  std::optional<EmbeddingMatrix> embeddings;
  std::string embedding_failure;
  if (std::find(config.models.begin(), config.models.end(), ModelTag::kKbert) != config.models.end()) {
    t0 = Clock::now();
    try {
      embeddings = obtain_embeddings(config, prepared.corpus);
    } catch (const std::exception& e) {
      embedding_failure = e.what();
    }
    report.timings_seconds["embeddings"] = seconds_since(t0);
  }

  auto run_cell = [&](ModelTag model, std::size_t k) {
    CellOutcome outcome;
    outcome.coherence.model = std::string(to_string(model));
    outcome.coherence.topic_count = k;
    const auto start = Clock::now();
    try {
      if (model == ModelTag::kKbert && !embeddings) throw Error(embedding_failure);
      ModelFit fit = fit_model(config, prepared, model, k, embeddings ? &*embeddings : nullptr);
      outcome.coherence.populated_clusters = fit.populated_clusters;
      auto lists = fit.result.topic_word_lists(config.metrics.top_n);
      const auto coherence = cv_coherence(lists, counts, coherence_options);
      outcome.coherence.per_topic = coherence.per_topic;
      const bool any_scored = std::any_of(coherence.per_topic.begin(), coherence.per_topic.end(),
                                          [](const auto& v) { return v.has_value(); });
      if (any_scored) {
        outcome.coherence.cv = coherence.mean_cv;
      } else {
        outcome.coherence.failure = "no topic had two scorable words";
      }
      outcome.topic_lists = std::move(lists);
      outcome.topics_json = to_json(fit.result, config.topic_words_written);
    } catch (const std::exception& e) {
      outcome.coherence.failure = e.what();
    }
    outcome.seconds = seconds_since(start);
    return outcome;
  };

  struct PendingCell {
    ModelTag model;
    std::size_t k;
    std::future<CellOutcome> future;
  };
  std::vector<PendingCell> pending;
  for (auto model : config.models) {
    for (auto k : config.topic_counts) {
      pending.push_back({model, k, std::async(std::launch::async, run_cell, model, k)});
    }
  }

  fs::create_directories(config.output_dir / "topics");
  const std::size_t diversity_k = config.diversity_topic_count.value_or(config.topic_counts.front());
  for (auto& cell : pending) {
    CellOutcome outcome = cell.future.get();
    const std::string name = std::string(to_string(cell.model)) + "-" + std::to_string(cell.k);
    report.timings_seconds["fit/" + name] = outcome.seconds;
    if (outcome.topics_json) {
      write_text(config.output_dir / "topics" / (name + ".json"), outcome.topics_json->dump(2) + "\n");
    }
    if (cell.k == diversity_k) {
      DiversityRow row{outcome.coherence.model, cell.k, std::nullopt, std::nullopt};
      if (!outcome.topic_lists) {
        row.failure = outcome.coherence.failure.value_or("model failed");
      } else {
        try {
          row.irbo_avg = irbo_avg(*outcome.topic_lists, config.metrics.p).irbo_avg;
        } catch (const std::exception& e) {
          row.failure = e.what();
        }
      }
      report.diversity.push_back(std::move(row));
    }
    report.coherence.push_back(std::move(outcome.coherence));
  }
  if (std::find(config.topic_counts.begin(), config.topic_counts.end(), diversity_k) == config.topic_counts.end()) {
    for (auto model : config.models) {
      report.diversity.push_back({std::string(to_string(model)), diversity_k, std::nullopt,
                                  "diversity topic count is not among topic_counts"});
    }
  }

  write_text(config.output_dir / "report.json", to_json(report).dump(2) + "\n");
  write_text(config.output_dir / "coherence.csv", emit_table(report, TableKind::kCoherence));
  write_text(config.output_dir / "diversity.csv", emit_table(report, TableKind::kDiversity));
  write_text(config.output_dir / "filter.json", to_json(filtered).dump(2) + "\n");
  return report;
}

}  // namespace fbtopics
