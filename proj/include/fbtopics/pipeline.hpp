#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fbtopics/assets.hpp"
#include "fbtopics/corpus.hpp"
#include "fbtopics/embeddings.hpp"
#include "fbtopics/error.hpp"
#include "fbtopics/keywords.hpp"
#include "fbtopics/lda.hpp"
#include "fbtopics/metrics.hpp"
#include "fbtopics/topic_model.hpp"
#include "fbtopics/vocabulary.hpp"

namespace fbtopics {

struct LdaParams {
  std::optional<double> alpha;  // default 50 / K
  double eta = 0.01;
  std::size_t iterations = 500;
  AlphaMode alpha_mode = AlphaMode::kFixed;
};

struct GsdmmParams {
  std::optional<std::size_t> k_max;  // default: the cell's topic count
  double alpha = 0.1;
  double beta = 0.1;
  std::size_t iterations = 30;
};

struct KbertParams {
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::string> embed_url;
  std::size_t batch_size = 32;
  std::size_t representatives = 10;
  bool normalize = false;
};

struct MetricParams {
  double p = 0.9;
  double gamma = 1.0;
  double epsilon = 1e-12;
  std::size_t top_n = 5;
  std::size_t window = 0;  // 0 = document windows
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

struct PipelineConfig {
  std::filesystem::path corpus_path;
  CorpusFormat corpus_format = CorpusFormat::kJsonl;
  LoadOptions load_options;
  AssetPaths assets = AssetPaths::defaults();
  std::vector<std::string> extra_stopwords;
  std::size_t min_doc_freq = 1;
  bool lemmatize_tokens = false;

  std::vector<ModelTag> models{ModelTag::kLda, ModelTag::kGsdmm, ModelTag::kKbert};
  LdaParams lda;
  GsdmmParams gsdmm;
  KbertParams kbert;

  std::vector<std::size_t> topic_counts{3, 5, 10, 15, 20};
  // Topic count for the diversity table; default the first of topic_counts.
  std::optional<std::size_t> diversity_topic_count;
  MetricParams metrics;
  std::uint64_t seed = 42;
  std::filesystem::path output_dir = "out";
  std::size_t topic_words_written = 20;

  // Relative paths in the file resolve against the file's directory.
  static PipelineConfig load(const std::filesystem::path& path);
  static PipelineConfig from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir = {});
  nlohmann::json to_json() const;

  /// Throws ConfigError when invariants fail or referenced files are missing.
  void validate() const;
};

struct FilterSummary {
  std::size_t exact = 0;
  std::size_t lemma = 0;
  std::size_t lemma_pos = 0;
  std::size_t negatives = 0;
  std::size_t positives = 0;
};

struct CoherenceCell {
  std::string model;
  std::size_t topic_count = 0;
  std::optional<double> cv;
  std::vector<std::optional<double>> per_topic;
  std::optional<std::size_t> populated_clusters;  // GSDMM
  std::optional<std::string> failure;
};

struct DiversityRow {
  std::string model;
  std::size_t topic_count = 0;
  std::optional<double> irbo_avg;
  std::optional<std::string> failure;
};

struct RunReport {
  nlohmann::json config;
  std::optional<FilterSummary> filter;
  std::vector<CoherenceCell> coherence;
  std::vector<DiversityRow> diversity;
  std::map<std::string, double> timings_seconds;
  std::string tool_version;

  bool all_succeeded() const;
};

nlohmann::json to_json(const RunReport& report, bool include_timings = true);
nlohmann::json to_json(const FilterResult& result);
RunReport run_report_from_json(const nlohmann::json& doc);

// Loaded assets plus the preprocessed corpus and its vocabulary.
struct PreparedCorpus {
  Assets assets;
  Corpus corpus;
  Vocabulary vocab;
};

PreparedCorpus prepare_corpus(const PipelineConfig& config);

/// Keyword filter in lemma_pos mode; fills `summary` with the per-mode counts when given.
FilterResult run_filter(const PreparedCorpus& prepared, FilterSummary* summary = nullptr);

/// Embeddings from kbert.embeddings (aligned to the corpus) or kbert.embed_url.
EmbeddingMatrix obtain_embeddings(const PipelineConfig& config, const Corpus& corpus);

struct ModelFit {
  TopicModelResult result;
  std::optional<std::size_t> populated_clusters;
};

// One (model, topic count) cell with the stage seed derived from config.seed.
// kBERT needs `embeddings`.
ModelFit fit_model(const PipelineConfig& config, const PreparedCorpus& prepared, ModelTag model,
                   std::size_t topic_count, const EmbeddingMatrix* embeddings = nullptr);

/// Seed for one pipeline stage, e.g. stage_seed(42, "lda", 5).
std::uint64_t stage_seed(std::uint64_t master, std::string_view model, std::size_t topic_count);

// Loads, preprocesses, filters, fits every (model, topic count) cell, scores
// coherence and diversity, and writes report.json, coherence.csv,
// diversity.csv, filter.json and topics/<model>-<k>.json into output_dir.
// Cell failures are recorded and the run continues.
RunReport run(const PipelineConfig& config);

enum class TableKind { kCoherence, kDiversity, kFilter };
TableKind parse_table_kind(std::string_view text);

/// CSV with a header row; failed cells print "N/A".
std::string emit_table(const RunReport& report, TableKind table);

std::string_view tool_version();

}  // namespace fbtopics
