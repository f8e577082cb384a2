#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fbtopics/matrix.hpp"

namespace fbtopics {

enum class ModelTag { kLda, kGsdmm, kKbert };

ModelTag parse_model_tag(std::string_view text);
std::string_view to_string(ModelTag tag);

using RankedWords = std::vector<std::pair<std::string, double>>;

// Shared output of every topic extractor. topic_word is K x V and doc_topic is
// D x K; both are row-stochastic.
struct TopicModelResult {
  ModelTag model_tag = ModelTag::kLda;
  DenseMatrix topic_word;
  DenseMatrix doc_topic;
  std::vector<std::string> words;    // vocabulary, indexed by word id
  std::vector<std::string> doc_ids;  // aligned with doc_topic rows
  // GSDMM only: the cluster bound the sampler ran with.
  std::optional<std::size_t> k_max;

  std::size_t num_topics() const noexcept { return topic_word.rows(); }

  /// Highest-weight words of topic k; ties go to the lower word id.
  RankedWords top_words(std::size_t k, std::size_t n) const;
  std::vector<std::vector<std::string>> topic_word_lists(std::size_t n) const;
  /// argmax of each doc_topic row (lowest index on ties).
  std::vector<std::size_t> hard_assignment() const;
};

// JSON form: {"model", "num_topics", "k_max"?, "topics": [[[word, weight], ...]],
// "doc_ids", "doc_topic"}. Only the top `top_n` words per topic are written, so
// the round trip restores ranked word lists and doc_topic but not topic_word.
nlohmann::json to_json(const TopicModelResult& result, std::size_t top_n = 20);

/// Ranked word lists from a topics JSON document as written by to_json.
std::vector<std::vector<std::string>> topic_lists_from_json(const nlohmann::json& doc);

}  // namespace fbtopics
