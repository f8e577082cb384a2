#include "fbtopics/topic_model.hpp"

#include <algorithm>
#include <numeric>

#include <nlohmann/json.hpp>

#include "fbtopics/error.hpp"

namespace fbtopics {

ModelTag parse_model_tag(std::string_view text) {
  if (text == "lda") return ModelTag::kLda;
  if (text == "gsdmm") return ModelTag::kGsdmm;
  if (text == "kbert") return ModelTag::kKbert;
  throw Error("unknown model '" + std::string(text) + "' (expected lda, gsdmm or kbert)");
}

std::string_view to_string(ModelTag tag) {
  switch (tag) {
    case ModelTag::kLda: return "lda";
    case ModelTag::kGsdmm: return "gsdmm";
    case ModelTag::kKbert: return "kbert";
  }
  return "lda";
}

RankedWords TopicModelResult::top_words(std::size_t k, std::size_t n) const {
  const auto weights = topic_word.row(k);
  std::vector<std::size_t> ids(weights.size());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  n = std::min(n, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n), ids.end(),
                    [&](std::size_t a, std::size_t b) {
                      return weights[a] != weights[b] ? weights[a] > weights[b] : a < b;
                    });
  RankedWords out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(words.at(ids[i]), weights[ids[i]]);
  return out;
}

std::vector<std::vector<std::string>> TopicModelResult::topic_word_lists(std::size_t n) const {
  std::vector<std::vector<std::string>> lists;
  for (std::size_t k = 0; k < num_topics(); ++k) {
    std::vector<std::string> list;
    for (auto& [w, _] : top_words(k, n)) list.push_back(std::move(w));
    lists.push_back(std::move(list));
  }
  return lists;
}

std::vector<std::size_t> TopicModelResult::hard_assignment() const {
  std::vector<std::size_t> labels(doc_topic.rows());
  for (std::size_t d = 0; d < labels.size(); ++d) {
    const auto row = doc_topic.row(d);
    labels[d] = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return labels;
}

nlohmann::json to_json(const TopicModelResult& result, std::size_t top_n) {
  nlohmann::json topics = nlohmann::json::array();
  for (std::size_t k = 0; k < result.num_topics(); ++k) {
    nlohmann::json ranked = nlohmann::json::array();
    for (const auto& [word, weight] : result.top_words(k, top_n)) ranked.push_back({word, weight});
    topics.push_back(std::move(ranked));
  }
  nlohmann::json doc_topic = nlohmann::json::array();
  for (std::size_t d = 0; d < result.doc_topic.rows(); ++d) {
    const auto row = result.doc_topic.row(d);
    doc_topic.push_back(std::vector<double>(row.begin(), row.end()));
  }
  nlohmann::json out{{"model", to_string(result.model_tag)},
                     {"num_topics", result.num_topics()},
                     {"topics", std::move(topics)},
                     {"doc_ids", result.doc_ids},
                     {"doc_topic", std::move(doc_topic)}};
  if (result.k_max) out["k_max"] = *result.k_max;
  return out;
}

std::vector<std::vector<std::string>> topic_lists_from_json(const nlohmann::json& doc) {
  auto topics = doc.find("topics");
  if (topics == doc.end() || !topics->is_array()) throw Error("topics document lacks a \"topics\" array");
  std::vector<std::vector<std::string>> lists;
  for (const auto& topic : *topics) {
    std::vector<std::string> words;
    for (const auto& item : topic) {
      // Accept [word, weight] pairs or bare words.
      words.push_back(item.is_array() ? item.at(0).get<std::string>() : item.get<std::string>());
    }
    lists.push_back(std::move(words));
  }
  return lists;
}

}  // namespace fbtopics
