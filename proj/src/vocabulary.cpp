#include "fbtopics/vocabulary.hpp"

#include <unordered_set>

#include "fbtopics/error.hpp"

namespace fbtopics {

std::optional<WordId> Vocabulary::find(std::string_view word) const {
  if (auto it = word_to_id_.find(std::string(word)); it != word_to_id_.end()) return it->second;
  return std::nullopt;
}

std::vector<std::vector<WordId>> Vocabulary::encode(const Corpus& corpus) const {
  std::vector<std::vector<WordId>> out(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (const auto& t : corpus[d].tokens) {
      if (auto id = find(t)) out[d].push_back(*id);
    }
  }
  return out;
}

Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_doc_freq) {
  if (min_doc_freq == 0) throw Error("min_doc_freq must be at least 1");

  std::vector<std::string> order;
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& doc : corpus.documents()) {
    std::unordered_set<std::string_view> seen;
    for (const auto& t : doc.tokens) {
      if (!seen.insert(t).second) continue;
      auto [it, inserted] = df.try_emplace(t, 0);
      if (inserted) order.push_back(t);
      ++it->second;
    }
  }

  Vocabulary vocab;
  for (const auto& w : order) {
    const std::size_t count = df[w];
    if (count < min_doc_freq) continue;
    vocab.word_to_id_.emplace(w, vocab.id_to_word_.size());
    vocab.id_to_word_.push_back(w);
    vocab.doc_frequency_.push_back(count);
  }
  if (vocab.empty()) throw Error("vocabulary is empty after applying min_doc_freq");
  return vocab;
}

}  // namespace fbtopics
