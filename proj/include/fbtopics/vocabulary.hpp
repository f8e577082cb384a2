#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "fbtopics/corpus.hpp"

namespace fbtopics {

using WordId = std::size_t;

class Vocabulary {
 public:
  Vocabulary() = default;

  std::size_t size() const noexcept { return id_to_word_.size(); }
  bool empty() const noexcept { return id_to_word_.empty(); }

  std::optional<WordId> find(std::string_view word) const;
  const std::string& word(WordId id) const { return id_to_word_.at(id); }
  std::size_t doc_frequency(WordId id) const { return doc_frequency_.at(id); }
  const std::vector<std::string>& words() const noexcept { return id_to_word_; }

  /// Each document as word ids; out-of-vocabulary tokens are dropped.
  std::vector<std::vector<WordId>> encode(const Corpus& corpus) const;

 private:
  friend Vocabulary build_vocabulary(const Corpus&, std::size_t);
  std::unordered_map<std::string, WordId> word_to_id_;
  std::vector<std::string> id_to_word_;
  std::vector<std::size_t> doc_frequency_;
};

// Words occurring in at least min_doc_freq documents, ids in first-occurrence
// order. Throws Error when nothing survives or min_doc_freq is 0.
Vocabulary build_vocabulary(const Corpus& corpus, std::size_t min_doc_freq = 1);

}  // namespace fbtopics
