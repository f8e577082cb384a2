#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "fbtopics/keywords.hpp"
#include "fbtopics/lemmatizer.hpp"
#include "fbtopics/text.hpp"

namespace fbtopics {

// Directory holding the shipped data files: $FBTOPICS_DATA_DIR when set,
// otherwise the directory compiled in at build time.
std::filesystem::path default_data_dir();

struct AssetPaths {
  std::filesystem::path stopwords;
  std::filesystem::path lemmas;
  std::filesystem::path word_forms;
  std::filesystem::path lexicon;

  static AssetPaths defaults(const std::filesystem::path& data_dir = default_data_dir());
};

struct Assets {
  StopwordSet stopwords;
  Lemmatizer lemmatizer;
  WordForms word_forms;
  std::vector<KeywordEntry> lexicon;

  static Assets load(const AssetPaths& paths);
};

}  // namespace fbtopics
