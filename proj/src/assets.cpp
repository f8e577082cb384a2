#include "fbtopics/assets.hpp"

#include <cstdlib>

#ifndef FBTOPICS_DATA_DIR
#define FBTOPICS_DATA_DIR "data"
#endif

namespace fbtopics {

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("FBTOPICS_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return FBTOPICS_DATA_DIR;
}

AssetPaths AssetPaths::defaults(const std::filesystem::path& data_dir) {
  return {data_dir / "stopwords.txt", data_dir / "lemmas.tsv", data_dir / "word_forms.tsv",
          data_dir / "lexicon.csv"};
}

Assets Assets::load(const AssetPaths& paths) {
  return {StopwordSet::load(paths.stopwords), Lemmatizer::load(paths.lemmas), WordForms::load(paths.word_forms),
          load_lexicon(paths.lexicon)};
}

}  // namespace fbtopics
