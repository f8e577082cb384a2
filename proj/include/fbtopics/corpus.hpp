#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fbtopics/lemmatizer.hpp"
#include "fbtopics/text.hpp"

namespace fbtopics {

struct Document {
  std::string id;
  std::string raw_text;
  std::vector<std::string> tokens;
};

enum class CorpusFormat { kJsonl, kCsv };

CorpusFormat parse_corpus_format(std::string_view text);
/// Guesses from the extension: ".csv" is CSV, anything else JSONL.
CorpusFormat corpus_format_for(const std::filesystem::path& path);

class Corpus {
 public:
  Corpus() = default;
  /// Throws Error on duplicate ids.
  Corpus(std::vector<Document> documents, std::string source_meta = {});

  const std::vector<Document>& documents() const noexcept { return documents_; }
  std::size_t size() const noexcept { return documents_.size(); }
  bool empty() const noexcept { return documents_.empty(); }
  const Document& operator[](std::size_t i) const { return documents_[i]; }
  const std::string& source_meta() const noexcept { return source_meta_; }

  /// Convenience for tests and generators: ids "0".."n-1", raw text is the
  /// space-joined tokens, tokens taken verbatim.
  static Corpus from_tokens(std::vector<std::vector<std::string>> docs);

 private:
  std::vector<Document> documents_;
  std::string source_meta_;
};

struct LoadOptions {
  std::string text_field = "text";
  // Records lacking this field get their 0-based record index as id.
  std::string id_field = "id";
};

// One Document per record in file order; tokens are left empty until
// preprocess(). JSONL skips blank lines; CSV needs a header row and follows
// RFC 4180 quoting (embedded commas, doubled quotes, newlines).
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   const LoadOptions& options = {});

struct PreprocessOptions {
  // Replace each token by its lemma before stopword removal is re-applied.
  bool lemmatize_tokens = false;
};

/// tokenize -> remove stopwords [-> lemmatize -> remove stopwords]. raw_text is untouched.
Corpus preprocess(const Corpus& corpus, const StopwordSet& stopwords,
                  const Lemmatizer* lemmatizer = nullptr, const PreprocessOptions& options = {});

}  // namespace fbtopics
