#pragma once

#include <chrono>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fbtopics/corpus.hpp"
#include "fbtopics/matrix.hpp"

namespace fbtopics {

/// One provider vector per document, stored at full provider dimension.
struct EmbeddingMatrix {
  DenseMatrix vectors;
  std::vector<std::string> doc_ids;

  std::size_t size() const noexcept { return vectors.rows(); }
  std::size_t dim() const noexcept { return vectors.cols(); }

  /// Throws Error on non-finite entries or id/row count mismatch.
  void validate() const;
};

// Text format: header line "n d", then n lines "doc_id v1 ... vd".
// Binary format (".bin" or ".f32"): the same header line, then n
// newline-terminated doc ids, then n*d little-endian float32 values row-major.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path);
void save_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path);

// Reorders rows into corpus order, warning when the file order differed.
// Throws Error when an id is missing, unknown or repeated.
EmbeddingMatrix align_embeddings(EmbeddingMatrix matrix, const Corpus& corpus);

/// Scales each row to unit Euclidean length (zero rows stay zero).
void normalize_rows(EmbeddingMatrix& matrix);

struct FetchOptions {
  std::size_t batch_size = 32;
  std::size_t max_attempts = 3;
  std::chrono::milliseconds initial_backoff{200};
  std::chrono::seconds timeout{30};
};

// POSTs {"texts": [...]} to <service_url>/embed (or to service_url itself when
// it already names a path) one batch at a time and concatenates the
// {"vectors": [...]} responses in request order. Connection errors and 5xx/429
// responses are retried with exponential backoff; other non-200 statuses fail
// immediately. Rows get ids "0".."n-1".
EmbeddingMatrix fetch_embeddings(const std::string& service_url,
                                 std::span<const std::string> texts,
                                 const FetchOptions& options = {});

/// Fetches the raw text of every document; rows take the corpus ids.
EmbeddingMatrix fetch_embeddings(const std::string& service_url, const Corpus& corpus,
                                 const FetchOptions& options = {});

}  // namespace fbtopics
