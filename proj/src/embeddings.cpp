#include "fbtopics/embeddings.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "fbtopics/error.hpp"
#include "fbtopics/log.hpp"

namespace fbtopics {
namespace {

bool is_binary_path(const std::filesystem::path& path) {
  const auto ext = path.extension();
  return ext == ".bin" || ext == ".f32";
}

std::pair<std::size_t, std::size_t> parse_header(const std::string& line, const std::string& source) {
  std::istringstream in(line);
  long long n = -1, d = -1;
  std::string extra;
  if (!(in >> n >> d) || (in >> extra) || n < 0 || d < 1) {
    throw ParseError(source, 1, "header must be \"n d\" with n >= 0 and d >= 1");
  }
  return {static_cast<std::size_t>(n), static_cast<std::size_t>(d)};
}

float read_le_float(const unsigned char* bytes) {
  std::uint32_t bits = static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
                       (static_cast<std::uint32_t>(bytes[2]) << 16) | (static_cast<std::uint32_t>(bytes[3]) << 24);
  return std::bit_cast<float>(bits);
}

void write_le_float(std::ostream& out, float value) {
  const auto bits = std::bit_cast<std::uint32_t>(value);
  const char bytes[4] = {static_cast<char>(bits & 0xFF), static_cast<char>((bits >> 8) & 0xFF),
                         static_cast<char>((bits >> 16) & 0xFF), static_cast<char>((bits >> 24) & 0xFF)};
  out.write(bytes, 4);
}

EmbeddingMatrix load_text(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing header");
  const auto [n, d] = parse_header(line, source);
  EmbeddingMatrix m{DenseMatrix(n, d), {}};
  m.doc_ids.reserve(n);
  std::size_t row = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (row == n) throw ParseError(source, line_no, "more rows than the header declares");
    std::istringstream fields(line);
    std::string id;
    fields >> id;
    for (std::size_t j = 0; j < d; ++j) {
      std::string token;
      if (!(fields >> token)) {
        throw ParseError(source, line_no, "row '" + id + "' has fewer than " + std::to_string(d) + " values");
      }
      char* end = nullptr;
      const double value = std::strtod(token.c_str(), &end);
      if (end != token.c_str() + token.size()) {
        throw ParseError(source, line_no, "row '" + id + "': not a number: " + token);
      }
      if (!std::isfinite(value)) throw ParseError(source, line_no, "row '" + id + "' has a non-finite value");
      m.vectors(row, j) = value;
    }
    std::string extra;
    if (fields >> extra) {
      throw ParseError(source, line_no, "row '" + id + "' has more than " + std::to_string(d) + " values");
    }
    m.doc_ids.push_back(std::move(id));
    ++row;
  }
  if (row != n) {
    throw ParseError(source, line_no, "header declares " + std::to_string(n) + " rows, found " + std::to_string(row));
  }
  return m;
}

EmbeddingMatrix load_binary(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source, 1, "missing header");
  const auto [n, d] = parse_header(line, source);
  EmbeddingMatrix m{DenseMatrix(n, d), {}};
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw ParseError(source, i + 2, "missing document id");
    m.doc_ids.push_back(line);
  }
  std::vector<unsigned char> buffer(4 * d);
  for (std::size_t i = 0; i < n; ++i) {
    if (!in.read(reinterpret_cast<char*>(buffer.data()), static_cast<std::streamsize>(buffer.size()))) {
      throw ParseError(source, 0, "truncated float data at row " + std::to_string(i));
    }
    for (std::size_t j = 0; j < d; ++j) {
      const float v = read_le_float(buffer.data() + 4 * j);
      if (!std::isfinite(v)) throw ParseError(source, 0, "row '" + m.doc_ids[i] + "' has a non-finite value");
      m.vectors(i, j) = v;
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) throw ParseError(source, 0, "trailing bytes after float data");
  return m;
}

struct ServiceEndpoint {
  std::string base;  // scheme://host[:port]
  std::string path;
};

ServiceEndpoint parse_service_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error("embedding service URL needs a scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  ServiceEndpoint ep;
  ep.base = url.substr(0, path_start);
  ep.path = path_start == std::string::npos ? "" : url.substr(path_start);
  if (ep.path.empty() || ep.path == "/") ep.path = "/embed";
  return ep;
}

std::vector<std::vector<double>> parse_vectors(const std::string& body, std::size_t expected) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(std::string("embedding service returned invalid JSON: ") + e.what());
  }
  auto vectors = doc.find("vectors");
  if (vectors == doc.end() || !vectors->is_array()) throw Error("embedding response lacks \"vectors\"");
  if (vectors->size() != expected) {
    throw Error("embedding service returned " + std::to_string(vectors->size()) + " vectors for " +
                std::to_string(expected) + " texts");
  }
  return vectors->get<std::vector<std::vector<double>>>();
}

}  // namespace

void EmbeddingMatrix::validate() const {
  if (doc_ids.size() != vectors.rows()) throw Error("embedding ids do not match the row count");
  for (std::size_t i = 0; i < vectors.rows(); ++i) {
    for (double v : vectors.row(i)) {
      if (!std::isfinite(v)) throw Error("embedding row '" + doc_ids[i] + "' has a non-finite value");
    }
  }
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open embedding file " + path.string());
  return is_binary_path(path) ? load_binary(in, path.string()) : load_text(in, path.string());
}

void save_embeddings(const EmbeddingMatrix& matrix, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write embedding file " + path.string());
  out << matrix.size() << ' ' << matrix.dim() << '\n';
  if (is_binary_path(path)) {
    for (const auto& id : matrix.doc_ids) out << id << '\n';
    for (std::size_t i = 0; i < matrix.size(); ++i) {
      for (double v : matrix.vectors.row(i)) write_le_float(out, static_cast<float>(v));
    }
    return;
  }
  out.precision(17);
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out << matrix.doc_ids[i];
    for (double v : matrix.vectors.row(i)) out << ' ' << v;
    out << '\n';
  }
}

EmbeddingMatrix align_embeddings(EmbeddingMatrix matrix, const Corpus& corpus) {
  std::unordered_map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < matrix.doc_ids.size(); ++i) {
    if (!row_of.emplace(matrix.doc_ids[i], i).second) {
      throw Error("embedding id '" + matrix.doc_ids[i] + "' appears twice");
    }
  }
  if (matrix.size() != corpus.size()) {
    throw Error("embedding file has " + std::to_string(matrix.size()) + " rows but the corpus has " +
                std::to_string(corpus.size()) + " documents");
  }
  bool reordered = false;
  EmbeddingMatrix aligned{DenseMatrix(corpus.size(), matrix.dim()), {}};
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    auto it = row_of.find(corpus[d].id);
    if (it == row_of.end()) throw Error("no embedding for document '" + corpus[d].id + "'");
    reordered |= it->second != d;
    const auto src = matrix.vectors.row(it->second);
    std::copy(src.begin(), src.end(), aligned.vectors.row(d).begin());
    aligned.doc_ids.push_back(corpus[d].id);
  }
  if (reordered) log::warn("embedding rows were not in corpus order; reordered to match the corpus");
  return aligned;
}

void normalize_rows(EmbeddingMatrix& matrix) {
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    auto row = matrix.vectors.row(i);
    double norm = 0.0;
    for (double v : row) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
      for (double& v : row) v /= norm;
    }
  }
}

EmbeddingMatrix fetch_embeddings(const std::string& service_url, std::span<const std::string> texts,
                                 const FetchOptions& options) {
  if (options.batch_size < 1) throw Error("batch size must be at least 1");
  EmbeddingMatrix result;
  if (texts.empty()) return result;

  const auto endpoint = parse_service_url(service_url);
  httplib::Client client(endpoint.base);
  client.set_connection_timeout(options.timeout);
  client.set_read_timeout(options.timeout);
  client.set_write_timeout(options.timeout);

  std::vector<std::vector<double>> rows;
  for (std::size_t start = 0; start < texts.size(); start += options.batch_size) {
    const std::size_t count = std::min(options.batch_size, texts.size() - start);
    const nlohmann::json request{{"texts", std::vector<std::string>(texts.begin() + static_cast<std::ptrdiff_t>(start),
                                                                    texts.begin() + static_cast<std::ptrdiff_t>(start + count))}};
    const std::string body = request.dump();

    std::string failure;
    std::optional<std::string> response_body;
    auto backoff = options.initial_backoff;
    for (std::size_t attempt = 1; attempt <= std::max<std::size_t>(options.max_attempts, 1); ++attempt) {
      auto res = client.Post(endpoint.path, body, "application/json");
      if (res && res->status == 200) {
        response_body = res->body;
        break;
      }
      if (res) {
        failure = "HTTP " + std::to_string(res->status);
        const bool transient = res->status >= 500 || res->status == 429;
        if (!transient) break;
      } else {
        failure = httplib::to_string(res.error());
      }
      if (attempt < options.max_attempts) {
        log::warn("embedding request failed (" + failure + "), retrying");
        std::this_thread::sleep_for(backoff);
        backoff *= 2;
      }
    }
    if (!response_body) {
      throw Error("embedding service " + service_url + " failed for batch at " + std::to_string(start) + ": " + failure);
    }
    auto vectors = parse_vectors(*response_body, count);
    for (auto& v : vectors) {
      if (v.empty()) throw Error("embedding service returned an empty vector");
      if (!rows.empty() && v.size() != rows.front().size()) {
        throw Error("embedding dimension changed from " + std::to_string(rows.front().size()) + " to " +
                    std::to_string(v.size()));
      }
      rows.push_back(std::move(v));
    }
  }

  result.vectors = DenseMatrix(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy(rows[i].begin(), rows[i].end(), result.vectors.row(i).begin());
    result.doc_ids.push_back(std::to_string(i));
  }
  result.validate();
  return result;
}

EmbeddingMatrix fetch_embeddings(const std::string& service_url, const Corpus& corpus, const FetchOptions& options) {
  std::vector<std::string> texts;
  for (const auto& d : corpus.documents()) texts.push_back(d.raw_text);
  auto m = fetch_embeddings(service_url, texts, options);
  for (std::size_t i = 0; i < m.doc_ids.size(); ++i) m.doc_ids[i] = corpus[i].id;
  return m;
}

}  // namespace fbtopics
