#include "fbtopics/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "fbtopics/error.hpp"

namespace fbtopics {
namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

Corpus load_jsonl(const std::filesystem::path& path, const LoadOptions& options) {
  std::istringstream in(read_file(path));
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(path.string(), line_no, std::string("malformed JSON record: ") + e.what());
    }
    if (!record.is_object()) throw ParseError(path.string(), line_no, "record is not a JSON object");
    auto text = record.find(options.text_field);
    if (text == record.end() || !text->is_string()) {
      throw ParseError(path.string(), line_no, "missing string field '" + options.text_field + "'");
    }
    Document doc;
    if (auto id = record.find(options.id_field); id != record.end() && !id->is_null()) {
      doc.id = id->is_string() ? id->get<std::string>() : id->dump();
    } else {
      doc.id = std::to_string(docs.size());
    }
    doc.raw_text = text->get<std::string>();
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs), "jsonl:" + path.string());
}

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;  // line the record starts on
};

std::vector<CsvRecord> parse_csv(const std::string& data, const std::string& source) {
  std::vector<CsvRecord> records;
  CsvRecord record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_started = false;
  std::size_t line = 1;
  record.line = 1;

  auto end_field = [&] {
    record.fields.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record = CsvRecord{};
    record_started = false;
  };

  for (std::size_t i = 0; i < data.size(); ++i) {
    const char c = data[i];
    if (!record_started) {
      record.line = line;
      record_started = true;
    }
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw ParseError(source, line, "unexpected quote inside unquoted field");
        }
        in_quotes = true;
        field_was_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_record();
        ++line;
        break;
      default:
        if (field_was_quoted) throw ParseError(source, line, "text after closing quote");
        field += c;
    }
  }
  if (in_quotes) throw ParseError(source, record.line, "unterminated quoted field");
  if (record_started) end_record();
  return records;
}

Corpus load_csv(const std::filesystem::path& path, const LoadOptions& options) {
  auto records = parse_csv(read_file(path), path.string());
  if (records.empty()) throw ParseError(path.string(), 1, "missing CSV header");
  const auto& header = records.front().fields;
  std::optional<std::size_t> text_col, id_col;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == options.text_field) text_col = i;
    if (header[i] == options.id_field) id_col = i;
  }
  if (!text_col) throw ParseError(path.string(), 1, "header lacks text field '" + options.text_field + "'");

  std::vector<Document> docs;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;  // blank line
    if (rec.fields.size() != header.size()) {
      throw ParseError(path.string(), rec.line,
                       "expected " + std::to_string(header.size()) + " fields, found " +
                           std::to_string(rec.fields.size()));
    }
    Document doc;
    doc.id = id_col ? rec.fields[*id_col] : std::to_string(docs.size());
    doc.raw_text = rec.fields[*text_col];
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs), "csv:" + path.string());
}

}  // namespace

CorpusFormat parse_corpus_format(std::string_view text) {
  if (text == "jsonl") return CorpusFormat::kJsonl;
  if (text == "csv") return CorpusFormat::kCsv;
  throw Error("unknown corpus format '" + std::string(text) + "' (expected jsonl or csv)");
}

CorpusFormat corpus_format_for(const std::filesystem::path& path) {
  return path.extension() == ".csv" ? CorpusFormat::kCsv : CorpusFormat::kJsonl;
}

Corpus::Corpus(std::vector<Document> documents, std::string source_meta)
    : documents_(std::move(documents)), source_meta_(std::move(source_meta)) {
  std::unordered_set<std::string> seen;
  for (const auto& d : documents_) {
    if (!seen.insert(d.id).second) throw Error("duplicate document id '" + d.id + "'");
  }
}

Corpus Corpus::from_tokens(std::vector<std::vector<std::string>> docs) {
  std::vector<Document> out;
  out.reserve(docs.size());
  for (std::size_t i = 0; i < docs.size(); ++i) {
    Document d;
    d.id = std::to_string(i);
    for (const auto& t : docs[i]) {
      if (!d.raw_text.empty()) d.raw_text += ' ';
      d.raw_text += t;
    }
    d.tokens = std::move(docs[i]);
    out.push_back(std::move(d));
  }
  return Corpus(std::move(out), "memory");
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format, const LoadOptions& options) {
  return format == CorpusFormat::kCsv ? load_csv(path, options) : load_jsonl(path, options);
}

Corpus preprocess(const Corpus& corpus, const StopwordSet& stopwords, const Lemmatizer* lemmatizer,
                  const PreprocessOptions& options) {
  std::vector<Document> docs;
  docs.reserve(corpus.size());
  for (const auto& src : corpus.documents()) {
    Document doc{src.id, src.raw_text, {}};
    doc.tokens = remove_stopwords(tokenize(src.raw_text), stopwords);
    if (options.lemmatize_tokens && lemmatizer != nullptr) {
      for (auto& t : doc.tokens) t = lemmatizer->lemmatize(t);
      doc.tokens = remove_stopwords(doc.tokens, stopwords);
    }
    std::erase_if(doc.tokens, [](const std::string& t) { return t.empty(); });
    docs.push_back(std::move(doc));
  }
  return Corpus(std::move(docs), corpus.source_meta());
}

}  // namespace fbtopics
