#include "fbtopics/text.hpp"

#include <fstream>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include "fbtopics/error.hpp"

namespace fbtopics {
namespace {

icu::UnicodeString normalized_unicode(std::string_view text) {
  auto source = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw Error("ICU NFC normalizer unavailable");
  icu::UnicodeString out = nfc->normalize(source, status);
  if (U_FAILURE(status)) throw Error("NFC normalization failed");
  out.foldCase(U_FOLD_CASE_DEFAULT);
  return out;
}

bool is_word_char(UChar32 c) {
  return u_isalnum(c) || (U_GET_GC_MASK(c) & U_GC_M_MASK) != 0;
}

bool is_apostrophe(UChar32 c) { return c == 0x27 || c == 0x2019; }

}  // namespace

std::string normalize(std::string_view text) {
  std::string out;
  normalized_unicode(text).toUTF8String(out);
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  const icu::UnicodeString folded = normalized_unicode(text);
  std::vector<std::string> tokens;
  icu::UnicodeString current;

  auto flush = [&] {
    if (!current.isEmpty()) {
      std::string utf8;
      current.toUTF8String(utf8);
      tokens.push_back(std::move(utf8));
      current.remove();
    }
  };

  const int32_t length = folded.length();
  for (int32_t i = 0; i < length;) {
    const UChar32 c = folded.char32At(i);
    const int32_t next = folded.moveIndex32(i, 1);
    if (is_word_char(c)) {
      // A leading combining mark has nothing to attach to.
      if (!current.isEmpty() || u_isalnum(c)) current.append(c);
    } else if (is_apostrophe(c) && !current.isEmpty() && next < length &&
               u_isalnum(folded.char32At(next))) {
      current.append(static_cast<UChar32>(0x27));
    } else {
      flush();
    }
    i = next;
  }
  flush();
  return tokens;
}

StopwordSet::StopwordSet(std::initializer_list<std::string_view> words) {
  for (auto w : words) add(w);
}

StopwordSet StopwordSet::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopword file " + path.string());
  StopwordSet set;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    const auto end = line.find_last_not_of(" \t\r");
    set.add(std::string_view(line).substr(begin, end - begin + 1));
  }
  return set;
}

void StopwordSet::add(std::string_view word) {
  std::string normalized = normalize(word);
  if (!normalized.empty()) words_.insert(std::move(normalized));
}

void StopwordSet::add(std::span<const std::string> words) {
  for (const auto& w : words) add(w);
}

std::vector<std::string> remove_stopwords(std::span<const std::string> tokens,
                                          const StopwordSet& stopwords) {
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!stopwords.contains(t)) kept.push_back(t);
  }
  return kept;
}

}  // namespace fbtopics
