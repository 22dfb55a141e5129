#include "rlbr/text.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace rlbr {

namespace {

bool is_ascii_alnum(unsigned char c) { return std::isalnum(c) != 0; }

bool is_ascii_punct(unsigned char c) {
  return c < 0x80 && std::ispunct(c) != 0;
}

}  // namespace

std::string normalize_text(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (c < 0x80 && std::isspace(c)) {
      if (!out.empty() && out.back() != ' ') out.push_back(' ');
      continue;
    }
    if (c == '\'') {
      // intra-word apostrophe only
      bool prev_ok = i > 0 && is_ascii_alnum(static_cast<unsigned char>(text[i - 1]));
      bool next_ok = i + 1 < text.size() &&
                     is_ascii_alnum(static_cast<unsigned char>(text[i + 1]));
      if (prev_ok && next_ok) out.push_back('\'');
      continue;
    }
    if (is_ascii_punct(c)) continue;
    out.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  size_t start = out.find_first_not_of(' ');
  if (start == std::string::npos) return "";
  return out.substr(start);
}

std::vector<std::string> tokenize_words(std::string_view normalized) {
  std::vector<std::string> words;
  size_t i = 0;
  while (i < normalized.size()) {
    while (i < normalized.size() && normalized[i] == ' ') ++i;
    size_t j = i;
    while (j < normalized.size() && normalized[j] != ' ') ++j;
    if (j > i) words.emplace_back(normalized.substr(i, j - i));
    i = j;
  }
  return words;
}

TokenSeq word_seq(std::string_view text) {
  return TokenSeq{tokenize_words(normalize_text(text)), Level::kWord};
}

std::vector<std::string> utf8_codepoints(std::string_view s) {
  std::vector<std::string> cps;
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    size_t len = 1;
    if ((c & 0x80) == 0x00) len = 1;
    else if ((c & 0xE0) == 0xC0) len = 2;
    else if ((c & 0xF0) == 0xE0) len = 3;
    else if ((c & 0xF8) == 0xF0) len = 4;
    if (i + len > s.size()) len = 1;  // tolerate truncated input
    cps.emplace_back(s.substr(i, len));
    i += len;
  }
  return cps;
}

TokenSeq char_seq(const std::vector<std::string>& words) {
  std::string joined;
  for (size_t i = 0; i < words.size(); ++i) {
    if (i > 0) joined.push_back(' ');
    joined += words[i];
  }
  return TokenSeq{utf8_codepoints(joined), Level::kChar};
}

TokenSeq to_level(const std::vector<std::string>& words, Level level) {
  if (level == Level::kWord) return TokenSeq{words, Level::kWord};
  return char_seq(words);
}

}  // namespace rlbr
