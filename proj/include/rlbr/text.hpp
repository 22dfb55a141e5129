#ifndef RLBR_TEXT_HPP_
#define RLBR_TEXT_HPP_

#include <string>
#include <string_view>
#include <vector>

namespace rlbr {

enum class Level { kWord, kChar };

/// A tokenized sequence at word or character granularity.
/// Word tokens are non-empty and contain no whitespace; char tokens are
/// single unicode scalar values (stored as UTF-8).
struct TokenSeq {
  std::vector<std::string> tokens;
  Level level = Level::kWord;

  bool operator==(const TokenSeq&) const = default;
};

// Lowercases ASCII letters and strips punctuation, keeping apostrophes
// that sit between alphanumeric characters. Collapses whitespace.
std::string normalize_text(std::string_view text);

// Splits normalized text on whitespace.
std::vector<std::string> tokenize_words(std::string_view normalized);

TokenSeq word_seq(std::string_view text);

// Characters of the space-joined word sequence, split at UTF-8 code
// point boundaries (the joining spaces are tokens too).
TokenSeq char_seq(const std::vector<std::string>& words);

TokenSeq to_level(const std::vector<std::string>& words, Level level);

std::vector<std::string> utf8_codepoints(std::string_view s);

}  // namespace rlbr

#endif  // RLBR_TEXT_HPP_
