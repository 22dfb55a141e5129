#ifndef RLBR_ALIGNMENT_HPP_
#define RLBR_ALIGNMENT_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "rlbr/text.hpp"

namespace rlbr {

enum class EditKind { kMatch, kSubstitute, kDelete, kInsert };

struct EditOp {
  EditKind kind;
  // kDelete has no hyp index, kInsert no ref index (left as npos).
  static constexpr size_t npos = static_cast<size_t>(-1);
  size_t ref_index = npos;
  size_t hyp_index = npos;

  bool operator==(const EditOp&) const = default;
};

/// Minimal-cost edit script between a reference and a hypothesis.
/// Every ref and hyp index appears exactly once, in increasing order;
/// cost counts the non-match operations.
struct Alignment {
  std::vector<EditOp> ops;
  size_t cost = 0;
};

// Unit-cost Levenshtein distance. Throws std::invalid_argument on a
// level mismatch between the two sequences.
size_t levenshtein(const TokenSeq& ref, const TokenSeq& hyp);

// Full alignment with deterministic backtrace; ties broken with
// precedence match > substitute > delete > insert.
Alignment align(const TokenSeq& ref, const TokenSeq& hyp);

struct BiasingOccurrence {
  size_t word_index;  // position in the untagged reference word sequence
  std::string word;
};

// Edit distance restricted to biasing-word occurrences. Each occurrence
// is compared against the hypothesis span its reference position aligns
// to under the global word-level alignment; a deleted biasing word is
// compared against the empty span. At word level the per-word distance
// is 0/1 exact match; at char level it is the character Levenshtein
// distance between the word and its span.
size_t biasing_span_distance(const std::vector<std::string>& ref_words,
                             const std::vector<BiasingOccurrence>& occurrences,
                             const std::vector<std::string>& hyp_words,
                             Level level);

}  // namespace rlbr

#endif  // RLBR_ALIGNMENT_HPP_
