#include "rlbr/alignment.hpp"

#include <algorithm>
#include <stdexcept>

namespace rlbr {

namespace {

void check_levels(const TokenSeq& ref, const TokenSeq& hyp) {
  if (ref.level != hyp.level) {
    throw std::invalid_argument(
        "levenshtein/align: ref and hyp must share the same level");
  }
}

}  // namespace

size_t levenshtein(const TokenSeq& ref, const TokenSeq& hyp) {
  check_levels(ref, hyp);
  const auto& a = ref.tokens;
  const auto& b = hyp.tokens;
  std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (size_t j = 1; j <= b.size(); ++j) {
      size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

Alignment align(const TokenSeq& ref, const TokenSeq& hyp) {
  check_levels(ref, hyp);
  const auto& a = ref.tokens;
  const auto& b = hyp.tokens;
  const size_t n = a.size(), m = b.size();
  std::vector<std::vector<size_t>> dp(n + 1, std::vector<size_t>(m + 1));
  for (size_t i = 0; i <= n; ++i) dp[i][0] = i;
  for (size_t j = 0; j <= m; ++j) dp[0][j] = j;
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      size_t sub = dp[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      dp[i][j] = std::min({sub, dp[i - 1][j] + 1, dp[i][j - 1] + 1});
    }
  }

  // Backtrace, precedence match > substitute > delete > insert on ties.
  Alignment out;
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 && a[i - 1] == b[j - 1] && dp[i][j] == dp[i - 1][j - 1]) {
      out.ops.push_back({EditKind::kMatch, i - 1, j - 1});
      --i, --j;
    } else if (i > 0 && j > 0 && a[i - 1] != b[j - 1] &&
               dp[i][j] == dp[i - 1][j - 1] + 1) {
      out.ops.push_back({EditKind::kSubstitute, i - 1, j - 1});
      --i, --j;
    } else if (i > 0 && dp[i][j] == dp[i - 1][j] + 1) {
      out.ops.push_back({EditKind::kDelete, i - 1, EditOp::npos});
      --i;
    } else {
      out.ops.push_back({EditKind::kInsert, EditOp::npos, j - 1});
      --j;
    }
  }
  std::reverse(out.ops.begin(), out.ops.end());
  out.cost = dp[n][m];
  return out;
}

size_t biasing_span_distance(const std::vector<std::string>& ref_words,
                             const std::vector<BiasingOccurrence>& occurrences,
                             const std::vector<std::string>& hyp_words,
                             Level level) {
  if (occurrences.empty()) return 0;
  Alignment al = align(TokenSeq{ref_words, Level::kWord},
                       TokenSeq{hyp_words, Level::kWord});

  // Hypothesis token aligned to each reference position (npos if deleted).
  std::vector<size_t> aligned_hyp(ref_words.size(), EditOp::npos);
  for (const EditOp& op : al.ops) {
    if (op.kind == EditKind::kMatch || op.kind == EditKind::kSubstitute) {
      aligned_hyp[op.ref_index] = op.hyp_index;
    }
  }

  size_t total = 0;
  for (const auto& occ : occurrences) {
    const std::string* span = aligned_hyp[occ.word_index] == EditOp::npos
                                  ? nullptr
                                  : &hyp_words[aligned_hyp[occ.word_index]];
    if (level == Level::kWord) {
      total += (span != nullptr && *span == occ.word) ? 0 : 1;
    } else {
      TokenSeq b_chars = char_seq({occ.word});
      TokenSeq span_chars =
          span != nullptr ? char_seq({*span}) : TokenSeq{{}, Level::kChar};
      total += levenshtein(b_chars, span_chars);
    }
  }
  return total;
}

}  // namespace rlbr
