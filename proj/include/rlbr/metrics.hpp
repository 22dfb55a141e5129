#ifndef RLBR_METRICS_HPP_
#define RLBR_METRICS_HPP_

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rlbr/alignment.hpp"
#include "rlbr/rewards.hpp"

namespace rlbr {

/// WER/BWER/UWER with the exact error-count decomposition
/// totalErrors == biasingErrors + unbiasedErrors.
struct MetricsReport {
  size_t total_ref_words = 0;
  size_t biasing_ref_words = 0;
  size_t total_errors = 0;
  size_t biasing_errors = 0;
  size_t unbiased_errors = 0;
  // Percentages; absent when the denominator is zero.
  std::optional<double> wer;
  std::optional<double> bwer;
  std::optional<double> uwer;
};

struct ErrorCounts {
  size_t biasing = 0;
  size_t unbiased = 0;
};

// Attributes every non-match edit op to biasing or unbiased words.
// Substitutions and deletions follow the reference word's list
// membership; insertions follow the inserted hypothesis word's.
ErrorCounts attribute_errors(const Alignment& alignment,
                             const std::vector<std::string>& ref_words,
                             const std::vector<std::string>& hyp_words,
                             const std::set<std::string>& biasing_list);

// Corpus-level pooled scoring (sum counts, then divide). Throws
// std::invalid_argument when the list count disagrees with the pairs.
MetricsReport score_corpus(
    const std::vector<std::pair<TaggedTranscript, std::string>>& pairs,
    const std::vector<std::set<std::string>>& biasing_lists);

MetricsReport finalize_report(size_t total_ref_words, size_t biasing_ref_words,
                              size_t biasing_errors, size_t unbiased_errors);

}  // namespace rlbr

#endif  // RLBR_METRICS_HPP_
