#include "rlbr/metrics.hpp"

#include <stdexcept>

namespace rlbr {

ErrorCounts attribute_errors(const Alignment& alignment,
                             const std::vector<std::string>& ref_words,
                             const std::vector<std::string>& hyp_words,
                             const std::set<std::string>& biasing_list) {
  ErrorCounts counts;
  for (const EditOp& op : alignment.ops) {
    switch (op.kind) {
      case EditKind::kMatch:
        break;
      case EditKind::kSubstitute:
      case EditKind::kDelete:
        if (biasing_list.count(ref_words[op.ref_index]) > 0) {
          ++counts.biasing;
        } else {
          ++counts.unbiased;
        }
        break;
      case EditKind::kInsert:
        if (biasing_list.count(hyp_words[op.hyp_index]) > 0) {
          ++counts.biasing;
        } else {
          ++counts.unbiased;
        }
        break;
    }
  }
  return counts;
}

MetricsReport finalize_report(size_t total_ref_words, size_t biasing_ref_words,
                              size_t biasing_errors, size_t unbiased_errors) {
  MetricsReport report;
  report.total_ref_words = total_ref_words;
  report.biasing_ref_words = biasing_ref_words;
  report.biasing_errors = biasing_errors;
  report.unbiased_errors = unbiased_errors;
  report.total_errors = biasing_errors + unbiased_errors;
  if (total_ref_words > 0) {
    report.wer = 100.0 * static_cast<double>(report.total_errors) /
                 static_cast<double>(total_ref_words);
  }
  if (biasing_ref_words > 0) {
    report.bwer = 100.0 * static_cast<double>(biasing_errors) /
                  static_cast<double>(biasing_ref_words);
  }
  size_t unbiased_ref_words = total_ref_words - biasing_ref_words;
  if (unbiased_ref_words > 0) {
    report.uwer = 100.0 * static_cast<double>(unbiased_errors) /
                  static_cast<double>(unbiased_ref_words);
  }
  return report;
}

MetricsReport score_corpus(
    const std::vector<std::pair<TaggedTranscript, std::string>>& pairs,
    const std::vector<std::set<std::string>>& biasing_lists) {
  if (pairs.size() != biasing_lists.size()) {
    throw std::invalid_argument(
        "score_corpus: one biasing list required per utterance");
  }
  size_t total_ref_words = 0, biasing_ref_words = 0;
  size_t biasing_errors = 0, unbiased_errors = 0;
  for (size_t i = 0; i < pairs.size(); ++i) {
    const TaggedTranscript& ref = pairs[i].first;
    const std::set<std::string>& list = biasing_lists[i];
    std::vector<std::string> hyp_words =
        tokenize_words(normalize_text(pairs[i].second));
    Alignment al = align(TokenSeq{ref.words, Level::kWord},
                         TokenSeq{hyp_words, Level::kWord});
    ErrorCounts counts = attribute_errors(al, ref.words, hyp_words, list);
    biasing_errors += counts.biasing;
    unbiased_errors += counts.unbiased;
    total_ref_words += ref.words.size();
    for (const std::string& w : ref.words) {
      if (list.count(w) > 0) ++biasing_ref_words;
    }
  }
  return finalize_report(total_ref_words, biasing_ref_words, biasing_errors,
                         unbiased_errors);
}

}  // namespace rlbr
