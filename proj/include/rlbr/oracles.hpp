#ifndef RLBR_ORACLES_HPP_
#define RLBR_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rlbr/grpo.hpp"

namespace rlbr::oracles {

// Exhaustive recursive edit distance over all edit scripts. Exponential;
// only for short sequences. Kept independent of the DP implementation so
// the two can be checked against each other.
inline size_t brute_force_edit_distance(const std::vector<std::string>& a,
                                        const std::vector<std::string>& b,
                                        size_t i = 0, size_t j = 0) {
  if (i == a.size()) return b.size() - j;
  if (j == b.size()) return a.size() - i;
  size_t best = brute_force_edit_distance(a, b, i + 1, j + 1) +
                (a[i] == b[j] ? 0 : 1);
  best = std::min(best, brute_force_edit_distance(a, b, i + 1, j) + 1);
  best = std::min(best, brute_force_edit_distance(a, b, i, j + 1) + 1);
  return best;
}

inline std::vector<std::string> split_chars(const std::string& s) {
  std::vector<std::string> out;
  for (char c : s) out.emplace_back(1, c);
  return out;
}

// All strings of the given length over the alphabet.
inline std::vector<std::string> enumerate_strings(const std::string& alphabet,
                                                  size_t length) {
  std::vector<std::string> out{""};
  for (size_t i = 0; i < length; ++i) {
    std::vector<std::string> next;
    for (const std::string& s : out) {
      for (char c : alphabet) next.push_back(s + c);
    }
    out = std::move(next);
  }
  return out;
}

// Central finite-difference gradient of grpo_objective w.r.t. the logits.
inline std::vector<double> finite_difference_gradient(
    const PolicyParams& policy, const TrajectoryGroup& group,
    const GrpoConfig& cfg, double step = 1e-6) {
  std::vector<double> grad(policy.logits.size(), 0.0);
  PolicyParams perturbed = policy;
  for (size_t k = 0; k < policy.logits.size(); ++k) {
    perturbed.logits[k] = policy.logits[k] + step;
    double up = grpo_objective(perturbed, group, cfg);
    perturbed.logits[k] = policy.logits[k] - step;
    double down = grpo_objective(perturbed, group, cfg);
    perturbed.logits[k] = policy.logits[k];
    grad[k] = (up - down) / (2.0 * step);
  }
  return grad;
}

inline double max_relative_error(const std::vector<double>& a,
                                 const std::vector<double>& b) {
  double worst = 0.0;
  for (size_t k = 0; k < a.size(); ++k) {
    double scale = std::max({std::abs(a[k]), std::abs(b[k]), 1e-8});
    worst = std::max(worst, std::abs(a[k] - b[k]) / scale);
  }
  return worst;
}

}  // namespace rlbr::oracles

#endif  // RLBR_ORACLES_HPP_
