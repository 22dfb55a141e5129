#ifndef RLBR_GRPO_HPP_
#define RLBR_GRPO_HPP_

#include <cstdint>
#include <string>
#include <vector>

namespace rlbr {

/// Tabular softmax policy: one logit row per context feature, one column
/// per action. Stands in for the autoregressive policy being optimized.
struct PolicyParams {
  size_t num_contexts = 0;
  size_t num_actions = 0;
  std::vector<double> logits;  // row-major [num_contexts][num_actions]

  static PolicyParams zeros(size_t contexts, size_t actions) {
    return PolicyParams{contexts, actions,
                        std::vector<double>(contexts * actions, 0.0)};
  }

  double logit(size_t ctx, size_t action) const {
    return logits[ctx * num_actions + action];
  }
  double& logit(size_t ctx, size_t action) {
    return logits[ctx * num_actions + action];
  }

  // Log-probabilities over the actions enabled in `mask` (bit i = action i
  // available); disabled actions get -inf. Optional temperature rescales
  // the logits before the softmax.
  std::vector<double> log_probs(size_t ctx, uint32_t mask,
                                double temperature = 1.0) const;
  double log_prob(size_t ctx, size_t action, uint32_t mask) const;
};

struct TrajToken {
  uint32_t context = 0;
  uint32_t action = 0;
  uint32_t mask = 0;  // available-action bitmask at this step

  bool operator==(const TrajToken&) const = default;
};

struct Trajectory {
  std::vector<TrajToken> tokens;
  std::vector<double> old_log_probs;  // log pi_old, one per token
  bool is_reference = false;
};

struct TrajectoryGroup {
  std::string prompt_id;
  std::vector<Trajectory> trajectories;
  std::vector<double> rewards;
  std::vector<double> advantages;

  bool has_reference() const;
};

struct GrpoConfig {
  double epsilon = 0.28;
  double beta = 0.0;
  size_t group_size = 8;
  bool reference_aware = true;
  double std_floor = 1e-8;
};

// Group-normalized advantages: (r - mean) / population std. Degenerate
// groups (std below the floor) get all-zero advantages. Throws
// std::invalid_argument on an empty reward list.
std::vector<double> compute_advantages(const std::vector<double>& rewards,
                                       double std_floor = 1e-8);

// Appends the reference trajectory with its reward and recomputes the
// advantages over the extended reward set. Throws std::logic_error if a
// reference trajectory is already present.
void extend_with_reference(TrajectoryGroup& group, Trajectory reference,
                           double reference_reward, double std_floor = 1e-8);

// Clipped surrogate objective. `reference_policy` is only consulted when
// cfg.beta > 0 (k3 KL estimator against the frozen reference).
double grpo_objective(const PolicyParams& policy, const TrajectoryGroup& group,
                      const GrpoConfig& cfg,
                      const PolicyParams* reference_policy = nullptr);

// Exact gradient of grpo_objective w.r.t. the logits, with zero gradient
// on the saturated clip branch. Same shape as policy.logits.
std::vector<double> grpo_gradient(const PolicyParams& policy,
                                  const TrajectoryGroup& group,
                                  const GrpoConfig& cfg,
                                  const PolicyParams* reference_policy = nullptr);

// One gradient-ascent step on the mean gradient over groups.
PolicyParams grpo_step(const PolicyParams& policy,
                       const std::vector<TrajectoryGroup>& groups,
                       const GrpoConfig& cfg, double learning_rate,
                       const PolicyParams* reference_policy = nullptr);

}  // namespace rlbr

#endif  // RLBR_GRPO_HPP_
