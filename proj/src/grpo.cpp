#include "rlbr/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rlbr {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_token(const PolicyParams& policy, const TrajToken& tok) {
  if (tok.context >= policy.num_contexts || tok.action >= policy.num_actions) {
    throw std::invalid_argument("token id outside policy vocabulary");
  }
  if ((tok.mask & (1u << tok.action)) == 0) {
    throw std::invalid_argument("token action not in its available-action mask");
  }
}

}  // namespace

std::vector<double> PolicyParams::log_probs(size_t ctx, uint32_t mask,
                                            double temperature) const {
  std::vector<double> lp(num_actions, kNegInf);
  double max_logit = kNegInf;
  for (size_t a = 0; a < num_actions; ++a) {
    if ((mask & (1u << a)) == 0) continue;
    max_logit = std::max(max_logit, logit(ctx, a) / temperature);
  }
  double z = 0.0;
  for (size_t a = 0; a < num_actions; ++a) {
    if ((mask & (1u << a)) == 0) continue;
    z += std::exp(logit(ctx, a) / temperature - max_logit);
  }
  double log_z = max_logit + std::log(z);
  for (size_t a = 0; a < num_actions; ++a) {
    if ((mask & (1u << a)) == 0) continue;
    lp[a] = logit(ctx, a) / temperature - log_z;
  }
  return lp;
}

double PolicyParams::log_prob(size_t ctx, size_t action, uint32_t mask) const {
  return log_probs(ctx, mask)[action];
}

bool TrajectoryGroup::has_reference() const {
  return std::any_of(trajectories.begin(), trajectories.end(),
                     [](const Trajectory& t) { return t.is_reference; });
}

std::vector<double> compute_advantages(const std::vector<double>& rewards,
                                       double std_floor) {
  if (rewards.empty()) {
    throw std::invalid_argument("compute_advantages: empty reward list");
  }
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= static_cast<double>(rewards.size());
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= static_cast<double>(rewards.size());
  double std = std::sqrt(var);
  std::vector<double> adv(rewards.size(), 0.0);
  if (std < std_floor) return adv;
  for (size_t i = 0; i < rewards.size(); ++i) adv[i] = (rewards[i] - mean) / std;
  return adv;
}

void extend_with_reference(TrajectoryGroup& group, Trajectory reference,
                           double reference_reward, double std_floor) {
  if (group.has_reference()) {
    throw std::logic_error("group already contains a reference trajectory");
  }
  reference.is_reference = true;
  group.trajectories.push_back(std::move(reference));
  group.rewards.push_back(reference_reward);
  group.advantages = compute_advantages(group.rewards, std_floor);
}

double grpo_objective(const PolicyParams& policy, const TrajectoryGroup& group,
                      const GrpoConfig& cfg,
                      const PolicyParams* reference_policy) {
  if (group.advantages.size() != group.trajectories.size()) {
    throw std::invalid_argument("grpo_objective: advantages not populated");
  }
  double total = 0.0;
  for (size_t i = 0; i < group.trajectories.size(); ++i) {
    const Trajectory& traj = group.trajectories[i];
    if (traj.tokens.empty()) {
      throw std::invalid_argument("grpo_objective: empty trajectory");
    }
    double adv = group.advantages[i];
    double traj_sum = 0.0;
    for (size_t t = 0; t < traj.tokens.size(); ++t) {
      const TrajToken& tok = traj.tokens[t];
      check_token(policy, tok);
      double lp = policy.log_prob(tok.context, tok.action, tok.mask);
      double ratio = std::exp(lp - traj.old_log_probs[t]);
      double clipped =
          std::clamp(ratio, 1.0 - cfg.epsilon, 1.0 + cfg.epsilon);
      traj_sum += std::min(ratio * adv, clipped * adv);
      if (cfg.beta > 0.0 && reference_policy != nullptr) {
        double lp_ref =
            reference_policy->log_prob(tok.context, tok.action, tok.mask);
        double k3 = std::exp(lp_ref - lp) - (lp_ref - lp) - 1.0;
        traj_sum -= cfg.beta * k3;
      }
    }
    total += traj_sum / static_cast<double>(traj.tokens.size());
  }
  return total / static_cast<double>(group.trajectories.size());
}

std::vector<double> grpo_gradient(const PolicyParams& policy,
                                  const TrajectoryGroup& group,
                                  const GrpoConfig& cfg,
                                  const PolicyParams* reference_policy) {
  if (group.advantages.size() != group.trajectories.size()) {
    throw std::invalid_argument("grpo_gradient: advantages not populated");
  }
  std::vector<double> grad(policy.logits.size(), 0.0);
  const double group_norm = 1.0 / static_cast<double>(group.trajectories.size());
  for (size_t i = 0; i < group.trajectories.size(); ++i) {
    const Trajectory& traj = group.trajectories[i];
    if (traj.tokens.empty()) {
      throw std::invalid_argument("grpo_gradient: empty trajectory");
    }
    double adv = group.advantages[i];
    double tok_norm = group_norm / static_cast<double>(traj.tokens.size());
    for (size_t t = 0; t < traj.tokens.size(); ++t) {
      const TrajToken& tok = traj.tokens[t];
      check_token(policy, tok);
      std::vector<double> lps = policy.log_probs(tok.context, tok.mask);
      double lp = lps[tok.action];
      double ratio = std::exp(lp - traj.old_log_probs[t]);
      double clipped =
          std::clamp(ratio, 1.0 - cfg.epsilon, 1.0 + cfg.epsilon);
      // d/d lp of the surrogate; zero when the saturated clip branch is
      // the active minimum.
      double coeff = 0.0;
      if (ratio * adv <= clipped * adv) coeff = adv * ratio;
      if (cfg.beta > 0.0 && reference_policy != nullptr) {
        double lp_ref =
            reference_policy->log_prob(tok.context, tok.action, tok.mask);
        coeff += cfg.beta * (std::exp(lp_ref - lp) - 1.0);
      }
      if (coeff == 0.0) continue;
      // Chain through the masked log-softmax: d lp(a) / d logit(a') =
      // [a == a'] - p(a').
      for (size_t a = 0; a < policy.num_actions; ++a) {
        if ((tok.mask & (1u << a)) == 0) continue;
        double p = std::exp(lps[a]);
        double delta = (a == tok.action) ? 1.0 : 0.0;
        grad[tok.context * policy.num_actions + a] +=
            tok_norm * coeff * (delta - p);
      }
    }
  }
  return grad;
}

PolicyParams grpo_step(const PolicyParams& policy,
                       const std::vector<TrajectoryGroup>& groups,
                       const GrpoConfig& cfg, double learning_rate,
                       const PolicyParams* reference_policy) {
  if (learning_rate <= 0.0) {
    throw std::invalid_argument("grpo_step: learning rate must be positive");
  }
  std::vector<double> mean_grad(policy.logits.size(), 0.0);
  for (const TrajectoryGroup& group : groups) {
    std::vector<double> g = grpo_gradient(policy, group, cfg, reference_policy);
    for (size_t k = 0; k < g.size(); ++k) mean_grad[k] += g[k];
  }
  PolicyParams updated = policy;
  if (!groups.empty()) {
    double inv = 1.0 / static_cast<double>(groups.size());
    for (size_t k = 0; k < mean_grad.size(); ++k) {
      updated.logits[k] += learning_rate * mean_grad[k] * inv;
    }
  }
  return updated;
}

}  // namespace rlbr
