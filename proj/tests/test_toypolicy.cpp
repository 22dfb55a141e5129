#include <doctest.h>

#include <cmath>

#include "rlbr/toypolicy.hpp"

using namespace rlbr;

namespace {

SyntheticTask small_task(uint64_t seed) {
  TaskOptions opts;
  opts.num_references = 60;
  return make_synthetic_task(seed, opts);
}

}  // namespace

TEST_CASE("synthetic task shape and determinism") {
  SyntheticTask task = small_task(1);
  CHECK(task.train_refs.size() == 48);
  CHECK(task.heldout_refs.size() == 12);
  for (const TaggedTranscript& ref : task.train_refs) {
    CHECK(ref.words.size() >= 5);
    CHECK(ref.words.size() <= 12);
    CHECK(ref.occurrences.size() >= 1);
    CHECK(ref.occurrences.size() <= 2);
  }
  for (const auto& [word, confs] : task.confusables) {
    CHECK(confs.size() == 3);
    for (const std::string& c : confs) CHECK(c != word);
  }
  SyntheticTask again = small_task(1);
  CHECK(again.train_refs.size() == task.train_refs.size());
  for (size_t i = 0; i < task.train_refs.size(); ++i) {
    CHECK(again.train_refs[i].raw == task.train_refs[i].raw);
  }
  SyntheticTask other = small_task(2);
  CHECK(other.train_refs[0].raw != task.train_refs[0].raw);
}

TEST_CASE("sampling probabilities sum to one per context") {
  SyntheticTask task = small_task(3);
  PolicyParams policy = make_initial_policy(task.num_confusables);
  const TaggedTranscript& ref = task.train_refs[0];
  for (size_t pos = 0; pos < ref.words.size(); ++pos) {
    uint32_t mask =
        action_mask(ref.words[pos], task.confusables, task.num_confusables);
    std::vector<double> lp = policy.log_probs(0, mask);
    double total = 0.0;
    for (size_t a = 0; a < lp.size(); ++a) {
      if ((mask & (1u << a)) != 0) total += std::exp(lp[a]);
    }
    CHECK(std::abs(total - 1.0) < 1e-12);
  }
}

TEST_CASE("deterministic-correct policy reproduces the reference") {
  SyntheticTask task = small_task(4);
  PolicyParams policy = make_initial_policy(task.num_confusables);
  // drive everything but emit-correct to effectively -inf
  for (size_t c = 0; c < policy.num_contexts; ++c) {
    for (size_t a = 1; a < policy.num_actions; ++a) policy.logit(c, a) = -1e9;
  }
  Rng rng(0);
  const TaggedTranscript& ref = task.train_refs[0];
  TrajectoryGroup group = sample_group(policy, ref, task.confusables,
                                       task.num_confusables, 4, 1.2, rng);
  RewardConfig cfg;
  for (const Trajectory& t : group.trajectories) {
    std::string hyp =
        realize_hypothesis(ref, t, task.confusables, task.num_confusables);
    CHECK(biasing_reward(parse_biasing_tags(ref.raw), hyp, cfg).reward == 0.0);
  }
}

TEST_CASE("uniform logits sample near-uniform actions") {
  // K=1: three actions, expect 1/3 each within 3 sigma over 10k draws
  SyntheticTask task = small_task(5);
  task.num_confusables = 1;
  PolicyParams policy = make_initial_policy(1);
  const TaggedTranscript& ref = task.train_refs[0];
  Rng rng(10);
  std::vector<size_t> counts(3, 0);
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    TrajectoryGroup g = sample_group(policy, ref, task.confusables, 1, 1, 1.0, rng);
    ++counts[g.trajectories[0].tokens[0].action];
  }
  double p = 1.0 / 3.0;
  double sigma = std::sqrt(n * p * (1 - p));
  for (size_t a = 0; a < 3; ++a) {
    CHECK(std::abs(static_cast<double>(counts[a]) - n * p) < 3 * sigma);
  }
}

TEST_CASE("sampling is deterministic under a fixed seed") {
  SyntheticTask task = small_task(6);
  PolicyParams policy = make_initial_policy(task.num_confusables);
  const TaggedTranscript& ref = task.train_refs[1];
  Rng r1(123), r2(123);
  TrajectoryGroup a = sample_group(policy, ref, task.confusables,
                                   task.num_confusables, 8, 1.2, r1);
  TrajectoryGroup b = sample_group(policy, ref, task.confusables,
                                   task.num_confusables, 8, 1.2, r2);
  REQUIRE(a.trajectories.size() == b.trajectories.size());
  for (size_t i = 0; i < a.trajectories.size(); ++i) {
    CHECK(a.trajectories[i].tokens == b.trajectories[i].tokens);
    CHECK(a.trajectories[i].old_log_probs == b.trajectories[i].old_log_probs);
  }
}

TEST_CASE("recorded log-probs round-trip against the policy") {
  SyntheticTask task = small_task(7);
  PolicyParams policy = make_initial_policy(task.num_confusables);
  for (size_t k = 0; k < policy.logits.size(); ++k) {
    policy.logits[k] = 0.01 * static_cast<double>(k % 17) - 0.08;
  }
  Rng rng(44);
  const TaggedTranscript& ref = task.train_refs[2];
  TrajectoryGroup group = sample_group(policy, ref, task.confusables,
                                       task.num_confusables, 4, 1.7, rng);
  for (const Trajectory& t : group.trajectories) {
    for (size_t j = 0; j < t.tokens.size(); ++j) {
      // untempered log pi, regardless of the sampling temperature
      CHECK(t.old_log_probs[j] ==
            policy.log_prob(t.tokens[j].context, t.tokens[j].action,
                            t.tokens[j].mask));
    }
  }
}

TEST_CASE("train_rlbr boundary and reproducibility") {
  SyntheticTask task = small_task(8);
  RewardConfig reward_cfg;
  GrpoConfig grpo_cfg;

  TrainResult zero = train_rlbr(task, reward_cfg, grpo_cfg, 0, 1.0);
  PolicyParams initial = make_initial_policy(task.num_confusables);
  CHECK(zero.policy.logits == initial.logits);
  CHECK(zero.log.empty());

  TrainResult a = train_rlbr(task, reward_cfg, grpo_cfg, 5, 2.0);
  TrainResult b = train_rlbr(task, reward_cfg, grpo_cfg, 5, 2.0);
  CHECK(a.policy.logits == b.policy.logits);
  REQUIRE(a.log.size() == 5);
  for (size_t i = 0; i < a.log.size(); ++i) {
    CHECK(a.log[i].mean_reward == b.log[i].mean_reward);
    CHECK(a.log[i].bwer == b.log[i].bwer);
  }
}

TEST_CASE("deterministic-correct policy keeps BWER at zero") {
  SyntheticTask task = small_task(9);
  PolicyParams policy = make_initial_policy(task.num_confusables);
  for (size_t c = 0; c < policy.num_contexts; ++c) {
    for (size_t a = 1; a < policy.num_actions; ++a) policy.logit(c, a) = -1e9;
  }
  MetricsReport r = evaluate_policy(policy, task, task.heldout_refs);
  CHECK(r.total_errors == 0);
  REQUIRE(r.bwer.has_value());
  CHECK(*r.bwer == 0.0);
}
