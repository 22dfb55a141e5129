#ifndef RLBR_TOYPOLICY_HPP_
#define RLBR_TOYPOLICY_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rlbr/grpo.hpp"
#include "rlbr/metrics.hpp"
#include "rlbr/rewards.hpp"
#include "rlbr/rng.hpp"

namespace rlbr {

// Per-reference-word action space: emit the correct word, emit one of K
// confusable near-misses, or drop the word. Every trajectory in a group
// has exactly one token per reference word, so per-token GRPO sums stay
// aligned across the group.
struct ToyVocab {
  static constexpr size_t kActionCorrect = 0;
  static constexpr size_t kActionDelete(size_t k) { return k + 1; }
  static size_t num_actions(size_t k) { return k + 2; }
};

/// Synthetic noisy-transcription task: tagged references plus a map of
/// near-miss confusables per word, all derived from one seed.
struct SyntheticTask {
  std::vector<TaggedTranscript> train_refs;
  std::vector<TaggedTranscript> heldout_refs;
  std::map<std::string, std::vector<std::string>> confusables;
  size_t num_confusables = 3;
  uint64_t seed = 0;
};

struct TaskOptions {
  size_t num_references = 500;
  size_t min_words = 5;
  size_t max_words = 12;
  size_t min_biasing = 1;
  size_t max_biasing = 2;
  size_t num_confusables = 3;
  double heldout_fraction = 0.2;
};

SyntheticTask make_synthetic_task(uint64_t seed,
                                  const TaskOptions& opts = {});

// Context-feature layout: (is-biasing-word, word hash bucket).
size_t context_bucket(const std::string& word);
size_t context_id(bool is_biasing, const std::string& word);
size_t num_contexts();

PolicyParams make_initial_policy(size_t num_confusables);

// Available-action bitmask for a word (confusable actions are masked out
// for words with no confusables).
uint32_t action_mask(const std::string& word,
                     const std::map<std::string, std::vector<std::string>>& confusables,
                     size_t num_confusables);

// Samples G trajectories at the given temperature. Recorded log-probs are
// the untempered policy's (temperature shapes exploration only).
TrajectoryGroup sample_group(
    const PolicyParams& policy, const TaggedTranscript& ref,
    const std::map<std::string, std::vector<std::string>>& confusables,
    size_t num_confusables, size_t group_size, double temperature, Rng& rng);

// Maps a trajectory's actions back to hypothesis text.
std::string realize_hypothesis(
    const TaggedTranscript& ref, const Trajectory& traj,
    const std::map<std::string, std::vector<std::string>>& confusables,
    size_t num_confusables);

// The reference as a trajectory (emit-correct everywhere), with log-probs
// under the given (old) policy.
Trajectory make_reference_trajectory(
    const PolicyParams& policy, const TaggedTranscript& ref,
    const std::map<std::string, std::vector<std::string>>& confusables,
    size_t num_confusables);

// Deterministic argmax decode, used for evaluation.
std::string decode_greedy(
    const PolicyParams& policy, const TaggedTranscript& ref,
    const std::map<std::string, std::vector<std::string>>& confusables,
    size_t num_confusables);

MetricsReport evaluate_policy(const PolicyParams& policy,
                              const SyntheticTask& task,
                              const std::vector<TaggedTranscript>& refs);

struct StepLog {
  size_t step = 0;
  double mean_reward = 0.0;
  std::optional<double> wer;
  std::optional<double> bwer;
  std::optional<double> uwer;
};

struct TrainOptions {
  size_t batch_size = 8;
  double temperature = 1.2;
};

struct TrainResult {
  PolicyParams policy;
  std::vector<StepLog> log;
  MetricsReport initial_report;
  MetricsReport final_report;
};

// The RLBR loop: sample groups, score rewards, optionally append the
// reference trajectory, normalize advantages, take one gradient step.
// Deterministic given (task.seed, configs). Aborts with a diagnostic if
// the mean reward diverges past 10x its initial magnitude.
TrainResult train_rlbr(const SyntheticTask& task, const RewardConfig& reward_cfg,
                       const GrpoConfig& grpo_cfg, size_t steps,
                       double learning_rate, const TrainOptions& opts = {});

}  // namespace rlbr

#endif  // RLBR_TOYPOLICY_HPP_
