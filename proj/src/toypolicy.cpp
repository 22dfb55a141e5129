#include "rlbr/toypolicy.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace rlbr {

namespace {

constexpr size_t kBuckets = 16;
constexpr const char* kLetters = "abcdefghijklmnopqrstuvwxyz";

std::string random_word(Rng& rng, size_t min_len, size_t max_len) {
  size_t len = min_len + rng.next_below(max_len - min_len + 1);
  std::string w;
  for (size_t i = 0; i < len; ++i) w.push_back(kLetters[rng.next_below(26)]);
  return w;
}

// Single-character substitution or adjacent transposition, never equal to
// the source word.
std::string mutate_word(const std::string& word, Rng& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::string m = word;
    if (word.size() >= 2 && rng.next_below(2) == 0) {
      size_t p = rng.next_below(word.size() - 1);
      std::swap(m[p], m[p + 1]);
    } else {
      size_t p = rng.next_below(word.size());
      m[p] = kLetters[rng.next_below(26)];
    }
    if (m != word) return m;
  }
  return word + "x";
}

std::vector<std::string> make_confusables(const std::string& word, size_t k,
                                          Rng& rng) {
  std::vector<std::string> out;
  std::set<std::string> seen{word};
  while (out.size() < k) {
    std::string m = mutate_word(word, rng);
    if (seen.insert(m).second) {
      out.push_back(m);
    } else if (seen.size() > 4 * k + 4) {
      out.push_back(m);  // tiny words can run out of distinct variants
    }
  }
  return out;
}

std::set<std::string> biasing_set(const TaggedTranscript& ref) {
  std::set<std::string> s;
  for (const auto& occ : ref.occurrences) s.insert(occ.word);
  return s;
}

bool is_biasing_position(const TaggedTranscript& ref, size_t pos) {
  for (const auto& occ : ref.occurrences) {
    if (occ.word_index == pos) return true;
  }
  return false;
}

}  // namespace

size_t context_bucket(const std::string& word) {
  uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : word) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h % kBuckets;
}

size_t context_id(bool is_biasing, const std::string& word) {
  return (is_biasing ? kBuckets : 0) + context_bucket(word);
}

size_t num_contexts() { return 2 * kBuckets; }

PolicyParams make_initial_policy(size_t num_confusables) {
  return PolicyParams::zeros(num_contexts(),
                             ToyVocab::num_actions(num_confusables));
}

uint32_t action_mask(
    const std::string& word,
    const std::map<std::string, std::vector<std::string>>& confusables,
    size_t num_confusables) {
  uint32_t mask = 1u;  // emit-correct
  auto it = confusables.find(word);
  size_t available = it == confusables.end() ? 0 : it->second.size();
  for (size_t k = 1; k <= std::min(available, num_confusables); ++k) {
    mask |= 1u << k;
  }
  mask |= 1u << ToyVocab::kActionDelete(num_confusables);
  return mask;
}

SyntheticTask make_synthetic_task(uint64_t seed, const TaskOptions& opts) {
  SyntheticTask task;
  task.seed = seed;
  task.num_confusables = opts.num_confusables;
  Rng rng = Rng(seed).derive("task");

  const size_t n_common = 120, n_rare = 80;
  std::set<std::string> seen;
  std::vector<std::string> common, rare;
  while (common.size() < n_common) {
    std::string w = random_word(rng, 4, 8);
    if (seen.insert(w).second) common.push_back(w);
  }
  while (rare.size() < n_rare) {
    std::string w = random_word(rng, 5, 9);
    if (seen.insert(w).second) rare.push_back(w);
  }
  for (const std::string& w : seen) {
    Rng wrng = rng.derive(w);
    task.confusables[w] = make_confusables(w, opts.num_confusables, wrng);
  }

  std::vector<TaggedTranscript> refs;
  for (size_t u = 0; u < opts.num_references; ++u) {
    size_t len =
        opts.min_words + rng.next_below(opts.max_words - opts.min_words + 1);
    size_t n_bias =
        opts.min_biasing + rng.next_below(opts.max_biasing - opts.min_biasing + 1);
    n_bias = std::min(n_bias, len);
    std::set<size_t> bias_pos;
    while (bias_pos.size() < n_bias) bias_pos.insert(rng.next_below(len));
    std::string raw;
    for (size_t i = 0; i < len; ++i) {
      if (i > 0) raw.push_back(' ');
      if (bias_pos.count(i) > 0) {
        raw += "*" + rare[rng.next_below(rare.size())] + "*";
      } else {
        raw += common[rng.next_below(common.size())];
      }
    }
    refs.push_back(parse_biasing_tags(raw));
  }
  size_t n_heldout = static_cast<size_t>(
      static_cast<double>(opts.num_references) * opts.heldout_fraction);
  size_t n_train = opts.num_references - n_heldout;
  task.train_refs.assign(refs.begin(), refs.begin() + n_train);
  task.heldout_refs.assign(refs.begin() + n_train, refs.end());
  return task;
}

TrajectoryGroup sample_group(
    const PolicyParams& policy, const TaggedTranscript& ref,
    const std::map<std::string, std::vector<std::string>>& confusables,
    size_t num_confusables, size_t group_size, double temperature, Rng& rng) {
  if (group_size < 1) throw std::invalid_argument("sample_group: G >= 1");
  if (!(temperature > 0.0)) {
    throw std::invalid_argument("sample_group: temperature must be positive");
  }
  TrajectoryGroup group;
  group.prompt_id = ref.raw;
  for (size_t g = 0; g < group_size; ++g) {
    Trajectory traj;
    for (size_t pos = 0; pos < ref.words.size(); ++pos) {
      const std::string& word = ref.words[pos];
      uint32_t mask = action_mask(word, confusables, num_confusables);
      size_t ctx = context_id(is_biasing_position(ref, pos), word);
      std::vector<double> lp_sample = policy.log_probs(ctx, mask, temperature);
      std::vector<double> weights(lp_sample.size(), 0.0);
      for (size_t a = 0; a < lp_sample.size(); ++a) {
        if ((mask & (1u << a)) != 0) weights[a] = std::exp(lp_sample[a]);
      }
      size_t action = rng.categorical(weights);
      traj.tokens.push_back({static_cast<uint32_t>(ctx),
                             static_cast<uint32_t>(action), mask});
      traj.old_log_probs.push_back(policy.log_prob(ctx, action, mask));
    }
    group.trajectories.push_back(std::move(traj));
  }
  return group;
}

std::string realize_hypothesis(
    const TaggedTranscript& ref, const Trajectory& traj,
    const std::map<std::string, std::vector<std::string>>& confusables,
    size_t num_confusables) {
  std::string out;
  for (size_t pos = 0; pos < traj.tokens.size(); ++pos) {
    const std::string& word = ref.words[pos];
    size_t action = traj.tokens[pos].action;
    std::string emitted;
    if (action == ToyVocab::kActionCorrect) {
      emitted = word;
    } else if (action == ToyVocab::kActionDelete(num_confusables)) {
      continue;
    } else {
      emitted = confusables.at(word).at(action - 1);
    }
    if (!out.empty()) out.push_back(' ');
    out += emitted;
  }
  return out;
}

Trajectory make_reference_trajectory(
    const PolicyParams& policy, const TaggedTranscript& ref,
    const std::map<std::string, std::vector<std::string>>& confusables,
    size_t num_confusables) {
  Trajectory traj;
  traj.is_reference = true;
  for (size_t pos = 0; pos < ref.words.size(); ++pos) {
    const std::string& word = ref.words[pos];
    uint32_t mask = action_mask(word, confusables, num_confusables);
    size_t ctx = context_id(is_biasing_position(ref, pos), word);
    traj.tokens.push_back(
        {static_cast<uint32_t>(ctx), ToyVocab::kActionCorrect, mask});
    traj.old_log_probs.push_back(
        policy.log_prob(ctx, ToyVocab::kActionCorrect, mask));
  }
  return traj;
}

std::string decode_greedy(
    const PolicyParams& policy, const TaggedTranscript& ref,
    const std::map<std::string, std::vector<std::string>>& confusables,
    size_t num_confusables) {
  Trajectory traj;
  for (size_t pos = 0; pos < ref.words.size(); ++pos) {
    const std::string& word = ref.words[pos];
    uint32_t mask = action_mask(word, confusables, num_confusables);
    size_t ctx = context_id(is_biasing_position(ref, pos), word);
    size_t best = ToyVocab::kActionCorrect;
    for (size_t a = 0; a < policy.num_actions; ++a) {
      if ((mask & (1u << a)) == 0) continue;
      if (policy.logit(ctx, a) > policy.logit(ctx, best)) best = a;
    }
    traj.tokens.push_back({static_cast<uint32_t>(ctx),
                           static_cast<uint32_t>(best), mask});
    traj.old_log_probs.push_back(0.0);
  }
  return realize_hypothesis(ref, traj, confusables, num_confusables);
}

MetricsReport evaluate_policy(const PolicyParams& policy,
                              const SyntheticTask& task,
                              const std::vector<TaggedTranscript>& refs) {
  // One sampled hypothesis per reference under a fixed evaluation stream,
  // so metric movement reflects policy movement only.
  std::vector<std::pair<TaggedTranscript, std::string>> pairs;
  std::vector<std::set<std::string>> lists;
  for (const TaggedTranscript& ref : refs) {
    Rng rng = Rng(task.seed).derive("eval").derive(ref.raw);
    TrajectoryGroup g = sample_group(policy, ref, task.confusables,
                                     task.num_confusables, 1, 1.0, rng);
    pairs.emplace_back(
        ref, realize_hypothesis(ref, g.trajectories[0], task.confusables,
                                task.num_confusables));
    lists.push_back(biasing_set(ref));
  }
  return score_corpus(pairs, lists);
}

TrainResult train_rlbr(const SyntheticTask& task, const RewardConfig& reward_cfg,
                       const GrpoConfig& grpo_cfg, size_t steps,
                       double learning_rate, const TrainOptions& opts) {
  TrainResult result;
  result.policy = make_initial_policy(task.num_confusables);
  result.initial_report =
      evaluate_policy(result.policy, task, task.heldout_refs);
  result.final_report = result.initial_report;
  if (steps == 0) return result;
  if (task.train_refs.empty()) {
    throw std::invalid_argument("train_rlbr: task has no training references");
  }

  Rng base = Rng(task.seed).derive("train");
  double initial_magnitude = 0.0;
  bool have_initial = false;
  for (size_t step = 0; step < steps; ++step) {
    std::vector<TrajectoryGroup> groups;
    double reward_sum = 0.0;
    size_t reward_count = 0;
    for (size_t b = 0; b < opts.batch_size; ++b) {
      const TaggedTranscript& ref =
          task.train_refs[(step * opts.batch_size + b) % task.train_refs.size()];
      Rng rng = base.derive(step).derive(b);
      TrajectoryGroup group =
          sample_group(result.policy, ref, task.confusables,
                       task.num_confusables, grpo_cfg.group_size,
                       opts.temperature, rng);
      std::vector<std::string> hyps;
      for (const Trajectory& t : group.trajectories) {
        hyps.push_back(realize_hypothesis(ref, t, task.confusables,
                                          task.num_confusables));
      }
      for (const RewardBreakdown& rb : reward_group(ref, hyps, reward_cfg)) {
        group.rewards.push_back(rb.reward);
        reward_sum += rb.reward;
        ++reward_count;
      }
      if (grpo_cfg.reference_aware) {
        Trajectory ref_traj = make_reference_trajectory(
            result.policy, ref, task.confusables, task.num_confusables);
        extend_with_reference(group, std::move(ref_traj),
                              biasing_reward(ref, ref.raw, reward_cfg).reward,
                              grpo_cfg.std_floor);
      } else {
        group.advantages = compute_advantages(group.rewards, grpo_cfg.std_floor);
      }
      groups.push_back(std::move(group));
    }
    result.policy = grpo_step(result.policy, groups, grpo_cfg, learning_rate);

    double mean_reward = reward_sum / static_cast<double>(reward_count);
    if (!have_initial) {
      initial_magnitude = std::max(1.0, std::abs(mean_reward));
      have_initial = true;
    }
    if (mean_reward < -10.0 * initial_magnitude) {
      throw std::runtime_error(
          "train_rlbr diverged: mean reward " + std::to_string(mean_reward) +
          " exceeds 10x initial magnitude " + std::to_string(initial_magnitude) +
          " at step " + std::to_string(step));
    }
    MetricsReport report =
        evaluate_policy(result.policy, task, task.heldout_refs);
    StepLog log;
    log.step = step + 1;
    log.mean_reward = mean_reward;
    log.wer = report.wer;
    log.bwer = report.bwer;
    log.uwer = report.uwer;
    result.log.push_back(log);
    result.final_report = report;
  }
  return result;
}

}  // namespace rlbr
