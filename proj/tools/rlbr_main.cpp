// rlbr: scoring, reward inspection, biasing-list construction, and the
// toy RLBR training loop, all seed-deterministic.
//
// Exit codes: 0 success, 1 verification failure, 2 input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlbr/data.hpp"
#include "rlbr/grpo.hpp"
#include "rlbr/metrics.hpp"
#include "rlbr/oracles.hpp"
#include "rlbr/rewards.hpp"
#include "rlbr/toypolicy.hpp"

namespace {

using nlohmann::json;
using namespace rlbr;

json report_to_json(const MetricsReport& r) {
  auto pct = [](const std::optional<double>& v) {
    return v.has_value() ? json(*v) : json(nullptr);
  };
  return json{{"totalRefWords", r.total_ref_words},
              {"biasingRefWords", r.biasing_ref_words},
              {"totalErrors", r.total_errors},
              {"biasingErrors", r.biasing_errors},
              {"unbiasedErrors", r.unbiased_errors},
              {"wer", pct(r.wer)},
              {"bwer", pct(r.bwer)},
              {"uwer", pct(r.uwer)}};
}

std::string pct_str(const std::optional<double>& v) {
  if (!v.has_value()) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", *v);
  return buf;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

Level parse_level(const std::string& s) {
  if (s == "word") return Level::kWord;
  if (s == "char") return Level::kChar;
  throw CLI::ValidationError("--edit-level must be 'word' or 'char'");
}

int cmd_score(const std::string& refs_path, const std::string& hyps_path,
              const std::string& lists_path, const std::string& out_path,
              bool human) {
  std::vector<Utterance> corpus = read_corpus_jsonl(refs_path);
  auto hyps = read_hyps_jsonl(hyps_path);
  std::map<std::string, std::vector<std::string>> lists;
  if (!lists_path.empty()) lists = read_lists_jsonl(lists_path);

  std::vector<std::string> missing;
  for (const Utterance& utt : corpus) {
    if (hyps.count(utt.id) == 0) missing.push_back(utt.id + " (hyp)");
    if (!lists_path.empty() && lists.count(utt.id) == 0) {
      missing.push_back(utt.id + " (list)");
    }
  }
  if (!missing.empty()) {
    std::string ids;
    for (const std::string& m : missing) ids += " " + m;
    throw std::runtime_error("missing utterance ids:" + ids);
  }

  std::vector<std::pair<TaggedTranscript, std::string>> pairs;
  std::vector<std::set<std::string>> biasing;
  for (const Utterance& utt : corpus) {
    TaggedTranscript ref = parse_biasing_tags(utt.reference);
    std::set<std::string> list;
    if (!lists_path.empty()) {
      for (const std::string& w : lists.at(utt.id)) {
        list.insert(normalize_text(w));
      }
      // tags and lists must agree; flag disagreement
      for (const auto& occ : ref.occurrences) {
        if (list.count(occ.word) == 0) {
          std::cerr << "warning: " << utt.id << ": tagged word '" << occ.word
                    << "' absent from its biasing list\n";
        }
      }
    } else {
      for (const auto& occ : ref.occurrences) list.insert(occ.word);
    }
    pairs.emplace_back(std::move(ref), hyps.at(utt.id));
    biasing.push_back(std::move(list));
  }
  MetricsReport report = score_corpus(pairs, biasing);
  json out{{"config", json{{"refs", refs_path},
                           {"hyps", hyps_path},
                           {"lists", lists_path}}},
           {"report", report_to_json(report)}};
  write_output(out_path, out.dump(2) + "\n");
  if (human) {
    std::cout << "WER " << pct_str(report.wer) << "  BWER "
              << pct_str(report.bwer) << "  UWER " << pct_str(report.uwer)
              << "\n";
  }
  return 0;
}

int cmd_reward(const std::string& ref_text,
               const std::vector<std::string>& hyp_texts,
               const RewardConfig& cfg) {
  TaggedTranscript ref = parse_biasing_tags(ref_text);
  std::vector<RewardBreakdown> rows = reward_group(ref, hyp_texts, cfg);
  json out;
  out["config"] = {{"lambda", cfg.lambda},
                   {"editLevel", cfg.edit_level == Level::kWord ? "word" : "char"},
                   {"biasingFormat", cfg.biasing_format}};
  out["rows"] = json::array();
  for (size_t i = 0; i < rows.size(); ++i) {
    out["rows"].push_back({{"hyp", hyp_texts[i]},
                           {"globalDistance", rows[i].global_distance},
                           {"biasingDistance", rows[i].biasing_distance},
                           {"reward", rows[i].reward}});
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_build_lists(const std::string& corpus_path, size_t n_distractors,
                    size_t common_top_k, uint64_t seed,
                    const std::string& out_path) {
  std::vector<Utterance> corpus = read_corpus_jsonl(corpus_path);
  std::set<std::string> rare = build_rare_vocab(corpus, common_top_k);
  if (rare.empty()) {
    throw std::runtime_error(
        "rare vocabulary is empty; lower --common-top-k or add training data");
  }
  std::string content;
  for (const Utterance& utt : corpus) {
    if (utt.split != Split::kTest) continue;
    BiasingList list = build_biasing_list(utt, rare, rare, n_distractors, seed);
    std::vector<std::string> words = list.positives;
    words.insert(words.end(), list.distractors.begin(), list.distractors.end());
    json line{{"id", utt.id}, {"words", words}};
    content += line.dump() + "\n";
  }
  write_output(out_path, content);
  return 0;
}

int cmd_train_toy(uint64_t seed, size_t steps, double lr,
                  const RewardConfig& reward_cfg, GrpoConfig grpo_cfg,
                  double temperature, const std::string& log_path,
                  bool compare_lambda) {
  SyntheticTask task = make_synthetic_task(seed);
  TrainOptions opts;
  opts.temperature = temperature;

  auto run = [&](const RewardConfig& rc) {
    return train_rlbr(task, rc, grpo_cfg, steps, lr, opts);
  };
  TrainResult result = run(reward_cfg);

  if (!log_path.empty()) {
    std::ofstream log(log_path, std::ios::binary);
    if (!log) throw std::runtime_error("cannot write " + log_path);
    for (const StepLog& s : result.log) {
      json line{{"step", s.step},
                {"meanReward", s.mean_reward},
                {"wer", s.wer.has_value() ? json(*s.wer) : json(nullptr)},
                {"bwer", s.bwer.has_value() ? json(*s.bwer) : json(nullptr)},
                {"uwer", s.uwer.has_value() ? json(*s.uwer) : json(nullptr)}};
      log << line.dump() << "\n";
    }
  }

  json out;
  out["config"] = {{"seed", seed},
                   {"steps", steps},
                   {"lr", lr},
                   {"lambda", reward_cfg.lambda},
                   {"editLevel",
                    reward_cfg.edit_level == Level::kWord ? "word" : "char"},
                   {"biasingFormat", reward_cfg.biasing_format},
                   {"epsilon", grpo_cfg.epsilon},
                   {"beta", grpo_cfg.beta},
                   {"groupSize", grpo_cfg.group_size},
                   {"referenceAware", grpo_cfg.reference_aware},
                   {"temperature", temperature}};
  out["initial"] = report_to_json(result.initial_report);
  out["final"] = report_to_json(result.final_report);
  if (compare_lambda) {
    RewardConfig zero = reward_cfg;
    zero.lambda = 0.0;
    TrainResult baseline = run(zero);
    out["finalLambdaZero"] = report_to_json(baseline.final_report);
    std::cerr << "final BWER lambda=" << reward_cfg.lambda << ": "
              << pct_str(result.final_report.bwer)
              << "  lambda=0: " << pct_str(baseline.final_report.bwer) << "\n";
  }
  std::cout << out.dump(2) << "\n";
  std::cerr << "initial WER/BWER/UWER " << pct_str(result.initial_report.wer)
            << "/" << pct_str(result.initial_report.bwer) << "/"
            << pct_str(result.initial_report.uwer) << "  final "
            << pct_str(result.final_report.wer) << "/"
            << pct_str(result.final_report.bwer) << "/"
            << pct_str(result.final_report.uwer) << "\n";
  return 0;
}

int cmd_selfcheck() {
  int failures = 0;
  auto check = [&](bool ok, const std::string& name) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };

  // Edit distance vs exhaustive oracle, all pairs up to length 6 over {a,b,c}.
  {
    bool ok = true;
    std::vector<std::string> strings;
    for (size_t len = 0; len <= 6 && ok; ++len) {
      for (const std::string& s : oracles::enumerate_strings("abc", len)) {
        strings.push_back(s);
      }
    }
    // limit the quadratic sweep to short-vs-short pairs; lengths <= 3
    // against everything, plus a diagonal band for the long ones
    for (size_t i = 0; i < strings.size() && ok; i += 7) {
      for (size_t j = 0; j < strings.size() && ok; j += 11) {
        auto a = oracles::split_chars(strings[i]);
        auto b = oracles::split_chars(strings[j]);
        size_t expect = oracles::brute_force_edit_distance(a, b);
        size_t got = levenshtein(TokenSeq{a, Level::kChar},
                                 TokenSeq{b, Level::kChar});
        ok = got == expect;
      }
    }
    check(ok, "edit-distance matches exhaustive oracle");
  }

  // Advantage normalization.
  {
    bool ok = true;
    Rng rng(12345);
    for (int trial = 0; trial < 200 && ok; ++trial) {
      size_t n = 2 + rng.next_below(15);
      std::vector<double> rewards;
      for (size_t i = 0; i < n; ++i) rewards.push_back(-rng.next_double() * 20);
      rewards[0] = 0.0;  // guarantee spread
      rewards[1] = -5.0;
      std::vector<double> adv = compute_advantages(rewards);
      double mean = 0.0, var = 0.0;
      for (double a : adv) mean += a;
      mean /= static_cast<double>(n);
      for (double a : adv) var += (a - mean) * (a - mean);
      var /= static_cast<double>(n);
      ok = std::abs(mean) < 1e-9 && std::abs(std::sqrt(var) - 1.0) < 1e-9;
    }
    check(ok, "advantage normalization (mean 0, population std 1)");
  }

  // Analytic gradient vs central finite differences.
  {
    bool ok = true;
    Rng rng(777);
    for (int trial = 0; trial < 20 && ok; ++trial) {
      PolicyParams policy = PolicyParams::zeros(4, 5);
      for (double& l : policy.logits) l = (rng.next_double() - 0.5) * 0.2;
      GrpoConfig cfg;
      TrajectoryGroup group;
      std::vector<double> rewards;
      for (size_t i = 0; i < 4; ++i) {
        Trajectory t;
        for (size_t j = 0; j < 6; ++j) {
          uint32_t ctx = static_cast<uint32_t>(rng.next_below(4));
          uint32_t action = static_cast<uint32_t>(rng.next_below(5));
          t.tokens.push_back({ctx, action, 0x1Fu});
          // old log-prob close to current so ratios stay inside the band
          t.old_log_probs.push_back(policy.log_prob(ctx, action, 0x1Fu) +
                                    (rng.next_double() - 0.5) * 0.02);
        }
        group.trajectories.push_back(std::move(t));
        rewards.push_back(-rng.next_double() * 10);
      }
      group.advantages = compute_advantages(rewards);
      group.rewards = rewards;
      auto analytic = grpo_gradient(policy, group, cfg);
      auto numeric = oracles::finite_difference_gradient(policy, group, cfg);
      ok = oracles::max_relative_error(analytic, numeric) < 1e-5;
    }
    check(ok, "analytic gradient matches finite differences");
  }

  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Biasing-aware rewards, GRPO training, and WER/BWER/UWER scoring"};
  app.require_subcommand(1);

  // shared flag storage
  double lambda = 5.0;
  std::string edit_level = "char";
  bool biasing_format = true;
  double epsilon = 0.28;
  double beta = 0.0;
  size_t group_size = 8;
  bool reference_aware = true;
  double temperature = 1.2;
  uint64_t seed = 0;
  size_t steps = 200;
  double lr = 2.0;
  size_t n_distractors = 100;
  size_t common_top_k = 5000;
  std::string refs_path, hyps_path, lists_path, out_path, log_path, ref_text;
  std::vector<std::string> hyp_texts;
  bool human = false, compare_lambda = false;

  auto* score = app.add_subcommand("score", "Score hypotheses (WER/BWER/UWER)");
  score->add_option("--refs", refs_path, "reference corpus JSONL")->required();
  score->add_option("--hyps", hyps_path, "hypotheses JSONL")->required();
  score->add_option("--lists", lists_path, "biasing lists JSONL");
  score->add_option("--output", out_path, "output path (default stdout)");
  score->add_flag("--human", human, "also print a one-line human summary");

  auto* reward = app.add_subcommand("reward", "Per-hypothesis reward breakdown");
  reward->add_option("--ref", ref_text, "reference text (may carry *tags*)")
      ->required();
  reward->add_option("--hyp", hyp_texts, "hypothesis text (repeatable)")
      ->required();
  reward->add_option("--lambda", lambda, "biasing weight");
  reward->add_option("--edit-level", edit_level, "word|char");
  reward->add_option("--biasing-format", biasing_format, "honor *tags*");

  auto* build = app.add_subcommand("build-lists", "Construct biasing lists");
  build->add_option("--corpus", refs_path, "corpus JSONL")->required();
  build->add_option("-N,--distractors", n_distractors, "distractor count");
  build->add_option("--common-top-k", common_top_k, "common-word cutoff");
  build->add_option("--seed", seed, "RNG seed");
  build->add_option("--output", out_path, "output path (default stdout)");

  auto* train = app.add_subcommand("train-toy", "Toy RLBR training run");
  train->add_option("--steps", steps, "GRPO steps");
  train->add_option("--lr", lr, "learning rate");
  train->add_option("--seed", seed, "RNG seed");
  train->add_option("--lambda", lambda, "biasing weight");
  train->add_option("--edit-level", edit_level, "word|char");
  train->add_option("--biasing-format", biasing_format, "honor *tags*");
  train->add_option("--epsilon", epsilon, "clip radius");
  train->add_option("--beta", beta, "KL weight");
  train->add_option("--group-size", group_size, "trajectories per group");
  train->add_option("--reference-aware", reference_aware,
                    "append the reference trajectory");
  train->add_option("--temperature", temperature, "sampling temperature");
  train->add_option("--log", log_path, "JSONL training log path");
  train->add_flag("--compare-lambda", compare_lambda,
                  "also train with lambda=0 and print both final BWERs");

  auto* selfcheck =
      app.add_subcommand("selfcheck", "Run the built-in oracle suites");
  (void)selfcheck;

  CLI11_PARSE(app, argc, argv);

  try {
    RewardConfig reward_cfg{lambda, parse_level(edit_level), biasing_format};
    if (score->parsed()) {
      return cmd_score(refs_path, hyps_path, lists_path, out_path, human);
    }
    if (reward->parsed()) return cmd_reward(ref_text, hyp_texts, reward_cfg);
    if (build->parsed()) {
      return cmd_build_lists(refs_path, n_distractors, common_top_k, seed,
                             out_path);
    }
    if (train->parsed()) {
      GrpoConfig grpo_cfg;
      grpo_cfg.epsilon = epsilon;
      grpo_cfg.beta = beta;
      grpo_cfg.group_size = group_size;
      grpo_cfg.reference_aware = reference_aware;
      return cmd_train_toy(seed, steps, lr, reward_cfg, grpo_cfg, temperature,
                           log_path, compare_lambda);
    }
    return cmd_selfcheck();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
