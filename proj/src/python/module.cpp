#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rlbr/alignment.hpp"
#include "rlbr/data.hpp"
#include "rlbr/grpo.hpp"
#include "rlbr/metrics.hpp"
#include "rlbr/rewards.hpp"
#include "rlbr/toypolicy.hpp"

namespace py = pybind11;
using namespace rlbr;

namespace {

Level level_from_string(const std::string& s) {
  if (s == "word") return Level::kWord;
  if (s == "char") return Level::kChar;
  throw std::invalid_argument("level must be 'word' or 'char'");
}

TokenSeq make_seq(const std::vector<std::string>& tokens,
                  const std::string& level) {
  return TokenSeq{tokens, level_from_string(level)};
}

}  // namespace

PYBIND11_MODULE(_rlbr, m) {
  m.doc() = "Biasing-aware edit-distance rewards, GRPO, and WER/BWER scoring";

  py::register_exception<ParseError>(m, "TagParseError");

  py::class_<TaggedTranscript>(m, "TaggedTranscript")
      .def_readonly("raw", &TaggedTranscript::raw)
      .def_readonly("words", &TaggedTranscript::words)
      .def_property_readonly("occurrences", [](const TaggedTranscript& t) {
        std::vector<std::pair<size_t, std::string>> out;
        for (const auto& occ : t.occurrences) {
          out.emplace_back(occ.word_index, occ.word);
        }
        return out;
      });

  py::class_<RewardBreakdown>(m, "RewardBreakdown")
      .def_readonly("global_distance", &RewardBreakdown::global_distance)
      .def_readonly("biasing_distance", &RewardBreakdown::biasing_distance)
      .def_readonly("reward", &RewardBreakdown::reward);

  py::class_<MetricsReport>(m, "MetricsReport")
      .def_readonly("total_ref_words", &MetricsReport::total_ref_words)
      .def_readonly("biasing_ref_words", &MetricsReport::biasing_ref_words)
      .def_readonly("total_errors", &MetricsReport::total_errors)
      .def_readonly("biasing_errors", &MetricsReport::biasing_errors)
      .def_readonly("unbiased_errors", &MetricsReport::unbiased_errors)
      .def_readonly("wer", &MetricsReport::wer)
      .def_readonly("bwer", &MetricsReport::bwer)
      .def_readonly("uwer", &MetricsReport::uwer);

  m.def(
      "levenshtein",
      [](const std::vector<std::string>& ref, const std::vector<std::string>& hyp,
         const std::string& level) {
        return levenshtein(make_seq(ref, level), make_seq(hyp, level));
      },
      py::arg("ref"), py::arg("hyp"), py::arg("level") = "word");

  m.def(
      "align",
      [](const std::vector<std::string>& ref, const std::vector<std::string>& hyp,
         const std::string& level) {
        Alignment a = align(make_seq(ref, level), make_seq(hyp, level));
        std::vector<py::tuple> ops;
        for (const EditOp& op : a.ops) {
          const char* kind = op.kind == EditKind::kMatch        ? "match"
                             : op.kind == EditKind::kSubstitute ? "substitute"
                             : op.kind == EditKind::kDelete     ? "delete"
                                                                : "insert";
          py::object ref_idx = op.ref_index == EditOp::npos
                                   ? py::object(py::none())
                                   : py::object(py::int_(op.ref_index));
          py::object hyp_idx = op.hyp_index == EditOp::npos
                                   ? py::object(py::none())
                                   : py::object(py::int_(op.hyp_index));
          ops.push_back(py::make_tuple(kind, ref_idx, hyp_idx));
        }
        return py::make_tuple(ops, a.cost);
      },
      py::arg("ref"), py::arg("hyp"), py::arg("level") = "word");

  m.def("parse_biasing_tags", &parse_biasing_tags, py::arg("text"));

  m.def(
      "standard_reward",
      [](const std::string& ref, const std::string& hyp, const std::string& level) {
        return standard_reward(parse_biasing_tags(ref), hyp,
                               level_from_string(level));
      },
      py::arg("ref"), py::arg("hyp"), py::arg("level") = "char");

  m.def(
      "biasing_reward",
      [](const std::string& ref, const std::string& hyp, double lambda,
         const std::string& level, bool biasing_format) {
        RewardConfig cfg{lambda, level_from_string(level), biasing_format};
        return biasing_reward(parse_biasing_tags(ref), hyp, cfg);
      },
      py::arg("ref"), py::arg("hyp"), py::arg("lambda_") = 5.0,
      py::arg("level") = "char", py::arg("biasing_format") = true);

  m.def("compute_advantages", &compute_advantages, py::arg("rewards"),
        py::arg("std_floor") = 1e-8);

  m.def(
      "score_pairs",
      [](const std::vector<std::pair<std::string, std::string>>& pairs,
         const std::vector<std::vector<std::string>>& lists) {
        std::vector<std::pair<TaggedTranscript, std::string>> parsed;
        std::vector<std::set<std::string>> sets;
        for (size_t i = 0; i < pairs.size(); ++i) {
          parsed.emplace_back(parse_biasing_tags(pairs[i].first),
                              pairs[i].second);
        }
        for (const auto& list : lists) {
          std::set<std::string> s;
          for (const std::string& w : list) s.insert(normalize_text(w));
          sets.push_back(std::move(s));
        }
        return score_corpus(parsed, sets);
      },
      py::arg("pairs"), py::arg("lists"),
      "Score (tagged reference, hypothesis) pairs against per-utterance "
      "biasing lists.");

  m.def(
      "train_toy",
      [](uint64_t seed, size_t steps, double lr, double lambda,
         const std::string& level, bool biasing_format, bool reference_aware,
         double epsilon, size_t group_size, double temperature) {
        SyntheticTask task = make_synthetic_task(seed);
        RewardConfig reward_cfg{lambda, level_from_string(level), biasing_format};
        GrpoConfig grpo_cfg;
        grpo_cfg.epsilon = epsilon;
        grpo_cfg.group_size = group_size;
        grpo_cfg.reference_aware = reference_aware;
        TrainOptions opts;
        opts.temperature = temperature;
        TrainResult r = train_rlbr(task, reward_cfg, grpo_cfg, steps, lr, opts);
        return py::make_tuple(r.initial_report, r.final_report);
      },
      py::arg("seed") = 0, py::arg("steps") = 200, py::arg("lr") = 2.0,
      py::arg("lambda_") = 5.0, py::arg("level") = "char",
      py::arg("biasing_format") = true, py::arg("reference_aware") = true,
      py::arg("epsilon") = 0.28, py::arg("group_size") = 8,
      py::arg("temperature") = 1.2,
      "Run the toy RLBR experiment; returns (initial, final) metric reports.");
}
