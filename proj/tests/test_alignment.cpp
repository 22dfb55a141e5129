#include <doctest.h>

#include "rlbr/alignment.hpp"
#include "rlbr/oracles.hpp"
#include "rlbr/rewards.hpp"
#include "rlbr/rng.hpp"

using namespace rlbr;

namespace {

TokenSeq words(std::vector<std::string> w) {
  return TokenSeq{std::move(w), Level::kWord};
}

TokenSeq chars(const std::string& s) {
  return TokenSeq{oracles::split_chars(s), Level::kChar};
}

std::vector<std::string> random_tokens(Rng& rng, size_t max_len) {
  static const std::vector<std::string> alphabet{"a", "b", "c"};
  std::vector<std::string> out;
  size_t len = rng.next_below(max_len + 1);
  for (size_t i = 0; i < len; ++i) out.push_back(alphabet[rng.next_below(3)]);
  return out;
}

}  // namespace

TEST_CASE("levenshtein basic values") {
  CHECK(levenshtein(words({"the", "cat"}), words({"the", "cat"})) == 0);
  // expected values frozen from the exhaustive oracle
  CHECK(oracles::brute_force_edit_distance(oracles::split_chars("kitten"),
                                           oracles::split_chars("sitting")) == 3);
  CHECK(levenshtein(chars("kitten"), chars("sitting")) == 3);
  CHECK(levenshtein(words({"a", "b", "c"}), words({"a", "x", "c"})) == 1);
  CHECK(levenshtein(words({}), words({"x"})) == 1);
}

TEST_CASE("levenshtein rejects level mismatch") {
  CHECK_THROWS_AS(levenshtein(words({"a"}), chars("a")), std::invalid_argument);
  CHECK_THROWS_AS(align(words({"a"}), chars("a")), std::invalid_argument);
}

TEST_CASE("levenshtein metric properties on random pairs") {
  Rng rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    TokenSeq a = words(random_tokens(rng, 12));
    TokenSeq b = words(random_tokens(rng, 12));
    TokenSeq c = words(random_tokens(rng, 12));
    size_t ab = levenshtein(a, b);
    CHECK(ab == levenshtein(b, a));
    CHECK(levenshtein(a, a) == 0);
    CHECK(levenshtein(a, c) <= ab + levenshtein(b, c));
    CHECK((ab == 0) == (a.tokens == b.tokens));
  }
}

TEST_CASE("levenshtein matches exhaustive oracle, lengths <= 6") {
  Rng rng(7);
  for (int trial = 0; trial < 400; ++trial) {
    std::vector<std::string> a = random_tokens(rng, 6);
    std::vector<std::string> b = random_tokens(rng, 6);
    CHECK(levenshtein(words(a), words(b)) ==
          oracles::brute_force_edit_distance(a, b));
  }
}

TEST_CASE("align examples and tie-breaking") {
  Alignment a = align(words({"a"}), words({"a"}));
  CHECK(a.cost == 0);
  REQUIRE(a.ops.size() == 1);
  CHECK(a.ops[0] == EditOp{EditKind::kMatch, 0, 0});

  Alignment b = align(words({"a", "b"}), words({"b"}));
  CHECK(b.cost == 1);
  REQUIRE(b.ops.size() == 2);
  CHECK(b.ops[0] == EditOp{EditKind::kDelete, 0, EditOp::npos});
  CHECK(b.ops[1] == EditOp{EditKind::kMatch, 1, 0});

  Alignment c = align(words({}), words({"x", "y"}));
  CHECK(c.cost == 2);
  REQUIRE(c.ops.size() == 2);
  CHECK(c.ops[0] == EditOp{EditKind::kInsert, EditOp::npos, 0});
  CHECK(c.ops[1] == EditOp{EditKind::kInsert, EditOp::npos, 1});
}

TEST_CASE("align cost equals levenshtein and indices are consistent") {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    TokenSeq a = words(random_tokens(rng, 12));
    TokenSeq b = words(random_tokens(rng, 12));
    Alignment al = align(a, b);
    CHECK(al.cost == levenshtein(a, b));

    size_t next_ref = 0, next_hyp = 0, non_match = 0;
    for (const EditOp& op : al.ops) {
      if (op.kind != EditKind::kMatch) ++non_match;
      if (op.ref_index != EditOp::npos) {
        CHECK(op.ref_index == next_ref);
        ++next_ref;
      }
      if (op.hyp_index != EditOp::npos) {
        CHECK(op.hyp_index == next_hyp);
        ++next_hyp;
      }
    }
    CHECK(next_ref == a.tokens.size());
    CHECK(next_hyp == b.tokens.size());
    CHECK(non_match == al.cost);
  }
}

TEST_CASE("biasing_span_distance examples") {
  auto run = [](const std::string& tagged, std::vector<std::string> hyp,
                Level level) {
    TaggedTranscript ref = parse_biasing_tags(tagged);
    return biasing_span_distance(ref.words, ref.occurrences, hyp, level);
  };
  CHECK(run("play *floyd* music", {"play", "floyd", "music"}, Level::kChar) == 0);
  CHECK(run("play *floyd* music", {"play", "flood", "music"}, Level::kChar) == 1);
  CHECK(run("*acme* *corp* report", {"report"}, Level::kWord) == 2);
}

TEST_CASE("biasing_span_distance bounds and identity") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> ref_words = random_tokens(rng, 8);
    if (ref_words.empty()) continue;
    std::vector<BiasingOccurrence> occs;
    for (size_t i = 0; i < ref_words.size(); ++i) {
      if (rng.next_below(3) == 0) occs.push_back({i, ref_words[i]});
    }
    std::vector<std::string> hyp = random_tokens(rng, 8);

    // zero against the untagged reference itself
    CHECK(biasing_span_distance(ref_words, occs, ref_words, Level::kChar) == 0);
    CHECK(biasing_span_distance(ref_words, occs, ref_words, Level::kWord) == 0);

    // char-level bound: sum of max(|b|, |span(b)|); spans are single
    // tokens here, each of length <= 1 char over this alphabet
    size_t d = biasing_span_distance(ref_words, occs, hyp, Level::kChar);
    size_t bound = 0;
    for (const auto& occ : occs) bound += std::max<size_t>(occ.word.size(), 1);
    CHECK(d <= bound);
  }
}
