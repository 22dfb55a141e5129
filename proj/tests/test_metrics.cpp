#include <doctest.h>

#include "rlbr/metrics.hpp"
#include "rlbr/rng.hpp"

using namespace rlbr;

namespace {

std::pair<TaggedTranscript, std::string> pair_of(const std::string& ref,
                                                 const std::string& hyp) {
  return {parse_biasing_tags(ref), hyp};
}

}  // namespace

TEST_CASE("attribute_errors examples") {
  {
    TaggedTranscript ref = parse_biasing_tags("a b c");
    std::vector<std::string> hyp{"a", "b", "c"};
    Alignment al = align(TokenSeq{ref.words, Level::kWord},
                         TokenSeq{hyp, Level::kWord});
    ErrorCounts c = attribute_errors(al, ref.words, hyp, {"a"});
    CHECK(c.biasing == 0);
    CHECK(c.unbiased == 0);
  }
  {
    TaggedTranscript ref = parse_biasing_tags("*acme* sells widgets");
    std::vector<std::string> hyp{"akme", "sells", "widget"};
    Alignment al = align(TokenSeq{ref.words, Level::kWord},
                         TokenSeq{hyp, Level::kWord});
    ErrorCounts c = attribute_errors(al, ref.words, hyp, {"acme"});
    CHECK(c.biasing == 1);
    CHECK(c.unbiased == 1);
  }
  {
    // insertion attributed by the inserted hypothesis word
    TaggedTranscript ref = parse_biasing_tags("a b");
    std::vector<std::string> hyp{"a", "b", "c"};
    Alignment al = align(TokenSeq{ref.words, Level::kWord},
                         TokenSeq{hyp, Level::kWord});
    ErrorCounts c = attribute_errors(al, ref.words, hyp, {"a"});
    CHECK(c.biasing == 0);
    CHECK(c.unbiased == 1);
    ErrorCounts c2 = attribute_errors(al, ref.words, hyp, {"c"});
    CHECK(c2.biasing == 1);
    CHECK(c2.unbiased == 0);
  }
}

TEST_CASE("score_corpus hand-counted example") {
  // 10 ref words, 2 biasing; hypothesis has 1 biasing substitution and
  // 1 general deletion
  auto pairs = std::vector<std::pair<TaggedTranscript, std::string>>{
      pair_of("*acme* sells widgets to *corp* every single day on time",
              "akme sells widgets to corp every single day on")};
  std::vector<std::set<std::string>> lists{{"acme", "corp"}};
  MetricsReport r = score_corpus(pairs, lists);
  CHECK(r.total_ref_words == 10);
  CHECK(r.biasing_ref_words == 2);
  CHECK(r.total_errors == 2);
  REQUIRE(r.wer.has_value());
  REQUIRE(r.bwer.has_value());
  REQUIRE(r.uwer.has_value());
  CHECK(*r.wer == doctest::Approx(20.0));
  CHECK(*r.bwer == doctest::Approx(50.0));
  CHECK(*r.uwer == doctest::Approx(12.5));
}

TEST_CASE("score_corpus degenerate cases") {
  auto perfect = std::vector<std::pair<TaggedTranscript, std::string>>{
      pair_of("a b c", "a b c"), pair_of("d e", "d e")};
  std::vector<std::set<std::string>> lists{{"a"}, {"d"}};
  MetricsReport r = score_corpus(perfect, lists);
  CHECK(*r.wer == 0.0);
  CHECK(*r.bwer == 0.0);
  CHECK(*r.uwer == 0.0);

  // zero biasing words: bwer absent, wer == uwer
  auto plain = std::vector<std::pair<TaggedTranscript, std::string>>{
      pair_of("a b c", "a x c")};
  MetricsReport r2 = score_corpus(plain, {{}});
  CHECK_FALSE(r2.bwer.has_value());
  CHECK(*r2.wer == *r2.uwer);

  CHECK_THROWS_AS(score_corpus(plain, {}), std::invalid_argument);
}

TEST_CASE("decomposition identity on random corruptions") {
  static const std::vector<std::string> vocab{"alpha", "beta",  "gamma",
                                              "delta", "omega", "zeta"};
  Rng rng(606);
  size_t pooled_total = 0, pooled_bias = 0, pooled_unbias = 0;
  size_t pooled_ref = 0, pooled_bias_ref = 0;
  for (int trial = 0; trial < 500; ++trial) {
    size_t n = 3 + rng.next_below(8);
    std::vector<std::string> ref_words;
    std::set<std::string> list;
    std::string tagged;
    for (size_t i = 0; i < n; ++i) {
      const std::string& w = vocab[rng.next_below(vocab.size())];
      ref_words.push_back(w);
      bool bias = rng.next_below(3) == 0;
      if (bias) list.insert(w);
      if (i > 0) tagged.push_back(' ');
      tagged += bias ? "*" + w + "*" : w;
    }
    // corrupt: random substitutions, deletions, insertions
    std::vector<std::string> hyp;
    for (const std::string& w : ref_words) {
      uint64_t roll = rng.next_below(10);
      if (roll < 6) hyp.push_back(w);
      else if (roll < 8) hyp.push_back(vocab[rng.next_below(vocab.size())]);
      // else delete
      if (rng.next_below(10) == 0) {
        hyp.push_back(vocab[rng.next_below(vocab.size())]);
      }
    }
    std::string hyp_text;
    for (size_t i = 0; i < hyp.size(); ++i) {
      if (i > 0) hyp_text.push_back(' ');
      hyp_text += hyp[i];
    }
    // list membership decides biasing counts; make the list reflect every
    // tagged surface form
    TaggedTranscript ref = parse_biasing_tags(tagged);
    Alignment al = align(TokenSeq{ref.words, Level::kWord},
                         TokenSeq{hyp, Level::kWord});
    ErrorCounts c = attribute_errors(al, ref.words, hyp, list);
    CHECK(c.biasing + c.unbiased == al.cost);  // per-utterance identity
    pooled_bias += c.biasing;
    pooled_unbias += c.unbiased;
    pooled_total += al.cost;
    pooled_ref += ref.words.size();
    for (const std::string& w : ref.words) {
      if (list.count(w) > 0) ++pooled_bias_ref;
    }
  }
  MetricsReport pooled =
      finalize_report(pooled_ref, pooled_bias_ref, pooled_bias, pooled_unbias);
  CHECK(pooled.total_errors == pooled_total);
  CHECK(pooled.total_errors == pooled.biasing_errors + pooled.unbiased_errors);
}

TEST_CASE("metrics invariant to list order, duplicates, and distractors") {
  auto pairs = std::vector<std::pair<TaggedTranscript, std::string>>{
      pair_of("*acme* sells widgets", "akme sells widget")};
  MetricsReport base = score_corpus(pairs, {{"acme"}});
  MetricsReport dup = score_corpus(pairs, {{"acme", "acme"}});
  MetricsReport extra = score_corpus(pairs, {{"acme", "zzz", "qqq"}});
  CHECK(base.biasing_errors == dup.biasing_errors);
  CHECK(base.biasing_errors == extra.biasing_errors);
  CHECK(*base.wer == *extra.wer);
  CHECK(*base.bwer == *extra.bwer);
  CHECK(*base.uwer == *extra.uwer);
}

TEST_CASE("reference against itself is error-free for any list") {
  auto pairs = std::vector<std::pair<TaggedTranscript, std::string>>{
      pair_of("*acme* sells widgets", "acme sells widgets")};
  MetricsReport r = score_corpus(pairs, {{"acme", "sells", "widgets"}});
  CHECK(r.total_errors == 0);
  CHECK(*r.bwer == 0.0);
}
