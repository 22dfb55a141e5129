#ifndef RLBR_DATA_HPP_
#define RLBR_DATA_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rlbr/rewards.hpp"

namespace rlbr {

enum class Split { kTrain, kTest };

struct Utterance {
  std::string id;
  std::string reference;
  Split split = Split::kTrain;
};

struct BiasingList {
  std::vector<std::string> positives;    // rare reference words, first-occurrence order
  std::vector<std::string> distractors;  // N sampled non-reference words
  uint64_t seed = 0;
};

// Words of the training split outside the `common_top_k` most frequent
// (frequency ties broken lexicographically).
std::set<std::string> build_rare_vocab(const std::vector<Utterance>& corpus,
                                       size_t common_top_k);

// Positives plus N distractors sampled without replacement from the pool
// minus the reference words, under an RNG stream derived from
// (seed, utterance id). Throws std::runtime_error naming the shortfall
// when the pool is too small.
BiasingList build_biasing_list(const Utterance& utt,
                               const std::set<std::string>& rare_vocab,
                               const std::set<std::string>& distractor_pool,
                               size_t n_distractors, uint64_t seed);

// The contextual prompt with every biasing word wrapped in `*` tags.
// Positives and distractors are interleaved by a seeded shuffle.
std::string render_prompt(const BiasingList& list);

// Context-augmented training pair: the prompt plus the reference with its
// sampled positives tagged.
std::pair<std::string, TaggedTranscript> augment_training_pair(
    const Utterance& utt, const std::set<std::string>& rare_vocab,
    const std::set<std::string>& global_vocab, size_t max_positives,
    size_t num_negatives, uint64_t seed);

// JSON-lines file formats: corpus {"id","text","split"}, hypotheses
// {"id","hyp"}, biasing lists {"id","words":[...]}. Malformed lines throw
// std::runtime_error with the 1-based line number.
std::vector<Utterance> read_corpus_jsonl(const std::string& path);
std::map<std::string, std::string> read_hyps_jsonl(const std::string& path);
std::map<std::string, std::vector<std::string>> read_lists_jsonl(
    const std::string& path);

}  // namespace rlbr

#endif  // RLBR_DATA_HPP_
