#ifndef RLBR_REWARDS_HPP_
#define RLBR_REWARDS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlbr/alignment.hpp"
#include "rlbr/text.hpp"

namespace rlbr {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, size_t offset)
      : std::runtime_error(msg), offset_(offset) {}
  size_t offset() const { return offset_; }

 private:
  size_t offset_;
};

/// Reference text with its `*word*` biasing markers parsed out.
struct TaggedTranscript {
  std::string raw;
  std::vector<std::string> words;  // normalized, tags stripped
  std::vector<BiasingOccurrence> occurrences;
};

struct RewardConfig {
  double lambda = 5.0;
  Level edit_level = Level::kChar;
  bool biasing_format = true;  // when false, tags are ignored and ED_b == 0
};

struct RewardBreakdown {
  size_t global_distance = 0;   // ED(o*, o_i)
  size_t biasing_distance = 0;  // ED_b(o*, o_i)
  double reward = 0.0;          // -(ED + lambda * ED_b)
};

// Parses `*word*` markers. A biasing word is a single whitespace-delimited
// token wrapped in asterisks. Throws ParseError (with the byte offset of
// the offending token) on unbalanced delimiters.
TaggedTranscript parse_biasing_tags(const std::string& text);

// Eq.-style standard reward: -ED(untagged ref, hyp) at the given level.
double standard_reward(const TaggedTranscript& ref, const std::string& hyp,
                       Level level);

RewardBreakdown biasing_reward(const TaggedTranscript& ref,
                               const std::string& hyp,
                               const RewardConfig& cfg);

// Elementwise biasing_reward over a hypothesis group, order-preserving.
// Throws std::invalid_argument on an empty group; per-hypothesis failures
// are rethrown with the hypothesis index in the message.
std::vector<RewardBreakdown> reward_group(const TaggedTranscript& ref,
                                          const std::vector<std::string>& hyps,
                                          const RewardConfig& cfg);

}  // namespace rlbr

#endif  // RLBR_REWARDS_HPP_
