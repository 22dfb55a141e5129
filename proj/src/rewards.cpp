#include "rlbr/rewards.hpp"

#include <algorithm>
#include <cctype>

namespace rlbr {

TaggedTranscript parse_biasing_tags(const std::string& text) {
  size_t stars = std::count(text.begin(), text.end(), '*');
  if (stars % 2 != 0) {
    size_t off = text.rfind('*');
    throw ParseError("unbalanced '*' delimiter at offset " + std::to_string(off),
                     off);
  }

  TaggedTranscript out;
  out.raw = text;
  size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    size_t j = i;
    while (j < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    if (j == i) break;
    std::string token = text.substr(i, j - i);
    bool tagged = false;
    if (token.find('*') != std::string::npos) {
      if (token.size() >= 3 && token.front() == '*' && token.back() == '*' &&
          token.find('*', 1) == token.size() - 1) {
        token = token.substr(1, token.size() - 2);
        tagged = true;
      } else {
        throw ParseError(
            "malformed biasing tag at offset " + std::to_string(i), i);
      }
    }
    std::string word = normalize_text(token);
    if (!word.empty()) {
      if (tagged) out.occurrences.push_back({out.words.size(), word});
      out.words.push_back(std::move(word));
    }
    i = j;
  }
  return out;
}

double standard_reward(const TaggedTranscript& ref, const std::string& hyp,
                       Level level) {
  TokenSeq r = to_level(ref.words, level);
  TokenSeq h = to_level(tokenize_words(normalize_text(hyp)), level);
  return -static_cast<double>(levenshtein(r, h));
}

RewardBreakdown biasing_reward(const TaggedTranscript& ref,
                               const std::string& hyp,
                               const RewardConfig& cfg) {
  std::vector<std::string> hyp_words = tokenize_words(normalize_text(hyp));
  RewardBreakdown out;
  out.global_distance = levenshtein(to_level(ref.words, cfg.edit_level),
                                    to_level(hyp_words, cfg.edit_level));
  if (cfg.biasing_format && !ref.occurrences.empty()) {
    out.biasing_distance = biasing_span_distance(ref.words, ref.occurrences,
                                                 hyp_words, cfg.edit_level);
  }
  out.reward = -(static_cast<double>(out.global_distance) +
                 cfg.lambda * static_cast<double>(out.biasing_distance));
  out.reward += 0.0;  // canonicalize -0.0
  return out;
}

std::vector<RewardBreakdown> reward_group(const TaggedTranscript& ref,
                                          const std::vector<std::string>& hyps,
                                          const RewardConfig& cfg) {
  if (hyps.empty()) {
    throw std::invalid_argument("reward_group: empty hypothesis list");
  }
  std::vector<RewardBreakdown> out;
  out.reserve(hyps.size());
  for (size_t i = 0; i < hyps.size(); ++i) {
    try {
      out.push_back(biasing_reward(ref, hyps[i], cfg));
    } catch (const std::exception& e) {
      throw std::runtime_error("hypothesis " + std::to_string(i) + ": " +
                               e.what());
    }
  }
  return out;
}

}  // namespace rlbr
