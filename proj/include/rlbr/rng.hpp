#ifndef RLBR_RNG_HPP_
#define RLBR_RNG_HPP_

#include <cstdint>
#include <string_view>
#include <vector>

namespace rlbr {

/// Small deterministic generator (splitmix64). Used everywhere instead of
/// <random> distributions so outputs are identical across platforms and
/// standard-library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, bound).
  uint64_t next_below(uint64_t bound) {
    uint64_t threshold = -bound % bound;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform double in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Derives an independent stream keyed by a label (e.g. an utterance id).
  Rng derive(std::string_view label) const {
    uint64_t h = state_ ^ 0x51ED270B8A4F1F5DULL;
    for (char c : label) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001B3ULL;
    }
    return Rng(h);
  }

  Rng derive(uint64_t key) const {
    Rng mixed(state_ ^ (key * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL));
    mixed.next_u64();
    return mixed;
  }

  // Index sampled from unnormalized nonnegative weights.
  size_t categorical(const std::vector<double>& weights);

 private:
  uint64_t state_;
};

}  // namespace rlbr

#endif  // RLBR_RNG_HPP_
