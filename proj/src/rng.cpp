#include "rlbr/rng.hpp"

#include <stdexcept>

namespace rlbr {

size_t Rng::categorical(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) {
    throw std::invalid_argument("categorical: weights must sum to > 0");
  }
  double u = next_double() * total;
  double acc = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;  // rounding fallthrough
}

}  // namespace rlbr
