#include "placer/rng.hpp"

#include <cmath>

namespace placer::rng {

double normal(Engine& e, double mean, double stddev) {
  // Basic-form Box-Muller using the cosine branch only, so exactly two
  // engine draws per value regardless of outcome.
  double u1 = unit_real(e);
  double u2 = unit_real(e);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
  return mean + stddev * z;
}

}  // namespace placer::rng
