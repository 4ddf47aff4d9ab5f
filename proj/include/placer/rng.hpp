#pragma once

#include <cstdint>
#include <random>

namespace placer::rng {

// All random draws go through these helpers instead of std distributions,
// whose output is implementation-defined. mt19937_64 itself is fully
// specified, so every draw here is reproducible across platforms.

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

// Independent stream per (seed, stream) pair, e.g. one per simulation tick.
inline Engine make_stream(std::uint64_t seed, std::uint64_t stream) {
  Engine e(seed);
  e.discard(2);
  std::uint64_t mix = e() ^ (stream * 0x9E3779B97F4A7C15ull);
  return Engine(mix);
}

// Uniform integer in [0, n), rejection-sampled to avoid modulo bias.
inline std::uint64_t bounded(Engine& e, std::uint64_t n) {
  if (n == 0) return 0;
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = e();
  } while (x >= limit);
  return x % n;
}

inline std::int64_t uniform_int(Engine& e, std::int64_t lo, std::int64_t hi) {
  return lo + static_cast<std::int64_t>(bounded(e, static_cast<std::uint64_t>(hi - lo + 1)));
}

// Uniform in [0, 1) with 53 random bits.
inline double unit_real(Engine& e) {
  return static_cast<double>(e() >> 11) * 0x1.0p-53;
}

inline double uniform_real(Engine& e, double lo, double hi) {
  return lo + (hi - lo) * unit_real(e);
}

inline bool bernoulli(Engine& e, double p) { return unit_real(e) < p; }

// Box-Muller; one value per call, deterministic draw order.
double normal(Engine& e, double mean, double stddev);

}  // namespace placer::rng
