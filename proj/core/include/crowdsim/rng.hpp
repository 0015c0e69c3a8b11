#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "crowdsim/vec2.hpp"

namespace crowdsim {

// splitmix64 finalizer; used to decorrelate seeds and derive substream keys.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4bcbfULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random stream. All distributions are sampled by hand from the
// raw engine output so that results are bit-identical across platforms and
// standard-library implementations (std::*_distribution is not portable).
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(mix64(seed)) {}

  // Substream derived from a master seed and a stable key (e.g. a human id).
  RngStream(std::uint64_t master_seed, std::uint64_t key)
      : engine_(mix64(mix64(master_seed) ^ mix64(key + 0x51ed2701ULL))) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [lo, hi] by rejection-free scaling (ranges are tiny here).
  int uniform_int(int lo, int hi) {
    const double u = uniform();
    const int span = hi - lo + 1;
    int v = lo + static_cast<int>(u * span);
    return v > hi ? hi : v;
  }

  // Gaussian with zero mean via Box-Muller; consumes exactly two engine draws.
  double normal(double stddev) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace crowdsim
