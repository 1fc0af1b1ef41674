#pragma once

#include <cstdint>
#include <random>

namespace tfv {

/// Deterministic uniform sampler. std::uniform_real_distribution is
/// implementation-defined, so the engine output is mapped to [0,1)
/// explicitly; sequences are identical across platforms for a fixed seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace tfv
