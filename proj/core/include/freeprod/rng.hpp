#pragma once

#include <cstdint>

namespace freeprod {

/// splitmix64 stream. Every sampled quantity in the verify harness draws from
/// an Rng keyed by (seed, sample index), so results do not depend on thread
/// scheduling or parallelism degree.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  static Rng for_sample(std::uint64_t seed, std::uint64_t index) {
    Rng r(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
    r.next();
    return r;
  }

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace freeprod
