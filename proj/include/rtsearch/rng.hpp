#pragma once

#include <cstdint>
#include <random>

namespace rtsearch {

// mt19937_64 with hand-rolled draw helpers. The standard pins down the
// engine's output sequence but not the distributions, so we implement the
// mappings ourselves to keep seeded results identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  // uniform double in [0, 1) with 53 random bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // unbiased integer in [0, n) via rejection
  std::uint64_t bounded(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  bool chance(double p) { return uniform() < p; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace rtsearch
