#pragma once

#include <cstdint>

namespace rm2mp {

// splitmix64. Deterministic across platforms so that failing suite seeds
// reproduce the same programs everywhere (std::uniform_int_distribution is
// implementation-defined and would not).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform-ish value in [0, bound); bound must be > 0. Modulo bias is
  // irrelevant at test-generation scale.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  // Inclusive range [lo, hi].
  std::uint64_t in_range(std::uint64_t lo, std::uint64_t hi) {
    return lo + below(hi - lo + 1);
  }

 private:
  std::uint64_t state_;
};

}  // namespace rm2mp
