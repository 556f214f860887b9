#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace rm2mp {

// Register and metabolite quantities live in the naturals. We represent them
// as uint64 with checked arithmetic: an operation that would leave the
// representable range raises OverflowError instead of wrapping.
using Nat = std::uint64_t;

class OverflowError : public std::runtime_error {
 public:
  explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

inline Nat nat_add(Nat a, Nat b) {
  Nat r = 0;
  if (__builtin_add_overflow(a, b, &r)) {
    throw OverflowError("natural addition overflow: " + std::to_string(a) +
                        " + " + std::to_string(b));
  }
  return r;
}

inline Nat nat_mul(Nat a, Nat b) {
  Nat r = 0;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw OverflowError("natural multiplication overflow: " +
                        std::to_string(a) + " * " + std::to_string(b));
  }
  return r;
}

// Natural subtraction (monus): max(a - b, 0).
inline Nat monus(Nat a, Nat b) { return a > b ? a - b : 0; }

}  // namespace rm2mp
