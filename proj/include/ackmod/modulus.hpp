#pragma once

#include <cstdint>
#include <optional>

#include "ackmod/errors.hpp"
#include "ackmod/mathutil.hpp"

namespace ackmod {

/// A validated ring size N >= 2, with the exponent k cached when N = 2^k.
/// Residue arithmetic helpers are safe for N up to 2^63 (128-bit products).
class Modulus {
 public:
  static constexpr uint64_t kMaxValue = uint64_t{1} << 63;

  static Modulus of(uint64_t n) {
    if (n < 2) throw InvalidArgumentError("modulus must be at least 2");
    if (n > kMaxValue) throw InvalidArgumentError("modulus must be at most 2^63");
    return Modulus(n);
  }

  uint64_t value() const { return n_; }

  /// k with N = 2^k, or nullopt when N is not a power of two.
  std::optional<uint32_t> pow2_exponent() const {
    if (!is_pow2()) return std::nullopt;
    return k_;
  }

  bool is_pow2() const { return (n_ & (n_ - 1)) == 0; }

  uint64_t reduce(uint64_t x) const { return x % n_; }
  uint64_t add(uint64_t a, uint64_t b) const { return addmod(a, b, n_); }
  uint64_t sub(uint64_t a, uint64_t b) const { return submod(a, b, n_); }
  uint64_t mul(uint64_t a, uint64_t b) const { return mulmod(a, b, n_); }
  uint64_t pow(uint64_t base, unsigned __int128 exp) const { return modpow(base, exp, n_); }

  friend bool operator==(const Modulus& a, const Modulus& b) { return a.n_ == b.n_; }
  friend bool operator!=(const Modulus& a, const Modulus& b) { return a.n_ != b.n_; }

 private:
  explicit Modulus(uint64_t n) : n_(n) {
    uint32_t k = 0;
    while ((uint64_t{1} << k) < n_) ++k;
    k_ = k;  // meaningful only when is_pow2()
  }

  uint64_t n_;
  uint32_t k_;
};

/// Hierarchy level (recursion depth). Levels cost O(N) memory each once
/// tables are involved, so operations take an explicit cap.
inline constexpr uint32_t kDefaultLevelCap = 8;
inline constexpr uint32_t kMaxLevelCap = 24;

inline void check_level(uint32_t m, uint32_t level_cap) {
  if (level_cap > kMaxLevelCap)
    throw InvalidArgumentError("level cap exceeds supported maximum");
  if (m > level_cap) throw InvalidArgumentError("level exceeds configured cap");
}

}  // namespace ackmod
