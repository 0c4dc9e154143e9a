#pragma once

#include <cstdint>
#include <optional>

namespace ackmod {

/// (a * b) mod n without overflow; n may be as large as 2^63.
constexpr uint64_t mulmod(uint64_t a, uint64_t b, uint64_t n) {
  return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % n);
}

/// (a + b) mod n for a, b < n.
constexpr uint64_t addmod(uint64_t a, uint64_t b, uint64_t n) {
  uint64_t s = a + b;  // a, b < n <= 2^63, so no wrap
  return s >= n ? s - n : s;
}

/// (a - b) mod n for a, b < n.
constexpr uint64_t submod(uint64_t a, uint64_t b, uint64_t n) {
  return a >= b ? a - b : a + (n - b);
}

/// base^exp mod n by square-and-multiply. The exponent is 128-bit so that
/// callers may form exp = n64 + small without wraparound checks.
constexpr uint64_t modpow(uint64_t base, unsigned __int128 exp, uint64_t n) {
  uint64_t result = 1 % n;
  uint64_t b = base % n;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, b, n);
    b = mulmod(b, b, n);
    exp >>= 1;
  }
  return result;
}

/// Modular inverse of a mod n, or nullopt when gcd(a, n) != 1.
std::optional<uint64_t> mod_inverse(uint64_t a, uint64_t n);

/// The i-th output of the fixed sampling generator used for sample-mode
/// domains. Stateless: draw(seed, i) is reproducible across runs, platforms
/// and thread schedules. Constants are the usual splitmix64 mix.
constexpr uint64_t splitmix64(uint64_t seed, uint64_t index) {
  uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace ackmod
