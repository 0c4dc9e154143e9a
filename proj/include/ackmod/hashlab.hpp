#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

#include "ackmod/ackermann.hpp"
#include "ackmod/modulus.hpp"

namespace ackmod {

inline constexpr uint32_t kDefaultHashLevelCap = 6;

/// Auxiliary map h(x) = ((a*x + b) / d) mod c. The product a*x + b wraps
/// mod 2^64; d >= 1 and c >= 1. c = UINT64_MAX acts as "no reduction" for
/// any value a divided input can reach.
struct HMap {
  uint64_t a = 1;
  uint64_t b = 0;
  uint64_t d = 1;
  uint64_t c = UINT64_MAX;

  uint64_t operator()(uint64_t x) const { return ((a * x + b) / d) % c; }
};

enum class HashKind { kSingle, kDual, kIterated };

/// Declarative configuration of a depth-dependent construction:
///   single:    H(x) = A_N(h1(x), h2(x))
///   dual:      H(x) = A_N(h1(x), h2(x)) XOR A_N(h3(x), h4(x))   (mod N)
///   iterated:  H^(t)(x)
/// h1 (and h3) select the hierarchy level; outputs above level_cap clamp.
struct HashSpec {
  Modulus modulus = Modulus::of(2);
  HashKind kind = HashKind::kSingle;
  HMap h1, h2, h3, h4;
  uint64_t iterations = 1;  // iterated kind
  uint32_t level_cap = kDefaultHashLevelCap;
};

void validate(const HashSpec& spec);

/// Evaluates a HashSpec. Owns the level tables (via an Evaluator); safe for
/// concurrent evaluation once constructed. Counts which hierarchy levels were
/// actually evaluated and how often clamping fired.
class Hasher {
 public:
  explicit Hasher(HashSpec spec);

  /// Dispatch on spec.kind.
  uint64_t operator()(uint64_t x) const;

  /// H(x) = A_N(h1(x), h2(x)) regardless of kind.
  uint64_t hierarchical(uint64_t x) const;
  /// Both branches XORed; reduced mod N when N is not a power of two.
  uint64_t dual(uint64_t x) const;
  /// t-fold composition; t = 0 is x mod N.
  uint64_t iterated(uint64_t x, uint64_t t) const;

  const HashSpec& spec() const { return spec_; }

  /// Evaluations seen per hierarchy level since construction.
  std::vector<uint64_t> level_use_counts() const;
  /// Levels with at least one evaluation.
  uint32_t distinct_levels_used() const;
  uint64_t clamp_count() const { return clamped_.load(std::memory_order_relaxed); }

 private:
  uint32_t clamp_level(uint64_t raw) const;
  uint64_t branch(const HMap& level_map, const HMap& arg_map, uint64_t x) const;

  HashSpec spec_;
  Evaluator evaluator_;
  mutable std::array<std::atomic<uint64_t>, kMaxLevelCap + 1> level_hits_{};
  mutable std::atomic<uint64_t> clamped_{0};
};

}  // namespace ackmod
