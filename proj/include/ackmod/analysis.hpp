#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ackmod/ackermann.hpp"
#include "ackmod/funcgraph.hpp"
#include "ackmod/modulus.hpp"

namespace ackmod {

/// Largest domain a statistics pass will enumerate.
inline constexpr uint64_t kMaxDomainSize = uint64_t{1} << 26;

/// The inputs an experiment runs over: all of Z_N, an inclusive range, or a
/// deterministic sample stream (splitmix64, see mathutil.hpp).
struct DomainSpec {
  enum class Mode { kFull, kRange, kSample };

  Mode mode = Mode::kFull;
  uint64_t lo = 0, hi = 0;  // range mode, inclusive
  uint64_t count = 0;       // sample mode
  uint64_t seed = 0;        // sample mode

  static DomainSpec full() { return {}; }
  static DomainSpec range(uint64_t lo, uint64_t hi);
  static DomainSpec sample(uint64_t count, uint64_t seed);

  /// Number of inputs; throws InfeasibleSizeError above kMaxDomainSize.
  uint64_t size(const Modulus& modulus) const;
  /// i-th input value.
  uint64_t input(uint64_t i) const {
    switch (mode) {
      case Mode::kFull: return i;
      case Mode::kRange: return lo + i;
      default: return splitmix64(seed, i);
    }
  }
};

/// Maps evaluated by the statistics passes. Must accept any 64-bit input and
/// return a residue; adapters below define how each source extends beyond Z_N.
using EvalFn = std::function<uint64_t(uint64_t)>;

/// True hierarchy semantics for level m: large arguments follow the orbit.
EvalFn evaluator_fn(const Evaluator& evaluator, uint32_t m);
/// Self-map semantics: inputs are folded into Z_N first.
EvalFn self_map_fn(const SelfMap& map);
/// Table treated as a self-map of Z_N (inputs folded).
EvalFn table_fn(const LevelTable& table);

enum class Neighbor { kXor1, kSucc, kBit };

/// Per-neighbor avalanche coefficients. per_bit[j] flips input bit j.
struct AvalancheSet {
  double xor1 = 0.0;
  double succ = 0.0;
  std::vector<double> per_bit;
};

/// Exact histogram plus deviation-from-uniform metrics for one experiment.
struct StatsReport {
  uint64_t modulus = 0;
  std::string source;  // "level:3", "tetration", ...
  DomainSpec domain;
  uint64_t sample_count = 0;
  std::vector<std::pair<uint64_t, uint64_t>> histogram;  // (value, count), by value
  double dev_max_abs = 0.0;   // max_v |count(v) - S/N|
  double dev_max_norm = 0.0;  // dev_max_abs * N / S
  double chi_square = 0.0;    // sum_v (count(v) - S/N)^2 / (S/N)
  std::optional<AvalancheSet> avalanche;

  uint64_t count_of(uint64_t value) const;
};

/// Exact output histogram and uniformity metrics of f over the domain.
/// Counting is exact; the result is independent of thread schedule.
StatsReport output_distribution(const EvalFn& f, const Modulus& modulus,
                                const DomainSpec& domain, std::string source = "map");

/// Table overload; full/range domains must lie inside Z_N.
StatsReport output_distribution(const LevelTable& table, const DomainSpec& domain);

/// Mean fraction of output bits flipped by the neighbor perturbation,
/// alpha = E[ wt(f(x) ^ f(x')) / k ]. Requires N = 2^k. The succ neighbor is
/// x+1 on the unreduced input (no wraparound), matching the convention under
/// which the reproduced statistics are exact.
double avalanche(const EvalFn& f, const Modulus& modulus, Neighbor neighbor,
                 const DomainSpec& domain, uint32_t bit = 0);

/// xor1, succ and all k single-bit coefficients in one report.
AvalancheSet avalanche_all(const EvalFn& f, const Modulus& modulus, const DomainSpec& domain);

/// b[n] = (a * a_table[n] + b) mod N for every n, if such a pair exists.
struct AffineRelation {
  uint64_t a = 0;
  uint64_t b = 0;
};

/// Detect an exact affine relation between two tables over the same modulus.
/// The candidate (a, b) is solved from index pairs and then verified on every
/// entry; none is returned unless the relation holds globally. For tables
/// that are both constant the canonical representative (1, delta) of the
/// solution family is returned.
std::optional<AffineRelation> affine_relation(const LevelTable& a_table,
                                              const LevelTable& b_table);

/// Pearson correlation (undefined marker on zero variance) and normalized
/// mutual information of two tables read as paired sequences.
struct CorrelationReport {
  std::optional<double> pearson;
  double nmi = 0.0;
};

CorrelationReport correlate_levels(const LevelTable& a_table, const LevelTable& b_table);

/// Cycle-structure summary of the level-m map, per level in [m_lo, m_hi].
struct LevelCycleStats {
  uint32_t level = 0;
  uint64_t cycle_count = 0;
  uint64_t min_cycle_length = 0;
  uint64_t max_cycle_length = 0;
  double mean_cycle_length = 0.0;
  uint64_t max_preperiod = 0;
};

std::vector<LevelCycleStats> cycle_stats_by_level(const Modulus& modulus, uint32_t m_lo,
                                                  uint32_t m_hi,
                                                  uint32_t level_cap = kDefaultLevelCap);

// Schedule-reference kernels. The public entry points above use the parallel
// versions; these single-threaded twins exist so tests and the benchmark can
// check bit-identical agreement and compare throughput.
namespace serial {
std::vector<uint64_t> histogram_counts(const EvalFn& f, const Modulus& modulus,
                                       const DomainSpec& domain);
uint64_t avalanche_bit_sum(const EvalFn& f, const Modulus& modulus, Neighbor neighbor,
                           const DomainSpec& domain, uint32_t bit);
}  // namespace serial

namespace parallel {
std::vector<uint64_t> histogram_counts(const EvalFn& f, const Modulus& modulus,
                                       const DomainSpec& domain);
uint64_t avalanche_bit_sum(const EvalFn& f, const Modulus& modulus, Neighbor neighbor,
                           const DomainSpec& domain, uint32_t bit);
}  // namespace parallel

}  // namespace ackmod
