#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <vector>

#include "ackmod/funcgraph.hpp"
#include "ackmod/modulus.hpp"

namespace ackmod {

// Feasibility bounds. The literal evaluator is a desk-scale oracle; the
// table builder is memory-bound.
inline constexpr uint64_t kOracleMaxModulus = uint64_t{1} << 12;
inline constexpr uint32_t kOracleMaxLevel = 6;
inline constexpr uint64_t kOracleMaxArg = uint64_t{1} << 16;
inline constexpr uint64_t kMaxTableSize = uint64_t{1} << 26;

/// The full map x -> value at one hierarchy level, for x in Z_N.
/// The value vector is shared so tables can back SelfMaps without copying.
class LevelTable {
 public:
  LevelTable(Modulus modulus, uint32_t level, std::vector<uint64_t> values)
      : modulus_(modulus),
        level_(level),
        values_(std::make_shared<const std::vector<uint64_t>>(std::move(values))) {}

  const Modulus& modulus() const { return modulus_; }
  uint32_t level() const { return level_; }
  const std::vector<uint64_t>& values() const { return *values_; }
  std::shared_ptr<const std::vector<uint64_t>> shared_values() const { return values_; }
  uint64_t operator[](uint64_t x) const { return (*values_)[x]; }
  uint64_t size() const { return values_->size(); }

 private:
  Modulus modulus_;
  uint32_t level_;
  std::shared_ptr<const std::vector<uint64_t>> values_;
};

/// View a level table as the self-map it defines (descriptor "level:m").
SelfMap as_self_map(const LevelTable& table);

/// Literal three-case recursion with every intermediate value reduced mod N,
/// realized with an explicit work stack and a memo keyed on (m, x) for x < N.
/// This is the correctness oracle for everything else; it is deliberately
/// capped to desk scale (N <= 2^12, m <= 6, n <= 2^16).
uint64_t reference_eval(const Modulus& modulus, uint32_t m, uint64_t n);

/// Closed forms for levels 0..3: n+1, n+2, 2n+3, 2^(n+3)-3, all mod N.
/// Valid for every n because these recurrences commute with reduction
/// (a property the tests verify against reference_eval, not an assumption).
uint64_t closed_form_eval(const Modulus& modulus, uint32_t m, uint64_t n);

/// How the values of a level >= 4 table are produced.
enum class TableFill {
  kGraphParallel,  // functional graph of the previous level + O(1) queries
  kOrbitSerial,    // single-threaded orbit walk; schedule reference
};

/// Build the full table for one level. Levels 0..3 come from closed forms;
/// level m >= 4 applies the previous level's map n+1 times to 1, which the
/// graph route answers in amortized constant time per entry.
LevelTable build_level_table(const Modulus& modulus, uint32_t m,
                             uint32_t level_cap = kDefaultLevelCap,
                             TableFill fill = TableFill::kGraphParallel);

/// Caches level tables, functional graphs and orbit cursors for one modulus
/// so that repeated evaluations are cheap. Construction of missing levels is
/// internally synchronized; evaluation is lock-free once a level is built.
class Evaluator {
 public:
  explicit Evaluator(Modulus modulus, uint32_t level_cap = kDefaultLevelCap);

  /// A_N(m, n) for any 64-bit n. Levels 0..3 are table-free; higher levels
  /// reduce n through the tail+cycle structure of the level-(m-1) graph.
  uint64_t eval(uint32_t m, uint64_t n) const;

  /// The full table for level m (built and cached on first use).
  const LevelTable& table(uint32_t m) const;

  /// The functional graph of the level-m map (built and cached on first use).
  std::shared_ptr<const FunctionalGraph> graph(uint32_t m) const;

  const Modulus& modulus() const { return modulus_; }
  uint32_t level_cap() const { return level_cap_; }

 private:
  struct LevelState {
    std::shared_ptr<const LevelTable> table;
    std::shared_ptr<const FunctionalGraph> graph;   // graph of this level's map
    std::shared_ptr<const OrbitCursor> cursor;      // f_{m-1}^t(f_{m-1}(1))
  };

  void ensure_table(uint32_t m) const;
  void ensure_graph(uint32_t m) const;
  void ensure_cursor(uint32_t m) const;

  Modulus modulus_;
  uint32_t level_cap_;
  mutable std::mutex build_mutex_;
  mutable std::array<std::atomic<bool>, kMaxLevelCap + 1> table_ready_{};
  mutable std::array<std::atomic<bool>, kMaxLevelCap + 1> graph_ready_{};
  mutable std::array<std::atomic<bool>, kMaxLevelCap + 1> cursor_ready_{};
  mutable std::vector<LevelState> levels_;
};

/// One-shot convenience wrapper over Evaluator. Equals reference_eval on the
/// oracle's whole domain (an exhaustively tested property).
uint64_t fast_eval(const Modulus& modulus, uint32_t m, uint64_t n,
                   uint32_t level_cap = kDefaultLevelCap);

}  // namespace ackmod
