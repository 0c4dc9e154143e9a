#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ackmod/modulus.hpp"

namespace ackmod {

/// Largest domain for which dense per-node structures are built.
inline constexpr uint64_t kMaxGraphSize = uint64_t{1} << 26;

/// A self-map of Z_N, evaluated pointwise. Table-backed maps share their
/// value vector; formula-backed maps evaluate on the fly.
class SelfMap {
 public:
  enum class Kind { kTable, kTetration, kAffine, kShiftedExp };

  /// Arbitrary table-backed map; values[x] must lie in [0, N).
  static SelfMap table(Modulus modulus, std::shared_ptr<const std::vector<uint64_t>> values,
                       std::string descriptor = "table");
  /// x -> 2^x mod N.
  static SelfMap tetration(Modulus modulus);
  /// x -> (a*x + b) mod N.
  static SelfMap affine(Modulus modulus, uint64_t a, uint64_t b);
  /// x -> (2^(x+3) - 3) mod N, the exponential step map.
  static SelfMap shifted_exp(Modulus modulus);

  /// Evaluate at x < N.
  uint64_t operator()(uint64_t x) const;

  const Modulus& modulus() const { return modulus_; }
  Kind kind() const { return kind_; }
  const std::string& descriptor() const { return descriptor_; }

 private:
  SelfMap(Modulus modulus, Kind kind, std::string descriptor)
      : modulus_(modulus), kind_(kind), descriptor_(std::move(descriptor)) {}

  Modulus modulus_;
  Kind kind_;
  std::string descriptor_;
  std::shared_ptr<const std::vector<uint64_t>> values_;
  uint64_t a_ = 0, b_ = 0;
};

/// One cycle of the graph. Nodes are stored contiguously in the graph's
/// cycle-node pool, in map order starting from the representative (the
/// smallest node on the cycle).
struct CycleInfo {
  uint32_t representative = 0;
  uint32_t length = 0;
  uint64_t component_size = 0;  // nodes whose orbit drains into this cycle
  uint32_t node_offset = 0;     // index into cycle_nodes()
};

/// Tail/cycle decomposition of a self-map on Z_N. Immutable once built;
/// queries are safe to run concurrently.
class FunctionalGraph {
 public:
  static constexpr uint32_t kNoPosition = UINT32_MAX;

  const Modulus& modulus() const { return modulus_; }
  const std::string& map_descriptor() const { return descriptor_; }
  uint64_t size() const { return next_.size(); }

  /// Successor of x under the map.
  uint32_t next(uint64_t x) const { return next_[x]; }
  /// Steps from x to its first cycle node (0 for cycle nodes).
  uint32_t tail_length(uint64_t x) const { return tail_length_[x]; }
  /// Index of the cycle x eventually reaches.
  uint32_t cycle_id(uint64_t x) const { return cycle_id_[x]; }
  /// Position of x on its cycle, counted from the representative;
  /// kNoPosition for tail nodes.
  uint32_t cycle_position(uint64_t x) const { return cycle_position_[x]; }
  bool on_cycle(uint64_t x) const { return tail_length_[x] == 0; }

  const std::vector<CycleInfo>& cycles() const { return cycles_; }
  const std::vector<uint32_t>& cycle_nodes() const { return cycle_nodes_; }

  /// f^t(x) for any 64-bit t. Costs O(min(t, tail_length(x))) map steps
  /// plus O(1) cycle arithmetic.
  uint64_t iterate(uint64_t x, uint64_t t) const;

  uint64_t max_preperiod() const;
  /// counts[p] = number of nodes with tail length p.
  std::vector<uint64_t> preperiod_histogram() const;

 private:
  friend FunctionalGraph build_graph(const SelfMap& map);
  friend class OrbitCursor;

  Modulus modulus_ = Modulus::of(2);
  std::string descriptor_;
  std::vector<uint32_t> next_;
  std::vector<uint32_t> tail_length_;
  std::vector<uint32_t> cycle_id_;
  std::vector<uint32_t> cycle_position_;
  std::vector<uint32_t> entry_position_;  // cycle position first reached from x
  std::vector<uint32_t> cycle_nodes_;
  std::vector<CycleInfo> cycles_;
};

/// Decompose a self-map into tails and cycles. O(N) time and memory,
/// iterative throughout. Cycles are numbered by ascending representative.
FunctionalGraph build_graph(const SelfMap& map);

/// f^t(x) on a built graph.
inline uint64_t iterate_query(const FunctionalGraph& graph, uint64_t x, uint64_t t) {
  return graph.iterate(x, t);
}

/// Amortized-O(1) access to f^t(start) for a fixed start: the tail prefix is
/// materialized once, cycle offsets answer everything beyond it.
class OrbitCursor {
 public:
  OrbitCursor(std::shared_ptr<const FunctionalGraph> graph, uint64_t start);

  /// f^t(start) in O(1).
  uint64_t at(uint64_t t) const {
    if (t < prefix_.size()) return prefix_[static_cast<size_t>(t)];
    const CycleInfo& c = graph_->cycles()[cycle_id_];
    uint64_t r = (t - tail_) % c.length;
    uint32_t pos = static_cast<uint32_t>((entry_position_ + r) % c.length);
    return graph_->cycle_nodes()[c.node_offset + pos];
  }

 private:
  std::shared_ptr<const FunctionalGraph> graph_;
  std::vector<uint64_t> prefix_;  // f^0(start) .. f^tail(start)
  uint64_t tail_ = 0;
  uint32_t cycle_id_ = 0;
  uint32_t entry_position_ = 0;
};

/// Orbit shape from a single starting point, found by Brent's cycle search
/// on the map itself (no graph build, O(preperiod + period) evaluations).
struct OrbitSummary {
  uint64_t start = 0;
  uint64_t preperiod = 0;       // steps before the first cycle node
  uint64_t period = 1;          // cycle length
  std::vector<uint64_t> cycle_members;  // from the entry node, truncated
  bool cycle_truncated = false;
};

OrbitSummary orbit_summary(const SelfMap& map, uint64_t start, uint64_t cycle_member_cap = 64);

/// Measured dynamics of x -> 2^x mod 2^k next to the claimed stabilization
/// behaviour (cycle length k+1, reached within two steps). The claims are
/// reported and flagged, never asserted.
struct TetrationReport {
  uint32_t k = 1;
  uint64_t modulus = 2;
  uint64_t measured_cycle_length = 0;  // cycle containing 0
  std::vector<uint64_t> cycle_nodes;   // that cycle, from its representative
  uint64_t cycle_count = 0;
  uint64_t max_preperiod = 0;
  bool single_cycle = false;           // every orbit reaches the cycle of 0
  uint64_t claimed_cycle_length = 0;   // k + 1
  uint64_t claimed_max_preperiod = 2;
  bool cycle_length_agrees = false;
  bool preperiod_agrees = false;
};

/// Exhaustively measure the tetration graph for modulus 2^k, k <= 26.
TetrationReport tetration_check(uint32_t k);

}  // namespace ackmod
