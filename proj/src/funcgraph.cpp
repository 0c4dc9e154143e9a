#include "ackmod/funcgraph.hpp"

#include <algorithm>

#include "ackmod/errors.hpp"
#include "ackmod/mathutil.hpp"

namespace ackmod {

SelfMap SelfMap::table(Modulus modulus, std::shared_ptr<const std::vector<uint64_t>> values,
                       std::string descriptor) {
  if (!values || values->size() != modulus.value())
    throw InvalidArgumentError("table map: value vector must have exactly N entries");
  for (uint64_t v : *values)
    if (v >= modulus.value())
      throw InvalidArgumentError("table map: entry outside [0, N)");
  SelfMap m(modulus, Kind::kTable, std::move(descriptor));
  m.values_ = std::move(values);
  return m;
}

SelfMap SelfMap::tetration(Modulus modulus) {
  return SelfMap(modulus, Kind::kTetration, "tetration");
}

SelfMap SelfMap::affine(Modulus modulus, uint64_t a, uint64_t b) {
  a %= modulus.value();
  b %= modulus.value();
  SelfMap m(modulus, Kind::kAffine,
            "affine:" + std::to_string(a) + "," + std::to_string(b));
  m.a_ = a;
  m.b_ = b;
  return m;
}

SelfMap SelfMap::shifted_exp(Modulus modulus) {
  return SelfMap(modulus, Kind::kShiftedExp, "shifted3");
}

uint64_t SelfMap::operator()(uint64_t x) const {
  const uint64_t N = modulus_.value();
  switch (kind_) {
    case Kind::kTable:
      return (*values_)[x];
    case Kind::kTetration:
      if (auto k = modulus_.pow2_exponent()) return x >= *k ? 0 : uint64_t{1} << x;
      return modpow(2, x, N);
    case Kind::kAffine:
      return addmod(mulmod(a_, x, N), b_, N);
    case Kind::kShiftedExp:
      return submod(modpow(2, static_cast<unsigned __int128>(x) + 3, N), 3 % N, N);
  }
  return 0;  // unreachable
}

FunctionalGraph build_graph(const SelfMap& map) {
  const uint64_t N = map.modulus().value();
  if (N > kMaxGraphSize)
    throw InfeasibleSizeError("functional graph would exceed the memory bound (N > 2^26)");

  FunctionalGraph g;
  g.modulus_ = map.modulus();
  g.descriptor_ = map.descriptor();
  g.next_.resize(N);
  const int64_t n_signed = static_cast<int64_t>(N);
#pragma omp parallel for schedule(static)
  for (int64_t x = 0; x < n_signed; ++x)
    g.next_[static_cast<size_t>(x)] = static_cast<uint32_t>(map(static_cast<uint64_t>(x)));

  // Cycle discovery: walk unvisited nodes, marking the current path; hitting
  // the path again closes a new cycle, hitting resolved territory does not.
  enum : uint8_t { kUnvisited = 0, kOnPath = 1, kResolved = 2 };
  std::vector<uint8_t> state(N, kUnvisited);
  std::vector<std::vector<uint32_t>> found;
  std::vector<uint32_t> path;
  for (uint64_t x0 = 0; x0 < N; ++x0) {
    if (state[x0] != kUnvisited) continue;
    path.clear();
    uint32_t x = static_cast<uint32_t>(x0);
    while (state[x] == kUnvisited) {
      state[x] = kOnPath;
      path.push_back(x);
      x = g.next_[x];
    }
    if (state[x] == kOnPath) {
      size_t i = path.size();
      while (path[i - 1] != x) --i;
      found.emplace_back(path.begin() + static_cast<ptrdiff_t>(i - 1), path.end());
    }
    for (uint32_t p : path) state[p] = kResolved;
  }

  // Canonical order: rotate each cycle to start at its smallest node and
  // number cycles by ascending representative.
  for (auto& cyc : found) {
    auto rep = std::min_element(cyc.begin(), cyc.end());
    std::rotate(cyc.begin(), rep, cyc.end());
  }
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  g.tail_length_.assign(N, 0);
  g.cycle_id_.assign(N, 0);
  g.cycle_position_.assign(N, FunctionalGraph::kNoPosition);
  g.entry_position_.assign(N, 0);
  std::vector<uint8_t> assigned(N, 0);
  g.cycles_.reserve(found.size());
  for (uint32_t cid = 0; cid < found.size(); ++cid) {
    const auto& cyc = found[cid];
    CycleInfo info;
    info.representative = cyc.front();
    info.length = static_cast<uint32_t>(cyc.size());
    info.node_offset = static_cast<uint32_t>(g.cycle_nodes_.size());
    g.cycles_.push_back(info);
    for (uint32_t pos = 0; pos < cyc.size(); ++pos) {
      uint32_t node = cyc[pos];
      g.cycle_nodes_.push_back(node);
      g.cycle_id_[node] = cid;
      g.cycle_position_[node] = pos;
      g.entry_position_[node] = pos;
      assigned[node] = 1;
    }
  }

  // Tails: walk to the first assigned node, then unwind the path backwards.
  for (uint64_t x0 = 0; x0 < N; ++x0) {
    if (assigned[x0]) continue;
    path.clear();
    uint32_t x = static_cast<uint32_t>(x0);
    while (!assigned[x]) {
      path.push_back(x);
      x = g.next_[x];
    }
    for (size_t j = path.size(); j-- > 0;) {
      uint32_t node = path[j];
      uint32_t succ = j + 1 < path.size() ? path[j + 1] : x;
      g.tail_length_[node] = g.tail_length_[succ] + 1;
      g.cycle_id_[node] = g.cycle_id_[succ];
      g.entry_position_[node] = g.entry_position_[succ];
      assigned[node] = 1;
    }
  }

  for (uint64_t x = 0; x < N; ++x) ++g.cycles_[g.cycle_id_[x]].component_size;
  return g;
}

uint64_t FunctionalGraph::iterate(uint64_t x, uint64_t t) const {
  if (x >= size()) throw InvalidArgumentError("iterate: start outside [0, N)");
  uint64_t tail = tail_length_[x];
  if (t < tail) {
    uint64_t cur = x;
    for (uint64_t i = 0; i < t; ++i) cur = next_[cur];
    return cur;
  }
  const CycleInfo& c = cycles_[cycle_id_[x]];
  uint64_t r = (t - tail) % c.length;
  uint32_t pos = static_cast<uint32_t>((entry_position_[x] + r) % c.length);
  return cycle_nodes_[c.node_offset + pos];
}

uint64_t FunctionalGraph::max_preperiod() const {
  uint32_t best = 0;
  for (uint32_t t : tail_length_) best = std::max(best, t);
  return best;
}

std::vector<uint64_t> FunctionalGraph::preperiod_histogram() const {
  std::vector<uint64_t> counts(max_preperiod() + 1, 0);
  for (uint32_t t : tail_length_) ++counts[t];
  return counts;
}

OrbitCursor::OrbitCursor(std::shared_ptr<const FunctionalGraph> graph, uint64_t start)
    : graph_(std::move(graph)) {
  if (start >= graph_->size())
    throw InvalidArgumentError("orbit cursor: start outside [0, N)");
  tail_ = graph_->tail_length(start);
  prefix_.reserve(static_cast<size_t>(tail_) + 1);
  uint64_t cur = start;
  for (uint64_t i = 0; i <= tail_; ++i) {
    prefix_.push_back(cur);
    cur = graph_->next(cur);
  }
  cycle_id_ = graph_->cycle_id(start);
  entry_position_ = graph_->entry_position_[start];
}

OrbitSummary orbit_summary(const SelfMap& map, uint64_t start, uint64_t cycle_member_cap) {
  const uint64_t N = map.modulus().value();
  if (start >= N) throw InvalidArgumentError("orbit_summary: start outside [0, N)");

  // Brent's search: period first, then the tail.
  uint64_t power = 1, period = 1;
  uint64_t tortoise = start;
  uint64_t hare = map(start);
  while (tortoise != hare) {
    if (power == period) {
      tortoise = hare;
      power *= 2;
      period = 0;
    }
    hare = map(hare);
    ++period;
  }
  tortoise = start;
  hare = start;
  for (uint64_t i = 0; i < period; ++i) hare = map(hare);
  uint64_t preperiod = 0;
  while (tortoise != hare) {
    tortoise = map(tortoise);
    hare = map(hare);
    ++preperiod;
  }

  OrbitSummary s;
  s.start = start;
  s.preperiod = preperiod;
  s.period = period;
  uint64_t keep = std::min(period, cycle_member_cap);
  s.cycle_truncated = keep < period;
  uint64_t node = tortoise;  // first cycle node on the orbit
  s.cycle_members.reserve(static_cast<size_t>(keep));
  for (uint64_t i = 0; i < keep; ++i) {
    s.cycle_members.push_back(node);
    node = map(node);
  }
  return s;
}

TetrationReport tetration_check(uint32_t k) {
  if (k < 1) throw InvalidArgumentError("tetration_check: k must be at least 1");
  if (k > 26) throw InfeasibleSizeError("tetration_check: k above feasibility bound (26)");

  Modulus modulus = Modulus::of(uint64_t{1} << k);
  FunctionalGraph graph = build_graph(SelfMap::tetration(modulus));

  TetrationReport r;
  r.k = k;
  r.modulus = modulus.value();
  const CycleInfo& zero_cycle = graph.cycles()[graph.cycle_id(0)];
  r.measured_cycle_length = zero_cycle.length;
  r.cycle_nodes.assign(graph.cycle_nodes().begin() + zero_cycle.node_offset,
                       graph.cycle_nodes().begin() + zero_cycle.node_offset +
                           zero_cycle.length);
  r.cycle_count = graph.cycles().size();
  r.max_preperiod = graph.max_preperiod();
  r.single_cycle = r.cycle_count == 1;
  r.claimed_cycle_length = uint64_t{k} + 1;
  r.claimed_max_preperiod = 2;
  r.cycle_length_agrees = r.measured_cycle_length == r.claimed_cycle_length;
  r.preperiod_agrees = r.max_preperiod <= r.claimed_max_preperiod;
  return r;
}

}  // namespace ackmod
