#include "ackmod/ackermann.hpp"

#include <string>

#include "ackmod/errors.hpp"
#include "ackmod/mathutil.hpp"

namespace ackmod {

namespace {

// Work items for the literal evaluator. kEval computes A(m, n) into the
// running result; kMemoize stores the running result under (m, n);
// kEvalFromResult computes A(m, <running result>).
enum class Op : uint8_t { kEval, kMemoize, kEvalFromResult };

struct Task {
  Op op;
  uint32_t m;
  uint64_t n;
};

constexpr uint64_t kUnset = UINT64_MAX;

}  // namespace

uint64_t reference_eval(const Modulus& modulus, uint32_t m, uint64_t n) {
  const uint64_t N = modulus.value();
  if (N > kOracleMaxModulus)
    throw InfeasibleSizeError("reference_eval: modulus above oracle bound, use fast_eval");
  if (m > kOracleMaxLevel)
    throw InfeasibleSizeError("reference_eval: level above oracle bound, use fast_eval");
  if (n > kOracleMaxArg)
    throw InfeasibleSizeError("reference_eval: argument above oracle bound, use fast_eval");

  // memo[m][x] for x < N only; larger arguments are unwound on the stack.
  std::vector<std::vector<uint64_t>> memo(m + 1, std::vector<uint64_t>(N, kUnset));

  uint64_t result = 0;
  std::vector<Task> stack;
  stack.push_back({Op::kEval, m, n});
  while (!stack.empty()) {
    Task t = stack.back();
    stack.pop_back();
    switch (t.op) {
      case Op::kMemoize:
        memo[t.m][t.n] = result;
        continue;
      case Op::kEvalFromResult:
        stack.push_back({Op::kEval, t.m, result});
        continue;
      case Op::kEval:
        break;
    }
    if (t.m == 0) {
      result = (t.n + 1) % N;
      continue;
    }
    if (t.n < N && memo[t.m][t.n] != kUnset) {
      result = memo[t.m][t.n];
      continue;
    }
    if (t.n < N) stack.push_back({Op::kMemoize, t.m, t.n});
    if (t.n == 0) {
      stack.push_back({Op::kEval, t.m - 1, 1});
    } else {
      stack.push_back({Op::kEvalFromResult, t.m - 1, 0});
      stack.push_back({Op::kEval, t.m, t.n - 1});
    }
  }
  return result;
}

uint64_t closed_form_eval(const Modulus& modulus, uint32_t m, uint64_t n) {
  const uint64_t N = modulus.value();
  switch (m) {
    case 0:
      return (n % N + 1) % N;
    case 1:
      return (n % N + 2) % N;
    case 2:
      return (2 * (n % N) + 3) % N;
    case 3: {
      // 2^(n+3) - 3 mod N; 128-bit exponent so n may be any 64-bit value.
      uint64_t p = modpow(2, static_cast<unsigned __int128>(n) + 3, N);
      return submod(p, 3 % N, N);
    }
    default:
      throw InvalidArgumentError("closed_form_eval: no closed form above level 3");
  }
}

SelfMap as_self_map(const LevelTable& table) {
  return SelfMap::table(table.modulus(), table.shared_values(),
                        "level:" + std::to_string(table.level()));
}

namespace {

void check_table_size(const Modulus& modulus) {
  if (modulus.value() > kMaxTableSize)
    throw InfeasibleSizeError("level table would exceed the memory bound (N > 2^26)");
}

std::vector<uint64_t> closed_form_values(const Modulus& modulus, uint32_t m) {
  const uint64_t N = modulus.value();
  std::vector<uint64_t> values(N);
  if (m == 3) {
    // Incremental doubling instead of a modpow per entry.
    uint64_t p = modpow(2, 3, N);
    for (uint64_t n = 0; n < N; ++n) {
      values[n] = submod(p, 3 % N, N);
      p = addmod(p, p, N);
    }
  } else {
    for (uint64_t n = 0; n < N; ++n) values[n] = closed_form_eval(modulus, m, n);
  }
  return values;
}

// Orbit walk of 1 under the previous level: values[n] = f^(n+1)(1).
std::vector<uint64_t> next_level_values_serial(const LevelTable& prev) {
  const uint64_t N = prev.modulus().value();
  std::vector<uint64_t> values(N);
  uint64_t v = prev[1];
  values[0] = v;
  for (uint64_t n = 1; n < N; ++n) {
    v = prev[v];
    values[n] = v;
  }
  return values;
}

// Same values through the functional graph: each entry is an O(1) query.
std::vector<uint64_t> next_level_values_graph(const LevelTable& prev) {
  auto graph = std::make_shared<const FunctionalGraph>(build_graph(as_self_map(prev)));
  OrbitCursor cursor(graph, prev[1]);
  const int64_t N = static_cast<int64_t>(prev.modulus().value());
  std::vector<uint64_t> values(static_cast<size_t>(N));
#pragma omp parallel for schedule(static)
  for (int64_t n = 0; n < N; ++n)
    values[static_cast<size_t>(n)] = cursor.at(static_cast<uint64_t>(n));
  return values;
}

}  // namespace

LevelTable build_level_table(const Modulus& modulus, uint32_t m, uint32_t level_cap,
                             TableFill fill) {
  check_level(m, level_cap);
  check_table_size(modulus);
  if (m <= 3) return LevelTable(modulus, m, closed_form_values(modulus, m));
  LevelTable prev = build_level_table(modulus, m - 1, level_cap, fill);
  std::vector<uint64_t> values = fill == TableFill::kGraphParallel
                                     ? next_level_values_graph(prev)
                                     : next_level_values_serial(prev);
  return LevelTable(modulus, m, std::move(values));
}

Evaluator::Evaluator(Modulus modulus, uint32_t level_cap)
    : modulus_(modulus), level_cap_(level_cap) {
  if (level_cap_ > kMaxLevelCap)
    throw InvalidArgumentError("level cap exceeds supported maximum");
  levels_.resize(level_cap_ + 1);
}

void Evaluator::ensure_table(uint32_t m) const {
  check_level(m, level_cap_);
  if (table_ready_[m].load(std::memory_order_acquire)) return;
  std::lock_guard<std::mutex> lock(build_mutex_);
  for (uint32_t j = 0; j <= m; ++j) {
    if (table_ready_[j].load(std::memory_order_relaxed)) continue;
    if (j <= 3) {
      levels_[j].table = std::make_shared<const LevelTable>(
          build_level_table(modulus_, j, level_cap_));
    } else {
      // Reuse the cached previous level rather than rebuilding the chain.
      auto graph = levels_[j - 1].graph;
      if (!graph) {
        graph = std::make_shared<const FunctionalGraph>(
            build_graph(as_self_map(*levels_[j - 1].table)));
        levels_[j - 1].graph = graph;
        graph_ready_[j - 1].store(true, std::memory_order_release);
      }
      const LevelTable& prev = *levels_[j - 1].table;
      OrbitCursor cursor(graph, prev[1]);
      const int64_t N = static_cast<int64_t>(modulus_.value());
      std::vector<uint64_t> values(static_cast<size_t>(N));
#pragma omp parallel for schedule(static)
      for (int64_t n = 0; n < N; ++n)
        values[static_cast<size_t>(n)] = cursor.at(static_cast<uint64_t>(n));
      levels_[j].table = std::make_shared<const LevelTable>(modulus_, j, std::move(values));
    }
    table_ready_[j].store(true, std::memory_order_release);
  }
}

void Evaluator::ensure_graph(uint32_t m) const {
  ensure_table(m);
  if (graph_ready_[m].load(std::memory_order_acquire)) return;
  std::lock_guard<std::mutex> lock(build_mutex_);
  if (graph_ready_[m].load(std::memory_order_relaxed)) return;
  levels_[m].graph = std::make_shared<const FunctionalGraph>(
      build_graph(as_self_map(*levels_[m].table)));
  graph_ready_[m].store(true, std::memory_order_release);
}

void Evaluator::ensure_cursor(uint32_t m) const {
  ensure_graph(m - 1);
  if (cursor_ready_[m].load(std::memory_order_acquire)) return;
  std::lock_guard<std::mutex> lock(build_mutex_);
  if (cursor_ready_[m].load(std::memory_order_relaxed)) return;
  const LevelTable& prev = *levels_[m - 1].table;
  levels_[m].cursor = std::make_shared<const OrbitCursor>(levels_[m - 1].graph, prev[1]);
  cursor_ready_[m].store(true, std::memory_order_release);
}

uint64_t Evaluator::eval(uint32_t m, uint64_t n) const {
  if (m <= 3) return closed_form_eval(modulus_, m, n);
  check_level(m, level_cap_);
  check_table_size(modulus_);
  ensure_cursor(m);
  // A(m, n) = f^(n+1)(1) = f^n(f(1)) with f the level-(m-1) map; the cursor
  // starts at f(1), so no n+1 overflow for n = 2^64 - 1.
  return levels_[m].cursor->at(n);
}

const LevelTable& Evaluator::table(uint32_t m) const {
  ensure_table(m);
  return *levels_[m].table;
}

std::shared_ptr<const FunctionalGraph> Evaluator::graph(uint32_t m) const {
  ensure_graph(m);
  return levels_[m].graph;
}

uint64_t fast_eval(const Modulus& modulus, uint32_t m, uint64_t n, uint32_t level_cap) {
  if (m <= 3) return closed_form_eval(modulus, m, n);
  Evaluator evaluator(modulus, level_cap);
  return evaluator.eval(m, n);
}

}  // namespace ackmod
