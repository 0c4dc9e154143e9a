#include "ackmod/analysis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "ackmod/errors.hpp"
#include "ackmod/mathutil.hpp"

namespace ackmod {

DomainSpec DomainSpec::range(uint64_t lo, uint64_t hi) {
  if (lo > hi) throw InvalidArgumentError("domain range: lo must not exceed hi");
  DomainSpec d;
  d.mode = Mode::kRange;
  d.lo = lo;
  d.hi = hi;
  return d;
}

DomainSpec DomainSpec::sample(uint64_t count, uint64_t seed) {
  if (count == 0) throw InvalidArgumentError("domain sample: count must be positive");
  DomainSpec d;
  d.mode = Mode::kSample;
  d.count = count;
  d.seed = seed;
  return d;
}

uint64_t DomainSpec::size(const Modulus& modulus) const {
  uint64_t s = 0;
  switch (mode) {
    case Mode::kFull:
      s = modulus.value();
      break;
    case Mode::kRange:
      if (hi - lo >= kMaxDomainSize)
        throw InfeasibleSizeError("domain range larger than 2^26");
      s = hi - lo + 1;
      break;
    case Mode::kSample:
      s = count;
      break;
  }
  if (s > kMaxDomainSize) throw InfeasibleSizeError("domain larger than 2^26");
  return s;
}

EvalFn evaluator_fn(const Evaluator& evaluator, uint32_t m) {
  check_level(m, evaluator.level_cap());
  return [ev = &evaluator, m](uint64_t x) { return ev->eval(m, x); };
}

EvalFn self_map_fn(const SelfMap& map) {
  return [map, n = map.modulus().value()](uint64_t x) { return map(x % n); };
}

EvalFn table_fn(const LevelTable& table) {
  return [values = table.shared_values(), n = table.modulus().value()](uint64_t x) {
    return (*values)[x % n];
  };
}

namespace serial {

std::vector<uint64_t> histogram_counts(const EvalFn& f, const Modulus& modulus,
                                       const DomainSpec& domain) {
  const uint64_t N = modulus.value();
  const uint64_t S = domain.size(modulus);
  std::vector<uint64_t> counts(N, 0);
  for (uint64_t i = 0; i < S; ++i) {
    uint64_t v = f(domain.input(i));
    if (v >= N) v %= N;
    ++counts[v];
  }
  return counts;
}

uint64_t avalanche_bit_sum(const EvalFn& f, const Modulus& modulus, Neighbor neighbor,
                           const DomainSpec& domain, uint32_t bit) {
  const uint64_t S = domain.size(modulus);
  uint64_t sum = 0;
  for (uint64_t i = 0; i < S; ++i) {
    uint64_t x = domain.input(i);
    uint64_t y = neighbor == Neighbor::kXor1  ? x ^ 1
                 : neighbor == Neighbor::kSucc ? x + 1
                                               : x ^ (uint64_t{1} << bit);
    sum += static_cast<uint64_t>(std::popcount(f(x) ^ f(y)));
  }
  return sum;
}

}  // namespace serial

namespace parallel {

std::vector<uint64_t> histogram_counts(const EvalFn& f, const Modulus& modulus,
                                       const DomainSpec& domain) {
  const uint64_t N = modulus.value();
  const int64_t S = static_cast<int64_t>(domain.size(modulus));
  std::vector<uint64_t> counts(N, 0);
  uint64_t* c = counts.data();
  if (N <= (uint64_t{1} << 22)) {
    // Per-thread buffers dodge contention on concentrated outputs; the merge
    // is an integer sum per index, so the result is schedule-independent.
#pragma omp parallel
    {
      std::vector<uint64_t> local(N, 0);
#pragma omp for schedule(static) nowait
      for (int64_t i = 0; i < S; ++i) {
        uint64_t v = f(domain.input(static_cast<uint64_t>(i)));
        if (v >= N) v %= N;
        ++local[v];
      }
#pragma omp critical(ackmod_histogram_merge)
      for (uint64_t v = 0; v < N; ++v) c[v] += local[v];
    }
    return counts;
  }
#pragma omp parallel for schedule(static)
  for (int64_t i = 0; i < S; ++i) {
    uint64_t v = f(domain.input(static_cast<uint64_t>(i)));
    if (v >= N) v %= N;
#pragma omp atomic update
    ++c[v];
  }
  return counts;
}

uint64_t avalanche_bit_sum(const EvalFn& f, const Modulus& modulus, Neighbor neighbor,
                           const DomainSpec& domain, uint32_t bit) {
  const int64_t S = static_cast<int64_t>(domain.size(modulus));
  uint64_t sum = 0;
#pragma omp parallel for schedule(static) reduction(+ : sum)
  for (int64_t i = 0; i < S; ++i) {
    uint64_t x = domain.input(static_cast<uint64_t>(i));
    uint64_t y = neighbor == Neighbor::kXor1  ? x ^ 1
                 : neighbor == Neighbor::kSucc ? x + 1
                                               : x ^ (uint64_t{1} << bit);
    sum += static_cast<uint64_t>(std::popcount(f(x) ^ f(y)));
  }
  return sum;
}

}  // namespace parallel

uint64_t StatsReport::count_of(uint64_t value) const {
  auto it = std::lower_bound(histogram.begin(), histogram.end(), value,
                             [](const auto& p, uint64_t v) { return p.first < v; });
  return it != histogram.end() && it->first == value ? it->second : 0;
}

namespace {

// Deviation and chi-square are accumulated serially in index order so the
// doubles come out bit-identical no matter how the counting pass was split.
void fill_metrics(StatsReport& r, const std::vector<uint64_t>& counts, uint64_t N,
                  uint64_t S) {
  const double expected = static_cast<double>(S) / static_cast<double>(N);
  double dev = 0.0, chi = 0.0;
  r.histogram.clear();
  for (uint64_t v = 0; v < N; ++v) {
    uint64_t c = counts[v];
    double delta = static_cast<double>(c) - expected;
    dev = std::max(dev, std::fabs(delta));
    chi += delta * delta / expected;
    if (c > 0) r.histogram.emplace_back(v, c);
  }
  r.dev_max_abs = dev;
  r.dev_max_norm = dev * static_cast<double>(N) / static_cast<double>(S);
  r.chi_square = chi;
}

}  // namespace

StatsReport output_distribution(const EvalFn& f, const Modulus& modulus,
                                const DomainSpec& domain, std::string source) {
  const uint64_t N = modulus.value();
  if (N > kMaxDomainSize)
    throw InfeasibleSizeError("output_distribution: modulus above histogram bound (2^26)");
  StatsReport r;
  r.modulus = N;
  r.source = std::move(source);
  r.domain = domain;
  r.sample_count = domain.size(modulus);
  std::vector<uint64_t> counts = parallel::histogram_counts(f, modulus, domain);
  fill_metrics(r, counts, N, r.sample_count);
  return r;
}

StatsReport output_distribution(const LevelTable& table, const DomainSpec& domain) {
  const uint64_t N = table.modulus().value();
  if (domain.mode == DomainSpec::Mode::kRange && domain.hi >= N)
    throw InvalidArgumentError("table-backed stats require a domain inside [0, N)");
  return output_distribution(table_fn(table), table.modulus(), domain,
                             "level:" + std::to_string(table.level()));
}

double avalanche(const EvalFn& f, const Modulus& modulus, Neighbor neighbor,
                 const DomainSpec& domain, uint32_t bit) {
  auto k = modulus.pow2_exponent();
  if (!k) throw InvalidArgumentError("avalanche requires a power-of-two modulus");
  if (neighbor == Neighbor::kBit && bit >= *k)
    throw InvalidArgumentError("avalanche bit index must be below k");
  const uint64_t S = domain.size(modulus);
  uint64_t sum = parallel::avalanche_bit_sum(f, modulus, neighbor, domain, bit);
  return static_cast<double>(sum) / (static_cast<double>(*k) * static_cast<double>(S));
}

AvalancheSet avalanche_all(const EvalFn& f, const Modulus& modulus,
                           const DomainSpec& domain) {
  auto k = modulus.pow2_exponent();
  if (!k) throw InvalidArgumentError("avalanche requires a power-of-two modulus");
  AvalancheSet a;
  a.xor1 = avalanche(f, modulus, Neighbor::kXor1, domain);
  a.succ = avalanche(f, modulus, Neighbor::kSucc, domain);
  a.per_bit.reserve(*k);
  for (uint32_t j = 0; j < *k; ++j)
    a.per_bit.push_back(avalanche(f, modulus, Neighbor::kBit, domain, j));
  return a;
}

std::optional<AffineRelation> affine_relation(const LevelTable& a_table,
                                              const LevelTable& b_table) {
  if (a_table.modulus() != b_table.modulus())
    throw InvalidArgumentError("affine_relation: tables must share a modulus");
  const uint64_t N = a_table.modulus().value();
  if (N > (uint64_t{1} << 20))
    throw InfeasibleSizeError("affine_relation: modulus above bound (2^20)");
  const std::vector<uint64_t>& A = a_table.values();
  const std::vector<uint64_t>& B = b_table.values();

  auto verify = [&](uint64_t a, uint64_t b) {
    for (uint64_t n = 0; n < N; ++n)
      if (addmod(mulmod(a, A[n], N), b, N) != B[n]) return false;
    return true;
  };

  // Anchor at index 0 and look for the difference with the smallest gcd;
  // that congruence pins a up to gcd many candidates.
  uint64_t best_j = 0, best_g = 0;
  for (uint64_t j = 1; j < N; ++j) {
    uint64_t d = submod(A[j], A[0], N);
    if (d == 0) continue;
    uint64_t g = std::gcd(d, N);
    if (best_g == 0 || g < best_g) {
      best_g = g;
      best_j = j;
      if (g == 1) break;
    }
  }

  if (best_g == 0) {
    // A is constant: a relation exists iff B is constant too, and then any a
    // works; report the canonical family member with a = 1.
    for (uint64_t n = 1; n < N; ++n)
      if (B[n] != B[0]) return std::nullopt;
    return AffineRelation{1, submod(B[0], A[0], N)};
  }

  uint64_t d = submod(A[best_j], A[0], N);
  uint64_t e = submod(B[best_j], B[0], N);
  if (e % best_g != 0) return std::nullopt;
  uint64_t reduced_n = N / best_g;
  auto inv = mod_inverse((d / best_g) % reduced_n, reduced_n);
  if (!inv) return std::nullopt;  // unreachable: d/g is coprime to N/g
  uint64_t a0 = mulmod((e / best_g) % reduced_n, *inv, reduced_n);
  for (uint64_t t = 0; t < best_g; ++t) {
    uint64_t a = a0 + t * reduced_n;
    uint64_t b = submod(B[0], mulmod(a, A[0], N), N);
    if (verify(a, b)) return AffineRelation{a, b};
  }
  return std::nullopt;
}

CorrelationReport correlate_levels(const LevelTable& a_table, const LevelTable& b_table) {
  if (a_table.modulus() != b_table.modulus())
    throw InvalidArgumentError("correlate_levels: tables must share a modulus");
  const uint64_t N = a_table.modulus().value();
  if (N > (uint64_t{1} << 22))
    throw InfeasibleSizeError("correlate_levels: modulus above bound (2^22)");
  const std::vector<uint64_t>& A = a_table.values();
  const std::vector<uint64_t>& B = b_table.values();

  using int128 = __int128;
  int128 sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
  for (uint64_t n = 0; n < N; ++n) {
    int128 x = A[n], y = B[n];
    sx += x;
    sy += y;
    sxy += x * y;
    sxx += x * x;
    syy += y * y;
  }
  int128 n128 = static_cast<int128>(N);
  int128 var_x = n128 * sxx - sx * sx;
  int128 var_y = n128 * syy - sy * sy;
  int128 cov = n128 * sxy - sx * sy;

  CorrelationReport r;
  if (var_x > 0 && var_y > 0) {
    long double denom = sqrtl(static_cast<long double>(var_x)) *
                        sqrtl(static_cast<long double>(var_y));
    r.pearson = static_cast<double>(static_cast<long double>(cov) / denom);
  }

  // Plug-in NMI with natural logs, geometric-mean normalization.
  std::unordered_map<uint64_t, uint64_t> ca, cb, cab;
  for (uint64_t n = 0; n < N; ++n) {
    ++ca[A[n]];
    ++cb[B[n]];
    ++cab[(A[n] << 32) | B[n]];
  }
  auto entropy = [&](const std::unordered_map<uint64_t, uint64_t>& counts) {
    double h = 0.0;
    for (const auto& [_, c] : counts) {
      double p = static_cast<double>(c) / static_cast<double>(N);
      h -= p * std::log(p);
    }
    return h;
  };
  double ha = entropy(ca), hb = entropy(cb);
  if (ha <= 0.0 || hb <= 0.0) {
    r.nmi = 0.0;
    return r;
  }
  double mi = 0.0;
  for (const auto& [key, c] : cab) {
    double pab = static_cast<double>(c) / static_cast<double>(N);
    double pa = static_cast<double>(ca[key >> 32]) / static_cast<double>(N);
    double pb = static_cast<double>(cb[key & 0xFFFFFFFFu]) / static_cast<double>(N);
    mi += pab * std::log(pab / (pa * pb));
  }
  r.nmi = std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
  return r;
}

std::vector<LevelCycleStats> cycle_stats_by_level(const Modulus& modulus, uint32_t m_lo,
                                                  uint32_t m_hi, uint32_t level_cap) {
  if (m_lo > m_hi) throw InvalidArgumentError("cycle_stats_by_level: empty level range");
  check_level(m_hi, level_cap);
  if (modulus.value() > (uint64_t{1} << 22))
    throw InfeasibleSizeError("cycle_stats_by_level: modulus above bound (2^22)");

  Evaluator evaluator(modulus, level_cap);
  std::vector<LevelCycleStats> rows;
  rows.reserve(m_hi - m_lo + 1);
  for (uint32_t m = m_lo; m <= m_hi; ++m) {
    auto graph = evaluator.graph(m);
    LevelCycleStats s;
    s.level = m;
    s.cycle_count = graph->cycles().size();
    uint64_t total = 0;
    s.min_cycle_length = UINT64_MAX;
    for (const CycleInfo& c : graph->cycles()) {
      s.min_cycle_length = std::min<uint64_t>(s.min_cycle_length, c.length);
      s.max_cycle_length = std::max<uint64_t>(s.max_cycle_length, c.length);
      total += c.length;
    }
    s.mean_cycle_length = static_cast<double>(total) / static_cast<double>(s.cycle_count);
    s.max_preperiod = graph->max_preperiod();
    rows.push_back(s);
  }
  return rows;
}

}  // namespace ackmod
