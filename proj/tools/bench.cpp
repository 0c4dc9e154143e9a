// Throughput comparison of the OpenMP kernels against their single-threaded
// schedule references. Every pair must also agree bit-exactly; a mismatch
// aborts the run.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ackmod/ackermann.hpp"
#include "ackmod/analysis.hpp"
#include "ackmod/funcgraph.hpp"

using namespace ackmod;

namespace {

template <typename F>
double best_of(int reps, F&& body) {
  double best = 1e100;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    body();
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s < best) best = s;
  }
  return best;
}

void report(const char* name, double serial, double parallel, bool match) {
  std::printf("%-28s %10.4f s %10.4f s %7.2fx   %s\n", name, serial, parallel,
              serial / parallel, match ? "outputs match" : "OUTPUT MISMATCH");
  if (!match) std::exit(1);
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) quick = true;

  const uint32_t table_k = quick ? 16 : 20;
  const uint32_t hist_k = quick ? 18 : 21;
  const uint32_t aval_k = quick ? 16 : 20;
  const int reps = 3;

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (compiled without OpenMP)\n");
#endif
  std::printf("%-28s %12s %12s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    Modulus mod = Modulus::of(uint64_t{1} << table_k);
    LevelTable serial_table = build_level_table(mod, 4, kDefaultLevelCap, TableFill::kOrbitSerial);
    LevelTable parallel_table = build_level_table(mod, 4, kDefaultLevelCap, TableFill::kGraphParallel);
    double ts = best_of(reps, [&] {
      build_level_table(mod, 4, kDefaultLevelCap, TableFill::kOrbitSerial);
    });
    double tp = best_of(reps, [&] {
      build_level_table(mod, 4, kDefaultLevelCap, TableFill::kGraphParallel);
    });
    char name[64];
    std::snprintf(name, sizeof name, "level-4 table fill (2^%u)", table_k);
    report(name, ts, tp, serial_table.values() == parallel_table.values());
  }

  {
    Modulus mod = Modulus::of(uint64_t{1} << hist_k);
    Evaluator ev(mod);
    EvalFn f = evaluator_fn(ev, 3);
    DomainSpec dom = DomainSpec::full();
    auto hs = serial::histogram_counts(f, mod, dom);
    auto hp = parallel::histogram_counts(f, mod, dom);
    double ts = best_of(reps, [&] { serial::histogram_counts(f, mod, dom); });
    double tp = best_of(reps, [&] { parallel::histogram_counts(f, mod, dom); });
    char name[64];
    std::snprintf(name, sizeof name, "level-3 histogram (2^%u)", hist_k);
    report(name, ts, tp, hs == hp);
  }

  {
    Modulus mod = Modulus::of(uint64_t{1} << aval_k);
    Evaluator ev(mod);
    EvalFn f = evaluator_fn(ev, 4);
    DomainSpec dom = DomainSpec::full();
    uint64_t ss = serial::avalanche_bit_sum(f, mod, Neighbor::kXor1, dom, 0);
    uint64_t sp = parallel::avalanche_bit_sum(f, mod, Neighbor::kXor1, dom, 0);
    double ts =
        best_of(reps, [&] { serial::avalanche_bit_sum(f, mod, Neighbor::kXor1, dom, 0); });
    double tp = best_of(
        reps, [&] { parallel::avalanche_bit_sum(f, mod, Neighbor::kXor1, dom, 0); });
    char name[64];
    std::snprintf(name, sizeof name, "level-4 avalanche (2^%u)", aval_k);
    report(name, ts, tp, ss == sp);
  }

  return 0;
}
