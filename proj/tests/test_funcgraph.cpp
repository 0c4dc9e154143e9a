#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <memory>

#include "ackmod/ackermann.hpp"
#include "ackmod/errors.hpp"
#include "ackmod/funcgraph.hpp"
#include "ackmod/json_io.hpp"
#include "ackmod/mathutil.hpp"
#include "oracles.hpp"

using namespace ackmod;

namespace {

SelfMap random_map(uint64_t N, uint64_t seed) {
  auto values = std::make_shared<std::vector<uint64_t>>(N);
  for (uint64_t x = 0; x < N; ++x) (*values)[x] = splitmix64(seed, x) % N;
  return SelfMap::table(Modulus::of(N), values, "random");
}

std::function<uint64_t(uint64_t)> as_fn(const SelfMap& m) {
  return [&m](uint64_t x) { return m(x); };
}

void check_graph_invariants(const FunctionalGraph& g, const SelfMap& map) {
  const uint64_t N = g.size();
  uint64_t component_total = 0;
  for (const CycleInfo& c : g.cycles()) component_total += c.component_size;
  REQUIRE(component_total == N);

  for (uint64_t x = 0; x < N; ++x) {
    uint64_t fx = map(x);
    REQUIRE(g.next(x) == fx);
    if (g.tail_length(x) > 0) {
      REQUIRE(g.tail_length(fx) == g.tail_length(x) - 1);
      REQUIRE(g.cycle_position(x) == FunctionalGraph::kNoPosition);
    } else {
      // applying f cycle-length times returns to the node
      const CycleInfo& c = g.cycles()[g.cycle_id(x)];
      REQUIRE(g.iterate(x, c.length) == x);
      REQUIRE(g.cycle_position(x) < c.length);
    }
  }
}

}  // namespace

TEST_CASE("self-map kinds evaluate correctly") {
  Modulus m16 = Modulus::of(16);
  SelfMap tet = SelfMap::tetration(m16);
  CHECK(tet(0) == 1);
  CHECK(tet(3) == 8);
  CHECK(tet(4) == 0);  // 2^4 = 16 = 0 mod 16 closes the measured cycle
  CHECK(tet(15) == 0);

  // non-power-of-two tetration goes through modpow
  SelfMap tet12 = SelfMap::tetration(Modulus::of(12));
  CHECK(tet12(4) == 4);  // 16 mod 12

  SelfMap aff = SelfMap::affine(m16, 3, 5);
  CHECK(aff(2) == 11);
  CHECK(aff(15) == (3 * 15 + 5) % 16);

  SelfMap sh = SelfMap::shifted_exp(m16);
  for (uint64_t x = 0; x < 16; ++x) CHECK(sh(x) == closed_form_eval(m16, 3, x));

  auto bad = std::make_shared<std::vector<uint64_t>>(std::vector<uint64_t>{0, 16});
  CHECK_THROWS_AS(SelfMap::table(m16, bad), InvalidArgumentError);
  auto short_vec = std::make_shared<std::vector<uint64_t>>(std::vector<uint64_t>{0});
  CHECK_THROWS_AS(SelfMap::table(m16, short_vec), InvalidArgumentError);
}

TEST_CASE("tetration graph over Z_16") {
  FunctionalGraph g = build_graph(SelfMap::tetration(Modulus::of(16)));
  REQUIRE(g.cycles().size() == 1);
  const CycleInfo& c = g.cycles()[0];
  CHECK(c.length == 4);
  CHECK(c.representative == 0);
  CHECK(c.component_size == 16);
  std::vector<uint32_t> expect_cycle = {0, 1, 2, 4};
  CHECK(g.cycle_nodes() == expect_cycle);
  CHECK(g.tail_length(8) == 1);
  CHECK(g.tail_length(3) == 2);
  CHECK(g.max_preperiod() == 2);
  std::vector<uint64_t> expect_hist = {4, 11, 1};
  CHECK(g.preperiod_histogram() == expect_hist);
}

TEST_CASE("level-3 graph over Z_16 has the fixed point 13") {
  LevelTable t3 = build_level_table(Modulus::of(16), 3);
  FunctionalGraph g = build_graph(as_self_map(t3));
  REQUIRE(g.cycles().size() == 1);
  CHECK(g.cycles()[0].length == 1);
  CHECK(g.cycles()[0].representative == 13);
  // orbit 0 -> 5 -> 13
  CHECK(g.next(0) == 5);
  CHECK(g.next(5) == 13);
  CHECK(g.tail_length(0) == 2);
  CHECK(g.map_descriptor() == "level:3");
}

TEST_CASE("identity map decomposes into N fixed points") {
  FunctionalGraph g = build_graph(SelfMap::affine(Modulus::of(10), 1, 0));
  REQUIRE(g.cycles().size() == 10);
  for (const CycleInfo& c : g.cycles()) {
    CHECK(c.length == 1);
    CHECK(c.component_size == 1);
  }
  CHECK(g.max_preperiod() == 0);
}

TEST_CASE("graph invariants hold for random maps and level tables") {
  for (uint64_t seed = 0; seed < 8; ++seed) {
    uint64_t N = 2 + splitmix64(99, seed) % 4000;
    SelfMap map = random_map(N, seed);
    check_graph_invariants(build_graph(map), map);
  }
  for (uint32_t m = 0; m <= 5; ++m) {
    LevelTable t = build_level_table(Modulus::of(512), m);
    SelfMap map = as_self_map(t);
    check_graph_invariants(build_graph(map), map);
  }
}

TEST_CASE("iterate_query: examples") {
  FunctionalGraph tet = build_graph(SelfMap::tetration(Modulus::of(16)));
  CHECK(tet.iterate(3, 0) == 3);
  CHECK(tet.iterate(3, 100) == 2);
  LevelTable t3 = build_level_table(Modulus::of(16), 3);
  FunctionalGraph g3 = build_graph(as_self_map(t3));
  CHECK(g3.iterate(0, 5) == 13);
  CHECK_THROWS_AS(g3.iterate(16, 1), InvalidArgumentError);
}

TEST_CASE("iterate_query matches naive iteration on random maps") {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    uint64_t N = 2 + splitmix64(123, seed) % 3000;
    SelfMap map = random_map(N, seed * 7 + 1);
    FunctionalGraph g = build_graph(map);
    auto f = as_fn(map);
    for (uint64_t q = 0; q < 1000; ++q) {
      uint64_t x = splitmix64(seed + 1000, q) % N;
      uint64_t t = splitmix64(seed + 2000, q) % (4 * N);
      REQUIRE(g.iterate(x, t) == oracles::iterate_naive(f, x, t));
    }
  }
}

TEST_CASE("iterate_query composes for large step counts") {
  SelfMap map = random_map(1000, 5);
  FunctionalGraph g = build_graph(map);
  for (uint64_t q = 0; q < 200; ++q) {
    uint64_t x = splitmix64(4, q) % 1000;
    uint64_t t1 = splitmix64(5, q) >> 1;  // < 2^63, so t1 + t2 cannot wrap
    uint64_t t2 = splitmix64(6, q) >> 1;
    REQUIRE(g.iterate(x, t1 + t2) == g.iterate(g.iterate(x, t1), t2));
  }
}

TEST_CASE("orbit cursor agrees with iterate_query") {
  SelfMap map = random_map(2048, 9);
  auto g = std::make_shared<const FunctionalGraph>(build_graph(map));
  uint64_t start = 77;
  OrbitCursor cursor(g, start);
  for (uint64_t t = 0; t < 5000; ++t) REQUIRE(cursor.at(t) == g->iterate(start, t));
  CHECK(cursor.at(UINT64_MAX) == g->iterate(start, UINT64_MAX));
}

TEST_CASE("orbit_summary: examples") {
  SelfMap tet = SelfMap::tetration(Modulus::of(16));
  OrbitSummary s0 = orbit_summary(tet, 0);
  CHECK(s0.preperiod == 0);
  CHECK(s0.period == 4);
  OrbitSummary s3 = orbit_summary(tet, 3);
  CHECK(s3.preperiod == 2);
  CHECK(s3.period == 4);

  LevelTable t3 = build_level_table(Modulus::of(16), 3);
  OrbitSummary s13 = orbit_summary(as_self_map(t3), 13);
  CHECK(s13.preperiod == 0);
  CHECK(s13.period == 1);
  std::vector<uint64_t> fixed = {13};
  CHECK(s13.cycle_members == fixed);

  OrbitSummary from0 = orbit_summary(as_self_map(t3), 0);
  CHECK(from0.preperiod == 2);
  CHECK(from0.period == 1);
}

TEST_CASE("orbit_summary agrees with the graph decomposition") {
  for (uint64_t seed = 0; seed < 4; ++seed) {
    uint64_t N = 2 + splitmix64(321, seed) % 2000;
    SelfMap map = random_map(N, seed + 40);
    FunctionalGraph g = build_graph(map);
    for (uint64_t q = 0; q < 64; ++q) {
      uint64_t x = splitmix64(seed, q) % N;
      OrbitSummary s = orbit_summary(map, x);
      REQUIRE(s.preperiod == g.tail_length(x));
      REQUIRE(s.period == g.cycles()[g.cycle_id(x)].length);
    }
  }
}

TEST_CASE("orbit_summary truncates long cycles at the cap") {
  // successor map: one cycle of length N
  SelfMap succ = SelfMap::affine(Modulus::of(100), 1, 1);
  OrbitSummary s = orbit_summary(succ, 17, 10);
  CHECK(s.period == 100);
  CHECK(s.cycle_members.size() == 10);
  CHECK(s.cycle_truncated);
  CHECK(s.cycle_members[0] == 17);
}

TEST_CASE("tetration_check across k") {
  TetrationReport r1 = tetration_check(1);
  CHECK(r1.measured_cycle_length == 2);
  CHECK(r1.claimed_cycle_length == 2);
  CHECK(r1.cycle_length_agrees);

  TetrationReport r4 = tetration_check(4);
  CHECK(r4.measured_cycle_length == 4);
  std::vector<uint64_t> cyc = {0, 1, 2, 4};
  CHECK(r4.cycle_nodes == cyc);
  CHECK(r4.max_preperiod == 2);
  CHECK(r4.claimed_cycle_length == 5);
  CHECK_FALSE(r4.cycle_length_agrees);
  CHECK(r4.preperiod_agrees);

  // measured, not assumed: k = 5 stays within two steps of the cycle
  TetrationReport r5 = tetration_check(5);
  CHECK(r5.max_preperiod == 2);
  CHECK(r5.measured_cycle_length == 5);

  TetrationReport r9 = tetration_check(9);
  CHECK(r9.max_preperiod == 3);
  CHECK_FALSE(r9.preperiod_agrees);

  // every orbit drains into the cycle containing 0, exhaustively per k
  for (uint32_t k = 1; k <= 16; ++k) {
    TetrationReport r = tetration_check(k);
    CHECK(r.single_cycle);
    CHECK(r.max_preperiod <= 4);
  }

  CHECK_THROWS_AS(tetration_check(0), InvalidArgumentError);
  CHECK_THROWS_AS(tetration_check(27), InfeasibleSizeError);
}

TEST_CASE("census JSON carries the full decomposition") {
  FunctionalGraph g = build_graph(SelfMap::tetration(Modulus::of(16)));
  nlohmann::json j = census_json(g);
  CHECK(j["schema_version"] == 1);
  CHECK(j["modulus"] == 16);
  CHECK(j["map_descriptor"] == "tetration");
  REQUIRE(j["cycles"].size() == 1);
  CHECK(j["cycles"][0]["length"] == 4);
  CHECK(j["cycles"][0]["representative"] == 0);
  CHECK(j["cycles"][0]["component_size"] == 16);
  CHECK(j["max_preperiod"] == 2);
  CHECK(j["preperiod_histogram"] == nlohmann::json::array({4, 11, 1}));
}

TEST_CASE("graph build rejects infeasible sizes") {
  // construct the map directly; building the graph must throw before allocating
  SelfMap big = SelfMap::tetration(Modulus::of(uint64_t{1} << 27));
  CHECK_THROWS_AS(build_graph(big), InfeasibleSizeError);
}
