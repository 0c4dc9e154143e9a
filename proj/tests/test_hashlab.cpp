#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ackmod/errors.hpp"
#include "ackmod/hashlab.hpp"
#include "ackmod/json_io.hpp"
#include "ackmod/mathutil.hpp"

using namespace ackmod;

namespace {

// The worked auxiliary maps: h1 = x mod 4, h2 = floor(x/2),
// h3 = (x+1) mod 3, h4 = floor(x/3).
HMap h_mod4() { return HMap{1, 0, 1, 4}; }
HMap h_half() { return HMap{1, 0, 2, UINT64_MAX}; }
HMap h_inc_mod3() { return HMap{1, 1, 1, 3}; }
HMap h_third() { return HMap{1, 0, 3, UINT64_MAX}; }

HashSpec single16() {
  HashSpec s;
  s.modulus = Modulus::of(16);
  s.kind = HashKind::kSingle;
  s.h1 = h_mod4();
  s.h2 = h_half();
  return s;
}

HashSpec dual16() {
  HashSpec s = single16();
  s.kind = HashKind::kDual;
  s.h3 = h_inc_mod3();
  s.h4 = h_third();
  return s;
}

}  // namespace

TEST_CASE("h-map arithmetic") {
  CHECK(h_mod4()(5) == 1);
  CHECK(h_half()(5) == 2);
  CHECK(h_inc_mod3()(0) == 1);
  CHECK(h_third()(7) == 2);
  HMap scaled{3, 1, 2, 10};  // ((3x+1)/2) mod 10
  CHECK(scaled(5) == 8);
  CHECK(scaled(7) == 1);
}

TEST_CASE("hierarchical hash on the worked example maps") {
  Hasher h(single16());
  CHECK(h(5) == 4);   // level 1, arg 2
  CHECK(h(0) == 1);   // level 0, arg 0
  CHECK(h(12) == 7);  // level 0, arg 6
}

TEST_CASE("dual-depth hash mixes two branches") {
  Hasher h(dual16());
  CHECK(h(0) == 3);  // A(0,0) xor A(1,0) = 1 ^ 2
  CHECK(h(1) == 1);  // A(1,0) xor A(2,0) = 2 ^ 3
}

TEST_CASE("dual hash with identical branches vanishes") {
  HashSpec s = dual16();
  s.h3 = s.h1;
  s.h4 = s.h2;
  Hasher h(s);
  for (uint64_t x = 0; x < 16; ++x) CHECK(h(x) == 0);
  CHECK(h(123456789) == 0);
}

TEST_CASE("dual hash stays inside non-power-of-two rings") {
  HashSpec s = dual16();
  s.modulus = Modulus::of(12);
  Hasher h(s);
  for (uint64_t x = 0; x < 200; ++x) CHECK(h(x) < 12);
}

TEST_CASE("iterated hash composes the single-step map") {
  HashSpec s = single16();
  s.kind = HashKind::kIterated;
  s.iterations = 2;
  Hasher h(s);
  CHECK(h.iterated(9, 0) == 9);
  CHECK(h.iterated(5, 1) == 4);
  CHECK(h(5) == 3);  // H(H(5)) = H(4) = A(0,2)
}

TEST_CASE("iterated hash satisfies the semigroup property on Z_16") {
  HashSpec s = single16();
  s.kind = HashKind::kIterated;
  Hasher h(s);
  for (uint64_t trial = 0; trial < 200; ++trial) {
    uint64_t x = splitmix64(1, trial) % 16;
    uint64_t t1 = splitmix64(2, trial) % 17;
    uint64_t t2 = splitmix64(3, trial) % 17;
    REQUIRE(h.iterated(h.iterated(x, t1), t2) == h.iterated(x, t1 + t2));
  }
}

TEST_CASE("constant depth selector reduces to the plain level map") {
  for (uint32_t m = 0; m <= 5; ++m) {
    HashSpec s;
    s.modulus = Modulus::of(32);
    s.kind = HashKind::kSingle;
    s.h1 = HMap{0, m, 1, UINT64_MAX};  // h1(x) = m
    s.h2 = HMap{1, 0, 1, 32};          // h2(x) = x mod 32
    Hasher h(s);
    LevelTable t = build_level_table(Modulus::of(32), m);
    for (uint64_t x = 0; x < 64; ++x) REQUIRE(h(x) == t[x % 32]);
  }
}

TEST_CASE("depth selector outputs above the cap clamp and are counted") {
  HashSpec s;
  s.modulus = Modulus::of(16);
  s.kind = HashKind::kSingle;
  s.h1 = HMap{1, 0, 1, UINT64_MAX};  // h1(x) = x, unbounded
  s.h2 = h_half();
  s.level_cap = 5;
  Hasher h(s);
  CHECK(h(100) == fast_eval(Modulus::of(16), 5, 50));
  CHECK(h.clamp_count() == 1);
  CHECK(h(3) == fast_eval(Modulus::of(16), 3, 1));
  CHECK(h.clamp_count() == 1);
}

TEST_CASE("nonconstant depth selectors touch multiple levels") {
  Hasher h(single16());
  for (uint64_t x = 0; x < 16; ++x) (void)h(x);
  CHECK(h.distinct_levels_used() >= 2);
  auto counts = h.level_use_counts();
  uint64_t total = 0;
  for (uint64_t c : counts) total += c;
  CHECK(total == 16);
  CHECK(counts[0] == 4);  // x = 0, 4, 8, 12
  CHECK(counts[3] == 4);
}

TEST_CASE("hash evaluation is pure and repeatable") {
  Hasher h(dual16());
  std::vector<uint64_t> first, second;
  for (uint64_t x = 0; x < 64; ++x) first.push_back(h(x));
  for (uint64_t x = 0; x < 64; ++x) second.push_back(h(x));
  CHECK(first == second);
}

TEST_CASE("hash spec JSON round-trip") {
  HashSpec s = dual16();
  s.level_cap = 5;
  HashSpec back = hash_spec_from_json(to_json(s));
  CHECK(back.modulus.value() == 16);
  CHECK(back.kind == HashKind::kDual);
  CHECK(back.h3.b == 1);
  CHECK(back.h4.d == 3);
  CHECK(back.level_cap == 5);

  HashSpec it = single16();
  it.kind = HashKind::kIterated;
  it.iterations = 7;
  CHECK(hash_spec_from_json(to_json(it)).iterations == 7);
}

TEST_CASE("hash spec JSON is strict") {
  using nlohmann::json;
  json good = {{"modulus", 16},
               {"kind", "single"},
               {"h1", {{"a", 1}, {"b", 0}, {"d", 1}, {"c", 4}}},
               {"h2", {{"a", 1}, {"b", 0}, {"d", 2}}}};
  CHECK_NOTHROW(hash_spec_from_json(good));

  json unknown_top = good;
  unknown_top["extra"] = 1;
  CHECK_THROWS_AS(hash_spec_from_json(unknown_top), InvalidArgumentError);

  json unknown_sub = good;
  unknown_sub["h1"]["q"] = 1;
  CHECK_THROWS_AS(hash_spec_from_json(unknown_sub), InvalidArgumentError);

  json missing = {{"modulus", 16}, {"kind", "single"}, {"h1", json::object()}};
  CHECK_THROWS_AS(hash_spec_from_json(missing), InvalidArgumentError);

  json bad_kind = good;
  bad_kind["kind"] = "quadruple";
  CHECK_THROWS_AS(hash_spec_from_json(bad_kind), InvalidArgumentError);

  json stray_h3 = good;
  stray_h3["h3"] = json::object();
  CHECK_THROWS_AS(hash_spec_from_json(stray_h3), InvalidArgumentError);

  json stray_t = good;
  stray_t["t"] = 3;
  CHECK_THROWS_AS(hash_spec_from_json(stray_t), InvalidArgumentError);

  json negative = good;
  negative["h1"]["a"] = -1;
  CHECK_THROWS_AS(hash_spec_from_json(negative), InvalidArgumentError);

  json zero_d = good;
  zero_d["h1"]["d"] = 0;
  CHECK_THROWS_AS(hash_spec_from_json(zero_d), InvalidArgumentError);
}

TEST_CASE("defaults fill omitted h-map fields") {
  using nlohmann::json;
  json doc = {{"modulus", 16},
              {"kind", "single"},
              {"h1", json::object()},
              {"h2", json::object()}};
  HashSpec s = hash_spec_from_json(doc);
  CHECK(s.h1.a == 1);
  CHECK(s.h1.b == 0);
  CHECK(s.h1.d == 1);
  CHECK(s.h1.c == UINT64_MAX);
  CHECK(s.level_cap == kDefaultHashLevelCap);
}
