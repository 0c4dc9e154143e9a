#include "ackmod/hashlab.hpp"

#include "ackmod/errors.hpp"

namespace ackmod {

void validate(const HashSpec& spec) {
  if (spec.level_cap > kMaxLevelCap)
    throw InvalidArgumentError("hash spec: level_cap exceeds supported maximum");
  auto check_h = [](const HMap& h, const char* name) {
    if (h.d == 0)
      throw InvalidArgumentError(std::string("hash spec: ") + name + ".d must be >= 1");
    if (h.c == 0)
      throw InvalidArgumentError(std::string("hash spec: ") + name + ".c must be >= 1");
  };
  check_h(spec.h1, "h1");
  check_h(spec.h2, "h2");
  if (spec.kind == HashKind::kDual) {
    check_h(spec.h3, "h3");
    check_h(spec.h4, "h4");
  }
}

Hasher::Hasher(HashSpec spec)
    : spec_(std::move(spec)), evaluator_(spec_.modulus, spec_.level_cap) {
  validate(spec_);
}

uint32_t Hasher::clamp_level(uint64_t raw) const {
  if (raw > spec_.level_cap) {
    clamped_.fetch_add(1, std::memory_order_relaxed);
    return spec_.level_cap;
  }
  return static_cast<uint32_t>(raw);
}

uint64_t Hasher::branch(const HMap& level_map, const HMap& arg_map, uint64_t x) const {
  uint32_t level = clamp_level(level_map(x));
  level_hits_[level].fetch_add(1, std::memory_order_relaxed);
  // The second argument is passed unreduced; the evaluator folds it through
  // the hierarchy semantics rather than dropping high bits here.
  return evaluator_.eval(level, arg_map(x));
}

uint64_t Hasher::hierarchical(uint64_t x) const { return branch(spec_.h1, spec_.h2, x); }

uint64_t Hasher::dual(uint64_t x) const {
  uint64_t lhs = branch(spec_.h1, spec_.h2, x);
  uint64_t rhs = branch(spec_.h3, spec_.h4, x);
  // XOR of two residues can leave Z_N when N is not a power of two.
  return (lhs ^ rhs) % spec_.modulus.value();
}

uint64_t Hasher::iterated(uint64_t x, uint64_t t) const {
  if (t == 0) return x % spec_.modulus.value();
  uint64_t v = hierarchical(x);
  for (uint64_t i = 1; i < t; ++i) v = hierarchical(v);
  return v;
}

uint64_t Hasher::operator()(uint64_t x) const {
  switch (spec_.kind) {
    case HashKind::kSingle:
      return hierarchical(x);
    case HashKind::kDual:
      return dual(x);
    case HashKind::kIterated:
      return iterated(x, spec_.iterations);
  }
  return 0;  // unreachable
}

std::vector<uint64_t> Hasher::level_use_counts() const {
  std::vector<uint64_t> counts(spec_.level_cap + 1, 0);
  for (uint32_t m = 0; m <= spec_.level_cap; ++m)
    counts[m] = level_hits_[m].load(std::memory_order_relaxed);
  return counts;
}

uint32_t Hasher::distinct_levels_used() const {
  uint32_t distinct = 0;
  for (uint32_t m = 0; m <= spec_.level_cap; ++m)
    if (level_hits_[m].load(std::memory_order_relaxed) > 0) ++distinct;
  return distinct;
}

}  // namespace ackmod
