#include "ackmod/json_io.hpp"

#include <fstream>
#include <sstream>

#include "ackmod/errors.hpp"

namespace ackmod {

using nlohmann::json;

json census_json(const FunctionalGraph& graph) {
  json cycles = json::array();
  for (const CycleInfo& c : graph.cycles()) {
    cycles.push_back({{"length", c.length},
                      {"representative", c.representative},
                      {"component_size", c.component_size}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"modulus", graph.modulus().value()},
              {"map_descriptor", graph.map_descriptor()},
              {"cycles", cycles},
              {"max_preperiod", graph.max_preperiod()},
              {"preperiod_histogram", graph.preperiod_histogram()}};
}

json to_json(const TetrationReport& r) {
  return json{{"schema_version", kSchemaVersion},
              {"k", r.k},
              {"modulus", r.modulus},
              {"measured_cycle_length", r.measured_cycle_length},
              {"cycle_nodes", r.cycle_nodes},
              {"cycle_count", r.cycle_count},
              {"max_preperiod", r.max_preperiod},
              {"single_cycle", r.single_cycle},
              {"claimed_cycle_length", r.claimed_cycle_length},
              {"claimed_max_preperiod", r.claimed_max_preperiod},
              {"cycle_length_agrees", r.cycle_length_agrees},
              {"preperiod_agrees", r.preperiod_agrees}};
}

namespace {

json domain_json(const DomainSpec& d) {
  switch (d.mode) {
    case DomainSpec::Mode::kFull:
      return json{{"mode", "full"}, {"params", json::object()}, {"seed", nullptr}};
    case DomainSpec::Mode::kRange:
      return json{{"mode", "range"},
                  {"params", {{"lo", d.lo}, {"hi", d.hi}}},
                  {"seed", nullptr}};
    default:
      return json{{"mode", "sample"}, {"params", {{"count", d.count}}}, {"seed", d.seed}};
  }
}

}  // namespace

json to_json(const StatsReport& r) {
  json hist = json::array();
  for (const auto& [value, count] : r.histogram)
    hist.push_back({{"value", value}, {"count", count}});
  json j{{"schema_version", kSchemaVersion},
         {"modulus", r.modulus},
         {"level_or_map", r.source},
         {"domain", domain_json(r.domain)},
         {"sample_count", r.sample_count},
         {"histogram", hist},
         {"dev_max_abs", r.dev_max_abs},
         {"dev_max_norm", r.dev_max_norm},
         {"chi_square", r.chi_square}};
  if (r.avalanche) {
    j["avalanche"] = json{{"xor1", r.avalanche->xor1},
                          {"succ", r.avalanche->succ},
                          {"per_bit", r.avalanche->per_bit}};
  } else {
    j["avalanche"] = nullptr;
  }
  return j;
}

std::string histogram_csv(const StatsReport& r) {
  std::ostringstream out;
  out << "value,count\n";
  for (const auto& [value, count] : r.histogram) out << value << ',' << count << '\n';
  return out.str();
}

json to_json(const OrbitSummary& s) {
  return json{{"schema_version", kSchemaVersion},
              {"start", s.start},
              {"preperiod", s.preperiod},
              {"period", s.period},
              {"cycle", s.cycle_members},
              {"cycle_truncated", s.cycle_truncated}};
}

json to_json(const LevelCycleStats& s) {
  return json{{"level", s.level},
              {"cycle_count", s.cycle_count},
              {"min_cycle_length", s.min_cycle_length},
              {"max_cycle_length", s.max_cycle_length},
              {"mean_cycle_length", s.mean_cycle_length},
              {"max_preperiod", s.max_preperiod}};
}

std::string table_csv(const LevelTable& table) {
  std::ostringstream out;
  out << "n,value\n";
  for (uint64_t n = 0; n < table.size(); ++n) out << n << ',' << table[n] << '\n';
  return out.str();
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const char* where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : allowed)
      if (key == k) ok = true;
    if (!ok)
      throw InvalidArgumentError(std::string("hash spec: unknown field '") + key +
                                 "' in " + where);
  }
}

uint64_t get_u64(const json& j, const char* key, uint64_t fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<uint64_t>();
  if (v.is_number_integer() && v.get<int64_t>() >= 0)
    return static_cast<uint64_t>(v.get<int64_t>());
  throw InvalidArgumentError(std::string("hash spec: field '") + key +
                             "' must be a nonnegative integer");
}

HMap hmap_from_json(const json& j, const char* name) {
  if (!j.is_object())
    throw InvalidArgumentError(std::string("hash spec: ") + name + " must be an object");
  reject_unknown(j, {"a", "b", "d", "c"}, name);
  HMap h;
  h.a = get_u64(j, "a", 1);
  h.b = get_u64(j, "b", 0);
  h.d = get_u64(j, "d", 1);
  h.c = get_u64(j, "c", UINT64_MAX);
  return h;
}

json hmap_to_json(const HMap& h) {
  return json{{"a", h.a}, {"b", h.b}, {"d", h.d}, {"c", h.c}};
}

}  // namespace

HashSpec hash_spec_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgumentError("hash spec: document must be an object");
  reject_unknown(j, {"modulus", "kind", "h1", "h2", "h3", "h4", "t", "level_cap"},
                 "hash spec");
  if (!j.contains("modulus") || !j.contains("kind"))
    throw InvalidArgumentError("hash spec: 'modulus' and 'kind' are required");

  HashSpec spec;
  spec.modulus = Modulus::of(get_u64(j, "modulus", 0));
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "single")
    spec.kind = HashKind::kSingle;
  else if (kind == "dual")
    spec.kind = HashKind::kDual;
  else if (kind == "iterated")
    spec.kind = HashKind::kIterated;
  else
    throw InvalidArgumentError("hash spec: kind must be single, dual or iterated");

  if (!j.contains("h1") || !j.contains("h2"))
    throw InvalidArgumentError("hash spec: 'h1' and 'h2' are required");
  spec.h1 = hmap_from_json(j.at("h1"), "h1");
  spec.h2 = hmap_from_json(j.at("h2"), "h2");

  if (spec.kind == HashKind::kDual) {
    if (!j.contains("h3") || !j.contains("h4"))
      throw InvalidArgumentError("hash spec: dual kind requires 'h3' and 'h4'");
    spec.h3 = hmap_from_json(j.at("h3"), "h3");
    spec.h4 = hmap_from_json(j.at("h4"), "h4");
  } else if (j.contains("h3") || j.contains("h4")) {
    throw InvalidArgumentError("hash spec: 'h3'/'h4' are only valid for dual kind");
  }

  if (spec.kind == HashKind::kIterated) {
    spec.iterations = get_u64(j, "t", 1);
  } else if (j.contains("t")) {
    throw InvalidArgumentError("hash spec: 't' is only valid for iterated kind");
  }

  uint64_t cap = get_u64(j, "level_cap", kDefaultHashLevelCap);
  if (cap > kMaxLevelCap)
    throw InvalidArgumentError("hash spec: level_cap exceeds supported maximum");
  spec.level_cap = static_cast<uint32_t>(cap);
  validate(spec);
  return spec;
}

json to_json(const HashSpec& spec) {
  json j{{"modulus", spec.modulus.value()},
         {"h1", hmap_to_json(spec.h1)},
         {"h2", hmap_to_json(spec.h2)},
         {"level_cap", spec.level_cap}};
  switch (spec.kind) {
    case HashKind::kSingle:
      j["kind"] = "single";
      break;
    case HashKind::kDual:
      j["kind"] = "dual";
      j["h3"] = hmap_to_json(spec.h3);
      j["h4"] = hmap_to_json(spec.h4);
      break;
    case HashKind::kIterated:
      j["kind"] = "iterated";
      j["t"] = spec.iterations;
      break;
  }
  return j;
}

HashSpec load_hash_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgumentError("hash spec: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InvalidArgumentError(std::string("hash spec: parse error: ") + e.what());
  }
  return hash_spec_from_json(j);
}

}  // namespace ackmod
