// Command-line front end: evaluation, dynamics, statistics, hashing and
// experiment reproduction with machine-readable outputs.
//
// Exit codes: 0 success, 1 evaluator cross-check mismatch, 2 usage error,
// 3 infeasible size.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ackmod/ackermann.hpp"
#include "ackmod/analysis.hpp"
#include "ackmod/errors.hpp"
#include "ackmod/funcgraph.hpp"
#include "ackmod/hashlab.hpp"
#include "ackmod/json_io.hpp"

namespace {

using namespace ackmod;

// Thrown when the fast path disagrees with the literal oracle.
struct MismatchExit {
  std::string message;
};

std::string fmt_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Outputs are assembled in memory and written in one shot so that failed
// commands never leave partial files behind.
void emit(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InvalidArgumentError("cannot open output file '" + out_path + "'");
  out << content;
}

DomainSpec parse_domain(const std::string& text, uint64_t seed) {
  if (text == "full") return DomainSpec::full();
  if (text.rfind("sample:", 0) == 0) {
    uint64_t count = 0;
    try {
      count = std::stoull(text.substr(7));
    } catch (const std::exception&) {
      throw InvalidArgumentError("bad sample count in --domain");
    }
    return DomainSpec::sample(count, seed);
  }
  auto dots = text.find("..");
  if (dots != std::string::npos) {
    try {
      uint64_t lo = std::stoull(text.substr(0, dots));
      uint64_t hi = std::stoull(text.substr(dots + 2));
      return DomainSpec::range(lo, hi);
    } catch (const std::exception&) {
      throw InvalidArgumentError("bad range endpoints in --domain");
    }
  }
  throw InvalidArgumentError("--domain must be full, A..B or sample:S");
}

// --map level:M | tetration | shifted3 | affine:A,B
SelfMap parse_map(const Modulus& modulus, const std::string& text, uint32_t level_cap) {
  if (text == "tetration") return SelfMap::tetration(modulus);
  if (text == "shifted3") return SelfMap::shifted_exp(modulus);
  if (text.rfind("level:", 0) == 0) {
    uint32_t m = 0;
    try {
      m = static_cast<uint32_t>(std::stoul(text.substr(6)));
    } catch (const std::exception&) {
      throw InvalidArgumentError("bad level in --map");
    }
    Evaluator ev(modulus, std::max(level_cap, m <= kMaxLevelCap ? m : level_cap));
    return as_self_map(ev.table(m));  // shares the table's values
  }
  if (text.rfind("affine:", 0) == 0) {
    auto comma = text.find(',', 7);
    if (comma == std::string::npos)
      throw InvalidArgumentError("--map affine needs two parameters: affine:A,B");
    try {
      uint64_t a = std::stoull(text.substr(7, comma - 7));
      uint64_t b = std::stoull(text.substr(comma + 1));
      return SelfMap::affine(modulus, a, b);
    } catch (const std::exception&) {
      throw InvalidArgumentError("bad affine parameters in --map");
    }
  }
  throw InvalidArgumentError("--map must be level:M, tetration, shifted3 or affine:A,B");
}

// Options shared across subcommands. format is resolved per command so each
// one keeps its natural default.
struct CommonOpts {
  uint64_t modulus = 0;
  std::string out;
  std::string format;
  uint64_t seed = 0;
  uint32_t level_cap = kDefaultLevelCap;

  std::string fmt(const char* fallback) const { return format.empty() ? fallback : format; }
};

void cmd_eval(const CommonOpts& o, uint32_t level, uint64_t arg, const std::string& method) {
  Modulus mod = Modulus::of(o.modulus);
  if (method == "fast") {
    emit(std::to_string(fast_eval(mod, level, arg, o.level_cap)) + "\n", o.out);
    return;
  }
  // reference and both double-check the fast path against the literal oracle
  uint64_t ref = reference_eval(mod, level, arg);
  uint64_t fast = fast_eval(mod, level, arg, o.level_cap);
  if (ref != fast) {
    MismatchExit e;
    e.message = "evaluator mismatch: reference=" + std::to_string(ref) +
                " fast=" + std::to_string(fast);
    throw e;
  }
  emit(std::to_string(ref) + "\n", o.out);
}

void cmd_table(const CommonOpts& o, uint32_t level) {
  LevelTable t = build_level_table(Modulus::of(o.modulus), level, o.level_cap);
  emit(table_csv(t), o.out);
}

void cmd_orbit(const CommonOpts& o, const std::string& map_text, uint64_t start,
               uint64_t cycle_cap) {
  Modulus mod = Modulus::of(o.modulus);
  SelfMap map = parse_map(mod, map_text, o.level_cap);
  OrbitSummary s = orbit_summary(map, start, cycle_cap);

  if (o.fmt("text") == "json") {
    nlohmann::json j = to_json(s);
    nlohmann::json path = nlohmann::json::array();
    uint64_t node = start;
    for (uint64_t i = 0; i <= s.preperiod && i <= cycle_cap; ++i) {
      path.push_back(node);
      node = map(node);
    }
    j["path"] = path;
    j["map_descriptor"] = map.descriptor();
    j["modulus"] = mod.value();
    emit(j.dump(2) + "\n", o.out);
    return;
  }
  std::ostringstream line;
  uint64_t node = start;
  for (uint64_t i = 0; i <= s.preperiod && i <= cycle_cap; ++i) {
    if (i > 0) line << ' ';
    line << node;
    node = map(node);
  }
  if (s.preperiod > cycle_cap) line << " ...";
  line << " (";
  for (size_t i = 0; i < s.cycle_members.size(); ++i) {
    if (i > 0) line << ' ';
    line << s.cycle_members[i];
  }
  if (s.cycle_truncated) line << " ...";
  line << ")\n";
  line << "preperiod=" << s.preperiod << " period=" << s.period << "\n";
  emit(line.str(), o.out);
}

void cmd_graph(const CommonOpts& o, const std::string& map_text) {
  Modulus mod = Modulus::of(o.modulus);
  FunctionalGraph g = build_graph(parse_map(mod, map_text, o.level_cap));
  if (o.fmt("json") == "csv") {
    std::ostringstream out;
    out << "length,representative,component_size\n";
    for (const CycleInfo& c : g.cycles())
      out << c.length << ',' << c.representative << ',' << c.component_size << '\n';
    emit(out.str(), o.out);
    return;
  }
  emit(census_json(g).dump(2) + "\n", o.out);
}

// Shared by stats and avalanche: the evaluation function plus a descriptor.
struct Source {
  EvalFn fn;
  std::string descriptor;
  std::unique_ptr<Evaluator> evaluator;  // keeps level tables alive
};

Source make_source(const Modulus& mod, const std::string& level_text,
                   const std::string& map_text, uint32_t level_cap) {
  if (!level_text.empty() && !map_text.empty())
    throw InvalidArgumentError("--level and --map are mutually exclusive");
  Source s;
  if (!level_text.empty()) {
    uint32_t m = 0;
    try {
      m = static_cast<uint32_t>(std::stoul(level_text));
    } catch (const std::exception&) {
      throw InvalidArgumentError("bad --level");
    }
    s.evaluator = std::make_unique<Evaluator>(
        mod, std::max(level_cap, m <= kMaxLevelCap ? m : level_cap));
    s.fn = evaluator_fn(*s.evaluator, m);
    s.descriptor = "level:" + std::to_string(m);
  } else if (!map_text.empty()) {
    SelfMap map = parse_map(mod, map_text, level_cap);
    s.descriptor = map.descriptor();
    s.fn = self_map_fn(map);
  } else {
    throw InvalidArgumentError("one of --level or --map is required");
  }
  return s;
}

void cmd_stats(const CommonOpts& o, const std::string& level_text,
               const std::string& map_text, const std::string& domain_text) {
  Modulus mod = Modulus::of(o.modulus);
  Source src = make_source(mod, level_text, map_text, o.level_cap);
  DomainSpec domain = parse_domain(domain_text, o.seed);
  StatsReport r = output_distribution(src.fn, mod, domain, src.descriptor);
  if (mod.is_pow2()) r.avalanche = avalanche_all(src.fn, mod, domain);
  if (o.fmt("json") == "csv") {
    emit(histogram_csv(r), o.out);
    return;
  }
  emit(to_json(r).dump(2) + "\n", o.out);
}

void cmd_avalanche(const CommonOpts& o, const std::string& level_text,
                   const std::string& map_text, const std::string& domain_text,
                   const std::string& neighbor_text) {
  Modulus mod = Modulus::of(o.modulus);
  Source src = make_source(mod, level_text, map_text, o.level_cap);
  DomainSpec domain = parse_domain(domain_text, o.seed);

  if (neighbor_text == "all") {
    AvalancheSet set = avalanche_all(src.fn, mod, domain);
    nlohmann::json j{{"schema_version", kSchemaVersion},
                     {"modulus", mod.value()},
                     {"level_or_map", src.descriptor},
                     {"xor1", set.xor1},
                     {"succ", set.succ},
                     {"per_bit", set.per_bit}};
    emit(j.dump(2) + "\n", o.out);
    return;
  }
  Neighbor nb = Neighbor::kXor1;
  uint32_t bit = 0;
  if (neighbor_text == "xor1") {
    nb = Neighbor::kXor1;
  } else if (neighbor_text == "succ") {
    nb = Neighbor::kSucc;
  } else if (neighbor_text.rfind("bit:", 0) == 0) {
    nb = Neighbor::kBit;
    try {
      bit = static_cast<uint32_t>(std::stoul(neighbor_text.substr(4)));
    } catch (const std::exception&) {
      throw InvalidArgumentError("bad bit index in --neighbor");
    }
  } else {
    throw InvalidArgumentError("--neighbor must be xor1, succ, bit:J or all");
  }
  double a = avalanche(src.fn, mod, nb, domain, bit);
  if (o.fmt("text") == "json") {
    nlohmann::json j{{"schema_version", kSchemaVersion},
                     {"modulus", mod.value()},
                     {"level_or_map", src.descriptor},
                     {"neighbor", neighbor_text},
                     {"coefficient", a}};
    emit(j.dump(2) + "\n", o.out);
    return;
  }
  emit(fmt_g6(a) + "\n", o.out);
}

void cmd_hash(const CommonOpts& o, const std::string& spec_path, const std::string& input,
              const std::string& scan) {
  HashSpec spec = load_hash_spec(spec_path);
  Hasher hasher(spec);
  if (!input.empty() && !scan.empty())
    throw InvalidArgumentError("--input and --scan are mutually exclusive");
  if (!input.empty()) {
    uint64_t x = 0;
    try {
      x = std::stoull(input);
    } catch (const std::exception&) {
      throw InvalidArgumentError("bad --input");
    }
    emit(std::to_string(hasher(x)) + "\n", o.out);
    return;
  }
  if (scan.empty()) throw InvalidArgumentError("one of --input or --scan is required");
  auto dots = scan.find("..");
  if (dots == std::string::npos) throw InvalidArgumentError("--scan expects a range A..B");
  uint64_t lo = 0, hi = 0;
  try {
    lo = std::stoull(scan.substr(0, dots));
    hi = std::stoull(scan.substr(dots + 2));
  } catch (const std::exception&) {
    throw InvalidArgumentError("bad --scan endpoints");
  }
  if (lo > hi) throw InvalidArgumentError("--scan range is empty");
  if (hi - lo >= kMaxDomainSize) throw InfeasibleSizeError("--scan range larger than 2^26");
  if (o.fmt("csv") == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (uint64_t x = lo;; ++x) {
      rows.push_back({{"x", x}, {"value", hasher(x)}});
      if (x == hi) break;
    }
    nlohmann::json j{{"schema_version", kSchemaVersion}, {"results", rows}};
    emit(j.dump(2) + "\n", o.out);
    return;
  }
  std::ostringstream out;
  out << "x,value\n";
  for (uint64_t x = lo;; ++x) {
    out << x << ',' << hasher(x) << '\n';
    if (x == hi) break;
  }
  emit(out.str(), o.out);
}

void cmd_tetration_check(const CommonOpts& o, uint32_t k) {
  TetrationReport r = tetration_check(k);
  emit(to_json(r).dump(2) + "\n", o.out);
}

void cmd_reproduce(const CommonOpts& o, const std::string& experiment,
                   const std::string& out_dir) {
  if (experiment != "table1")
    throw InvalidArgumentError("unknown experiment '" + experiment + "'");
  if (out_dir.empty()) throw InvalidArgumentError("--out directory is required");

  std::ostringstream csv;
  csv << "# experiment: table1\n";
  csv << "# semantics: every intermediate value is reduced mod N at each recursion step\n";
  csv << "# domains: m=3 over the full ring [0, 2^k); m=4 over [0, 50]\n";
  csv << "# neighbors: xor1 = x^1; succ = x+1 on the unreduced input (no wraparound)\n";
  csv << "# deviation: dev_max_abs = max_v |count(v) - S/N|; dev_max_norm = dev_max_abs * N / S\n";
  csv << "# seed: " << o.seed << "\n";
  csv << "m,k,dev_max_abs,dev_max_norm,avalanche_xor1,avalanche_succ\n";
  for (uint32_t m : {3u, 4u}) {
    for (uint32_t k : {8u, 10u, 12u}) {
      Modulus mod = Modulus::of(uint64_t{1} << k);
      Evaluator ev(mod);
      EvalFn f = evaluator_fn(ev, m);
      DomainSpec domain = m == 3 ? DomainSpec::full() : DomainSpec::range(0, 50);
      StatsReport stats = output_distribution(f, mod, domain, "level:" + std::to_string(m));
      double ax = avalanche(f, mod, Neighbor::kXor1, domain);
      double as = avalanche(f, mod, Neighbor::kSucc, domain);
      csv << m << ',' << k << ',' << fmt_g6(stats.dev_max_abs) << ','
          << fmt_g6(stats.dev_max_norm) << ',' << fmt_g6(ax) << ',' << fmt_g6(as) << '\n';
    }
  }

  std::filesystem::create_directories(out_dir);
  std::string path = (std::filesystem::path(out_dir) / "table1.csv").string();
  emit(csv.str(), path);
  std::cout << path << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modular Ackermann hierarchy toolkit"};
  app.require_subcommand(1);

  CommonOpts common;
  uint32_t level = 0;
  uint64_t arg = 0;
  std::string method = "fast";
  std::string map_text, level_text, domain_text = "full", neighbor_text = "xor1";
  uint64_t start = 0, cycle_cap = 64;
  uint32_t k = 4;
  std::string spec_path, input_text, scan_text;
  std::string experiment = "table1";

  auto add_common = [&](CLI::App* cmd, bool needs_modulus = true) {
    if (needs_modulus)
      cmd->add_option("--modulus", common.modulus, "ring size N >= 2")->required();
    cmd->add_option("--out", common.out, "output file (default: stdout)");
    cmd->add_option("--format", common.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    cmd->add_option("--seed", common.seed, "seed for sample-mode domains");
    cmd->add_option("--level-cap", common.level_cap, "maximum hierarchy level");
    return cmd;
  };

  CLI::App* eval = add_common(app.add_subcommand("eval", "evaluate A_N(m, n)"));
  eval->add_option("--level", level, "hierarchy level m")->required();
  eval->add_option("--arg", arg, "argument n")->required();
  eval->add_option("--method", method, "fast | reference | both")
      ->check(CLI::IsMember({"fast", "reference", "both"}));
  eval->callback([&] { cmd_eval(common, level, arg, method); });

  CLI::App* table =
      add_common(app.add_subcommand("table", "export a full level table as CSV"));
  table->add_option("--level", level, "hierarchy level m")->required();
  table->callback([&] { cmd_table(common, level); });

  CLI::App* orbit =
      add_common(app.add_subcommand("orbit", "orbit of a start point under a self-map"));
  orbit->add_option("--map", map_text, "level:M | tetration | shifted3 | affine:A,B")
      ->required();
  orbit->add_option("--start", start, "starting residue")->required();
  orbit->add_option("--cycle-cap", cycle_cap, "cycle members to list");
  orbit->callback([&] { cmd_orbit(common, map_text, start, cycle_cap); });

  CLI::App* graph =
      add_common(app.add_subcommand("graph", "tail/cycle census of a self-map"));
  graph->add_option("--map", map_text, "level:M | tetration | shifted3 | affine:A,B")
      ->required();
  graph->callback([&] { cmd_graph(common, map_text); });

  CLI::App* stats = add_common(
      app.add_subcommand("stats", "output histogram and uniformity metrics"));
  stats->add_option("--level", level_text, "hierarchy level m");
  stats->add_option("--map", map_text, "self-map spec");
  stats->add_option("--domain", domain_text, "full | A..B | sample:S");
  stats->callback([&] { cmd_stats(common, level_text, map_text, domain_text); });

  CLI::App* aval =
      add_common(app.add_subcommand("avalanche", "bit-sensitivity coefficient"));
  aval->add_option("--level", level_text, "hierarchy level m");
  aval->add_option("--map", map_text, "self-map spec");
  aval->add_option("--domain", domain_text, "full | A..B | sample:S");
  aval->add_option("--neighbor", neighbor_text, "xor1 | succ | bit:J | all");
  aval->callback(
      [&] { cmd_avalanche(common, level_text, map_text, domain_text, neighbor_text); });

  CLI::App* hash = add_common(
      app.add_subcommand("hash", "evaluate a depth-dependent hash spec"), false);
  hash->add_option("--spec", spec_path, "hash spec JSON file")->required();
  hash->add_option("--input", input_text, "single input value");
  hash->add_option("--scan", scan_text, "input range A..B");
  hash->callback([&] { cmd_hash(common, spec_path, input_text, scan_text); });

  CLI::App* tet = add_common(
      app.add_subcommand("tetration-check",
                         "measure 2^x mod 2^k dynamics against the claimed bounds"),
      false);
  tet->add_option("--k", k, "exponent of the modulus 2^k")->required();
  tet->callback([&] { cmd_tetration_check(common, k); });

  CLI::App* rep = add_common(
      app.add_subcommand("reproduce", "rerun a packaged experiment grid"), false);
  rep->add_option("--experiment", experiment, "experiment id (table1)");
  rep->callback([&] { cmd_reproduce(common, experiment, common.out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help and friends
    app.exit(e);
    return 2;
  } catch (const MismatchExit& e) {
    std::cerr << e.message << "\n";
    return 1;
  } catch (const InfeasibleSizeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
