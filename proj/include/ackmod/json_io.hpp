#pragma once

// Serialization for the stable on-disk/CLI formats. Kept out of the core
// headers so the math modules do not pull in the JSON dependency.

#include <string>

#include <json.hpp>

#include "ackmod/ackermann.hpp"
#include "ackmod/analysis.hpp"
#include "ackmod/funcgraph.hpp"
#include "ackmod/hashlab.hpp"

namespace ackmod {

inline constexpr int kSchemaVersion = 1;

/// Graph census: modulus, map descriptor, cycles with component sizes,
/// max preperiod and the preperiod histogram.
nlohmann::json census_json(const FunctionalGraph& graph);

nlohmann::json to_json(const TetrationReport& report);

nlohmann::json to_json(const StatsReport& report);
/// `value,count` rows, sorted by value.
std::string histogram_csv(const StatsReport& report);

nlohmann::json to_json(const OrbitSummary& summary);

nlohmann::json to_json(const LevelCycleStats& stats);

/// `n,value` rows for a whole table.
std::string table_csv(const LevelTable& table);

/// Strict HashSpec codec: unknown fields are rejected, h-map subfields
/// default to {a=1, b=0, d=1, c=2^64-1}.
HashSpec hash_spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const HashSpec& spec);
HashSpec load_hash_spec(const std::string& path);

}  // namespace ackmod
