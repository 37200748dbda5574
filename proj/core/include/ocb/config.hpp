#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "ocb/params.hpp"

namespace ocb {

// Everything a run needs, merged in order: built-in defaults, preset,
// config file, command-line flags.
struct RunConfig {
  std::string preset = "default";
  DatabaseParams database;
  WorkloadParams workload;
  StoreConfig store;
  ClusteringConfig clustering;
  std::int32_t replicate = 1;

  std::filesystem::path output_dir = ".";
  std::optional<std::filesystem::path> base_path;          // reuse a saved snapshot
  std::optional<std::filesystem::path> trace_path;         // page I/O log
  std::optional<std::filesystem::path> transaction_trace;  // one line per transaction

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Throws ConfigError on the first violated constraint.
void validate(const RunConfig& config);

// Canonical JSON forms. Distributions serialize as "uniform",
// {"uniform": [lo, hi]}, {"constant": v} or {"table": [[v, count], ...]}.
nlohmann::json to_json(const Distribution& dist);
nlohmann::json to_json(const DatabaseParams& params);
nlohmann::json to_json(const WorkloadParams& params);
nlohmann::json to_json(const StoreConfig& config);
nlohmann::json to_json(const ClusteringConfig& config);
nlohmann::json to_json(const RunConfig& config);

Distribution distribution_from_json(const nlohmann::json& j);
DatabaseParams database_from_json(const nlohmann::json& j);

// Overlays a configuration document onto `config`. Numeric fields accept
// integers or expression strings over "subparams" (plus NC and NO once
// known). Unknown keys are rejected with ConfigError.
void apply_json(const nlohmann::json& doc, RunConfig& config);

// Reads and overlays a JSON config file; a "preset" key is resolved first.
void apply_config_file(const std::filesystem::path& path, RunConfig& config);

}  // namespace ocb
