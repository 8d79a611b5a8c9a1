#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "lqgwalk/sim.hpp"

namespace lqgwalk {

inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitFell = 2 };

struct RunManifest {
    std::string scenario_id;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs; // relative to the output directory
    std::string tool_version = kToolVersion;

    [[nodiscard]] nlohmann::json to_json() const;
};

/// Metrics summary document written next to a simulation log.
nlohmann::json metrics_json(const SimulationResult& result);

nlohmann::json push_limit_json(const PushLimitReport& report);

/// Writes reference.csv, footsteps.csv, reference_{x,y}.svg, manifest.json.
RunManifest cmd_plan(const ScenarioConfig& cfg, const std::filesystem::path& out_dir, bool plots = true);

/// Writes log.csv, metrics.json, planned/executed footstep CSVs, plots and
/// manifest.json. Returns the simulation result.
SimulationResult cmd_simulate(const ScenarioConfig& cfg, const std::filesystem::path& out_dir, bool plots = true,
                              RunManifest* manifest = nullptr);

/// Entry point used by the lqgwalk executable. Never throws.
int run_cli(const std::vector<std::string>& args);

} // namespace lqgwalk
