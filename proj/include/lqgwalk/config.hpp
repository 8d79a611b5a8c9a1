#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "lqgwalk/sim.hpp"

namespace lqgwalk {

/// Reads a scenario document. ".json" files are parsed as JSON, anything
/// else as YAML. Missing keys take the ScenarioConfig defaults; unknown keys
/// are rejected. Throws std::runtime_error with the offending key path.
ScenarioConfig load_scenario_config(const std::filesystem::path& path);

ScenarioConfig scenario_from_json(const nlohmann::json& doc);

/// Fully-resolved document; keys sorted, so dump() is canonical.
nlohmann::json scenario_to_json(const ScenarioConfig& cfg);

/// 16 hex digits (FNV-1a 64) of the canonical document.
std::string config_hash(const ScenarioConfig& cfg);

/// Parses YAML text into JSON (plain scalars typed as bool/int/float/null).
nlohmann::json yaml_to_json(const std::string& text);

std::string to_string(PushDirection direction);
PushDirection parse_direction(const std::string& text);

} // namespace lqgwalk
