#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace sunlink {

// Built-in scenario presets, one per reproduced experiment.
const std::vector<std::pair<std::string, std::string>>& builtin_presets();

// Shipped non-LOS calibration target file content (CSV).
std::string calibration_targets_csv();

// Resolve a scenario reference: an existing file path wins; otherwise the
// basename (with any .json extension stripped) must name a built-in preset.
// base_dir_out receives the directory for relative trace paths.
nlohmann::json resolve_scenario_ref(const std::string& ref, std::string* base_dir_out);

// Write every preset plus the calibration targets into dir; returns the
// number of files written.
int write_preset_files(const std::string& dir);

}  // namespace sunlink
