#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include "sunlink/engine.hpp"

namespace sunlink {

// Fixed 9-decimal rendering; identical runs must produce byte-identical files.
std::string format_fixed9(double v);

// Open a file for writing, creating parent directories; throws IoError.
std::ofstream open_output(const std::filesystem::path& path);

// Emit summary.csv, events.csv, config.resolved and (when the series was
// recorded) current.csv into out_dir. Every CSV carries the resolved
// configuration digest on its first line.
void write_result(const SimResult& result, const std::filesystem::path& out_dir);

}  // namespace sunlink
