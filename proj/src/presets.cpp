#include "sunlink/presets.hpp"

#include <filesystem>
#include <fstream>

#include "sunlink/errors.hpp"

namespace sunlink {

namespace {

constexpr const char* kFig8 = R"json({
  "name": "fig8-current-sweep",
  "duration_s": 60,
  "dt_s": 0.001,
  "seed": 7,
  "supply": {"mode": "bench", "current_limit_ma": 200, "voltage_v": 3.7},
  "radio_ufop": {"pass_limit_ma": 120},
  "channel": {"exponent": 2.0, "sigma_db": 2.0},
  "distance_m": 10,
  "notes": [
    "transmit-current comparison bed: sweep radio.tx_power_dbm over the radio's span",
    "current curves beyond their measured anchor points are interpolations",
    "search_idle_ma and receiving_ma are assumed defaults, not measured values"
  ]
})json";

constexpr const char* kFig10Lora = R"json({
  "name": "fig10-nlos-pdr",
  "duration_s": 600,
  "dt_s": 0.005,
  "seed": 42,
  "supply": {"mode": "bench", "current_limit_ma": 200, "voltage_v": 3.7},
  "radio_ufop": {"pass_limit_ma": 120},
  "channel": {"exponent": 3.0, "sigma_db": 6.0},
  "distance_m": 315,
  "notes": [
    "non-LOS delivery-ratio bed; pair with fig10-nlos-pdr-cc1101 under the compare command",
    "route geometry is a modelling choice: the calibrated channel, not a surveyed path"
  ]
})json";

constexpr const char* kFig10Cc1101 = R"json({
  "name": "fig10-nlos-pdr-cc1101",
  "duration_s": 600,
  "dt_s": 0.005,
  "seed": 42,
  "supply": {"mode": "bench", "current_limit_ma": 200, "voltage_v": 3.7},
  "radio_ufop": {"pass_limit_ma": 120},
  "radio": {"type": "cc1101"},
  "channel": {"exponent": 3.0, "sigma_db": 6.0},
  "distance_m": 315,
  "notes": [
    "non-LOS delivery-ratio bed; pair with fig10-nlos-pdr under the compare command",
    "route geometry is a modelling choice: the calibrated channel, not a surveyed path"
  ]
})json";

constexpr const char* kFig11Lora = R"json({
  "name": "fig11-los-range",
  "duration_s": 600,
  "dt_s": 0.005,
  "seed": 42,
  "supply": {"mode": "bench", "current_limit_ma": 200, "voltage_v": 3.7},
  "radio_ufop": {"pass_limit_ma": 120},
  "radio": {"tx_power_dbm": 23},
  "channel": {"exponent": 2.0, "sigma_db": 2.0},
  "distance_m": 1000,
  "compare": {
    "point_m": 1000,
    "distances_m": [250, 500, 750, 1000, 1250, 1500, 2000, 2500, 3000],
    "powers_dbm": [5, 6, 7, 8, 9, 10]
  },
  "notes": [
    "line-of-sight range bed; range is the largest swept distance with PDR >= 0.5",
    "pair with fig11-los-range-cc1101 under the compare command"
  ]
})json";

constexpr const char* kFig11Cc1101 = R"json({
  "name": "fig11-los-range-cc1101",
  "duration_s": 600,
  "dt_s": 0.005,
  "seed": 42,
  "supply": {"mode": "bench", "current_limit_ma": 200, "voltage_v": 3.7},
  "radio_ufop": {"pass_limit_ma": 120},
  "radio": {"type": "cc1101", "tx_power_dbm": 10},
  "channel": {"exponent": 2.0, "sigma_db": 2.0},
  "distance_m": 1000,
  "compare": {
    "point_m": 1000,
    "distances_m": [250, 500, 750, 1000, 1250, 1500, 2000, 2500, 3000],
    "powers_dbm": [5, 6, 7, 8, 9, 10]
  },
  "notes": [
    "line-of-sight range bed; range is the largest swept distance with PDR >= 0.5",
    "pair with fig11-los-range under the compare command"
  ]
})json";

constexpr const char* kSec631 = R"json({
  "name": "sec631-bench-16mA",
  "duration_s": 60,
  "dt_s": 0.0005,
  "seed": 11,
  "supply": {"mode": "bench", "current_limit_ma": 16, "voltage_v": 3.7},
  "channel": {"exponent": 2.0, "sigma_db": 2.0},
  "distance_m": 10,
  "notes": [
    "bench supply clipped to 16 mA against the 15.6 mA transmit peak at 5 dBm"
  ]
})json";

constexpr const char* kSec632 = R"json({
  "name": "sec632-panel-count",
  "duration_s": 600,
  "dt_s": 0.0005,
  "seed": 12,
  "supply": {"mode": "harvested"},
  "harvest": {"kind": "constant", "constant_ma": 70, "scale": 1, "irradiance": 0.05},
  "channel": {"exponent": 2.0, "sigma_db": 2.0},
  "distance_m": 10,
  "notes": [
    "indoor single-panel bed; override harvest.scale to change the panel count",
    "irradiance 0.05 is an assumed indoor factor, not a measured value"
  ]
})json";

constexpr const char* kSec81Cap = R"json({
  "name": "sec81-capacitor-sizing",
  "duration_s": 60,
  "dt_s": 0.001,
  "seed": 13,
  "supply": {"mode": "harvested"},
  "harvest": {"kind": "constant", "constant_ma": 70, "scale": 3, "irradiance": 1.0},
  "radio_ufop": {"charge_while_gated": false},
  "channel": {"exponent": 2.0, "sigma_db": 2.0},
  "distance_m": 10,
  "notes": [
    "radio bank must carry each packet alone: charging is cut while the gate is closed",
    "override radio_ufop.capacitance_uf to explore bank sizing"
  ]
})json";

constexpr const char* kSec81Clip = R"json({
  "name": "sec81-current-clip",
  "duration_s": 60,
  "dt_s": 0.001,
  "seed": 14,
  "supply": {"mode": "harvested"},
  "harvest": {"kind": "constant", "constant_ma": 70, "scale": 3, "irradiance": 1.0},
  "radio": {"tx_power_dbm": 17},
  "channel": {"exponent": 2.0, "sigma_db": 2.0},
  "distance_m": 10,
  "notes": [
    "transmit demand (55 mA at 17 dBm) sits above the 20 mA pass limit",
    "override radio_ufop.pass_limit_ma to lift the clip"
  ]
})json";

// Analytic delivery ratios of the shipped non-LOS channel (exponent 3,
// sigma 6 dB) at 5 dBm; the calibration grid search recovers that channel.
constexpr const char* kTargetsCsv =
    "radio,d_m,tx_dbm,pdr\n"
    "lora,160,5,1.000000000\n"
    "cc1101,160,5,0.998390785\n"
    "lora,315,5,0.999999513\n"
    "cc1101,315,5,0.929909038\n"
    "lora,470,5,0.999971873\n"
    "cc1101,470,5,0.727801513\n";

}  // namespace

const std::vector<std::pair<std::string, std::string>>& builtin_presets() {
    static const std::vector<std::pair<std::string, std::string>> presets = {
        {"fig8-current-sweep", kFig8},
        {"fig10-nlos-pdr", kFig10Lora},
        {"fig10-nlos-pdr-cc1101", kFig10Cc1101},
        {"fig11-los-range", kFig11Lora},
        {"fig11-los-range-cc1101", kFig11Cc1101},
        {"sec631-bench-16mA", kSec631},
        {"sec632-panel-count", kSec632},
        {"sec81-capacitor-sizing", kSec81Cap},
        {"sec81-current-clip", kSec81Clip},
    };
    return presets;
}

std::string calibration_targets_csv() { return kTargetsCsv; }

nlohmann::json resolve_scenario_ref(const std::string& ref, std::string* base_dir_out) {
    namespace fs = std::filesystem;
    if (fs::exists(ref) && fs::is_regular_file(ref)) {
        std::ifstream in(ref);
        if (!in) throw ConfigError("cannot open scenario file: " + ref);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError("scenario file " + ref + ": " + e.what());
        }
        if (base_dir_out) {
            const std::string dir = fs::path(ref).parent_path().string();
            *base_dir_out = dir.empty() ? "." : dir;
        }
        return j;
    }

    std::string name = fs::path(ref).filename().string();
    if (name.size() > 5 && name.ends_with(".json")) name.resize(name.size() - 5);
    for (const auto& [preset_name, text] : builtin_presets()) {
        if (preset_name == name) {
            if (base_dir_out) *base_dir_out = ".";
            return nlohmann::json::parse(text);
        }
    }

    std::string msg = "no such scenario file or preset: " + ref + "\navailable presets:";
    for (const auto& [preset_name, text] : builtin_presets()) msg += "\n  " + preset_name;
    throw ConfigError(msg);
}

int write_preset_files(const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    int written = 0;
    for (const auto& [name, text] : builtin_presets()) {
        const fs::path path = fs::path(dir) / (name + ".json");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write " + path.string());
        out << nlohmann::json::parse(text).dump(2) << "\n";
        ++written;
    }
    const fs::path targets = fs::path(dir) / "calib-nlos-targets.csv";
    std::ofstream out(targets, std::ios::binary);
    if (!out) throw IoError("cannot write " + targets.string());
    out << kTargetsCsv;
    return written + 1;
}

}  // namespace sunlink
