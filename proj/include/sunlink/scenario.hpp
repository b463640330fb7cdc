#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sunlink/energy.hpp"
#include "sunlink/node.hpp"
#include "sunlink/phy.hpp"

namespace sunlink {

struct SupplyConfig {
    enum class Mode { Harvested, Bench };
    Mode mode = Mode::Harvested;
    double current_limit_ma = 16.0;  // bench PSU current limit
    double voltage_v = 3.7;          // bench PSU voltage setpoint
};

struct BootLoopConfig {
    int k = 3;
    double window_s = 60.0;
};

// Settings consumed by the compare command.
struct CompareConfig {
    double point_m = 315.0;  // distance at which the headline delta is printed
    std::vector<double> distances_m;
    std::vector<double> powers_dbm;
    int curve_seeds = 4;
    double curve_duration_s = 600.0;
    int point_seeds = 8;
    double point_duration_s = 4500.0;
};

struct Scenario {
    std::string name = "default";
    double duration_s = 60.0;
    double dt_s = 0.001;
    std::uint64_t seed = 1;
    SupplyConfig supply;
    HarvestProfile harvest;
    CapacitorState main_cap;
    HysteresisComparator comparator;
    double rail_level_v = 3.3;
    UfopUnit radio_ufop;
    UfopUnit sensor_ufop;
    RadioModel radio;
    ChannelModel channel;
    double distance_m = 315.0;
    double duty_period_s = 10.0;
    int payload_len = 20;
    CurrentBudget budget;
    BootLoopConfig boot_loop;
    bool receiver_powered = true;
    bool record_current = false;
    CompareConfig compare;

    // Full configuration with every default materialized; what sweep mutates
    // and what config.resolved echoes.
    nlohmann::json resolved;
};

// Skeleton with every key present at its default value. radio_type selects
// the radio block layout ("lora" or "cc1101").
nlohmann::json default_scenario_json(const std::string& radio_type = "lora");

// Merge user JSON over the defaults, reject unknown keys, validate every
// field (all violations reported together), and build the resolved echo.
// base_dir resolves relative harvest trace paths.
Scenario scenario_from_json(const nlohmann::json& user, const std::string& base_dir = ".");

// Load and resolve a scenario file.
Scenario load_scenario_file(const std::string& path,
                            const std::vector<std::string>& set_overrides = {},
                            std::optional<std::uint64_t> seed_override = {});

// Parse a harvest trace CSV (header "t_s,i_mA", rows sorted by time).
HarvestProfile load_trace(const std::string& path);

// Apply one "dotted.path=value" override onto a scenario JSON document.
void apply_set_override(nlohmann::json& j, const std::string& assignment);

// Set a numeric leaf by dotted path; throws ConfigError naming valid numeric
// paths when the path does not resolve.
void set_numeric_path(nlohmann::json& j, const std::string& path, double value);

// All dotted paths of numeric leaves in a document.
std::vector<std::string> numeric_paths(const nlohmann::json& j);

// FNV-1a 64 digest of a configuration document, as fixed-width hex.
std::string config_digest(const nlohmann::json& j);

}  // namespace sunlink
