#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sunlink/scenario.hpp"

namespace sunlink {

struct EngineEvent {
    std::string node;  // "tx" or "rx"
    NodeEvent event;
};

struct SimResult {
    long packets_sent = 0;
    long packets_delivered = 0;
    double pdr = 0.0;
    long tx_attempts = 0;
    long tx_failed_under_current = 0;
    long tx_failed_bank_depleted = 0;
    long brownouts = 0;
    long boot_events = 0;
    long boot_loops_detected = 0;

    double energy_harvested_j = 0.0;
    double energy_consumed_j = 0.0;
    double energy_shunted_j = 0.0;
    double energy_stored_delta_j = 0.0;
    double avg_current_ma = 0.0;
    double peak_current_ma = 0.0;

    double duration_s = 0.0;
    double airtime_s = 0.0;      // resolved packet airtime
    double tx_demand_ma = 0.0;   // resolved transmit draw

    std::vector<std::pair<double, double>> current_series;  // (t_s, i_mA)
    std::vector<EngineEvent> event_log;

    nlohmann::json config_echo;
    std::string config_digest;
};

// Deterministic fixed-step simulation of one transmitter/receiver pair.
// Identical scenarios (including seed) produce identical results in every
// field, event ordering included.
SimResult run_scenario(const Scenario& sc);

struct SweepRow {
    double value = 0.0;
    double mean_pdr = 0.0;
    double mean_sent = 0.0;
    double mean_delivered = 0.0;
    double mean_avg_current_ma = 0.0;
    double mean_energy_consumed_j = 0.0;
    std::vector<SimResult> runs;  // one per derived seed
};

// Run per_point_seeds independent runs per value (seeds base+0..base+n-1,
// shared across values so points are paired) and aggregate with arithmetic
// means. Rows keep the order of the input values.
std::vector<SweepRow> sweep(const Scenario& base, const std::string& param_path,
                            const std::vector<double>& values, int per_point_seeds);

// Largest swept value whose mean PDR is >= 0.5; empty when none qualifies.
std::optional<double> max_range_m(const std::vector<SweepRow>& rows);

}  // namespace sunlink
