#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sunlink/calibrate.hpp"
#include "sunlink/engine.hpp"

namespace sunlink {

struct CommonOpts {
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;  // key.path=value overrides
};

// Resolve a scenario reference (file or preset) with --set/--seed applied.
Scenario load_scenario_ref(const std::string& ref, const CommonOpts& opts);

// "a,b,c" or "start:step:stop" (inclusive).
std::vector<double> parse_values_spec(const std::string& spec);

struct CompareReport {
    std::vector<double> distances_m;
    std::vector<double> pdr_a;
    std::vector<double> pdr_b;
    std::vector<double> powers_dbm;                 // intersection of legal spans
    std::vector<std::optional<double>> range_a_m;   // per power
    std::vector<std::optional<double>> range_b_m;
    double point_m = 0.0;
    double point_pdr_a = 0.0;
    double point_pdr_b = 0.0;
    double point_delta = 0.0;  // a - b at the comparison point
};

// Distance sweeps for both scenarios plus a higher-precision evaluation at
// the configured comparison point. Scenarios must differ only inside their
// radio blocks (name and notes aside).
CompareReport compare_core(const Scenario& a, const Scenario& b);

int cmd_run(const std::string& scenario_ref, const CommonOpts& opts);
int cmd_sweep(const std::string& scenario_ref, const std::string& param_path,
              const std::string& values_spec, int per_point_seeds, const CommonOpts& opts);
int cmd_compare(const std::string& ref_a, const std::string& ref_b, const CommonOpts& opts);
int cmd_calibrate(const std::string& targets_path, const std::string& grid_spec,
                  const CommonOpts& opts);
int cmd_feasibility(const std::string& scenario_ref, const CommonOpts& opts);
int cmd_presets(const std::string& out_dir);

}  // namespace sunlink
