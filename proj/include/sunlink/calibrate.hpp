#pragma once

#include <string>
#include <vector>

#include "sunlink/phy.hpp"

namespace sunlink {

// One observed operating point: a named radio ("lora" or "cc1101"), a
// distance, a transmit power and the packet delivery ratio seen there.
struct CalibrationTarget {
    std::string radio;
    double distance_m = 0.0;
    double tx_dbm = 0.0;
    double observed_pdr = 0.0;
};

struct GridSpec {
    double n_min = 2.0, n_step = 0.25, n_max = 4.0;
    double sigma_min = 2.0, sigma_step = 1.0, sigma_max = 10.0;
};

struct CalibrationResult {
    ChannelModel channel;
    double residual = 0.0;  // sum of squared PDR errors at the optimum
};

// Grid search over (exponent, sigma) minimising the sum of squared analytic
// PDR errors; ties break toward the smaller exponent, then the smaller sigma.
// The base channel supplies d0, pl0 and the antenna gains.
CalibrationResult calibrate_channel(const std::vector<CalibrationTarget>& targets,
                                    const GridSpec& grid, const ChannelModel& base);

// Sensitivity of a named default radio ("lora" or "cc1101").
double named_radio_sensitivity(const std::string& radio);

// Parse "n=min:step:max,sigma=min:step:max".
GridSpec parse_grid_spec(const std::string& spec);

// CSV with header "radio,d_m,tx_dbm,pdr".
std::vector<CalibrationTarget> load_targets(const std::string& path);

}  // namespace sunlink
