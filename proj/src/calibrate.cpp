#include "sunlink/calibrate.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sunlink/errors.hpp"

namespace sunlink {

namespace {

double target_error(const CalibrationTarget& t, const ChannelModel& ch) {
    const double sensitivity = named_radio_sensitivity(t.radio);
    const double margin = received_power_mean(ch, t.tx_dbm, t.distance_m) - sensitivity;
    const double err = pdr_analytic(margin, ch.sigma_db) - t.observed_pdr;
    return err * err;
}

std::pair<std::string, std::string> split_once(const std::string& s, char sep,
                                               const std::string& what) {
    const auto pos = s.find(sep);
    if (pos == std::string::npos)
        throw ConfigError("malformed " + what + ": \"" + s + "\"");
    return {s.substr(0, pos), s.substr(pos + 1)};
}

}  // namespace

double named_radio_sensitivity(const std::string& radio) {
    if (radio == "lora") return lora_sensitivity(default_lora());
    if (radio == "cc1101") return default_cc1101().sensitivity_dbm;
    throw ConfigError("unknown radio \"" + radio + "\" (expected lora or cc1101)");
}

CalibrationResult calibrate_channel(const std::vector<CalibrationTarget>& targets,
                                    const GridSpec& grid, const ChannelModel& base) {
    if (targets.empty()) throw ConfigError("calibrate: needs at least one target point");
    if (grid.n_step <= 0.0 || grid.sigma_step <= 0.0 || grid.n_min > grid.n_max ||
        grid.sigma_min > grid.sigma_max)
        throw ConfigError("calibrate: empty or malformed search grid");

    CalibrationResult best;
    bool first = true;
    for (double n = grid.n_min; n <= grid.n_max + 1e-12; n += grid.n_step) {
        for (double sigma = grid.sigma_min; sigma <= grid.sigma_max + 1e-12;
             sigma += grid.sigma_step) {
            ChannelModel ch = base;
            ch.exponent = n;
            ch.sigma_db = sigma;
            double residual = 0.0;
            for (const auto& t : targets) residual += target_error(t, ch);
            // strict < keeps the first (smallest n, then smallest sigma) on ties
            if (first || residual < best.residual) {
                best.channel = ch;
                best.residual = residual;
                first = false;
            }
        }
    }
    return best;
}

GridSpec parse_grid_spec(const std::string& spec) {
    GridSpec grid;
    std::stringstream ss(spec);
    std::string part;
    bool have_n = false, have_sigma = false;
    while (std::getline(ss, part, ',')) {
        const auto [key, range] = split_once(part, '=', "grid spec");
        const auto [lo, rest] = split_once(range, ':', "grid range");
        const auto [step, hi] = split_once(rest, ':', "grid range");
        try {
            if (key == "n") {
                grid.n_min = std::stod(lo);
                grid.n_step = std::stod(step);
                grid.n_max = std::stod(hi);
                have_n = true;
            } else if (key == "sigma") {
                grid.sigma_min = std::stod(lo);
                grid.sigma_step = std::stod(step);
                grid.sigma_max = std::stod(hi);
                have_sigma = true;
            } else {
                throw ConfigError("grid spec: unknown key \"" + key + "\"");
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            throw ConfigError("grid spec: malformed range \"" + part + "\"");
        }
    }
    if (!have_n || !have_sigma)
        throw ConfigError("grid spec must define both n and sigma, e.g. "
                          "\"n=2.0:0.25:4.0,sigma=2:1:10\"");
    return grid;
}

std::vector<CalibrationTarget> load_targets(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open calibration targets: " + path);

    std::vector<CalibrationTarget> targets;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "radio,d_m,tx_dbm,pdr")
                throw ConfigError(path + ":" + std::to_string(line_no) +
                                  ": expected header \"radio,d_m,tx_dbm,pdr\"");
            header_seen = true;
            continue;
        }
        std::stringstream ss(line);
        std::string radio, d, p, pdr;
        if (!std::getline(ss, radio, ',') || !std::getline(ss, d, ',') ||
            !std::getline(ss, p, ',') || !std::getline(ss, pdr))
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 4 fields");
        CalibrationTarget t;
        t.radio = radio;
        try {
            t.distance_m = std::stod(d);
            t.tx_dbm = std::stod(p);
            t.observed_pdr = std::stod(pdr);
        } catch (const std::exception&) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": malformed row");
        }
        named_radio_sensitivity(t.radio);  // validates the radio name
        if (t.observed_pdr < 0.0 || t.observed_pdr > 1.0)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": pdr outside [0, 1]");
        targets.push_back(t);
    }
    if (targets.empty()) throw ConfigError(path + ": no target rows");
    return targets;
}

}  // namespace sunlink
