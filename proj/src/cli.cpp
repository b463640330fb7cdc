#include "sunlink/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

#include "sunlink/errors.hpp"
#include "sunlink/output.hpp"
#include "sunlink/presets.hpp"

namespace sunlink {

namespace {

int guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

void diff_paths(const nlohmann::json& a, const nlohmann::json& b, const std::string& prefix,
                std::vector<std::string>& out) {
    if (a.is_object() && b.is_object()) {
        for (const auto& [key, value] : a.items()) {
            const std::string path = prefix.empty() ? key : prefix + "." + key;
            if (!b.contains(key)) out.push_back(path);
            else diff_paths(value, b.at(key), path, out);
        }
        for (const auto& [key, value] : b.items())
            if (!a.contains(key)) out.push_back(prefix.empty() ? key : prefix + "." + key);
        return;
    }
    if (a != b) out.push_back(prefix);
}

// Scenarios compared against each other may differ only in their radio
// blocks; name and notes are labels, not physics.
void check_comparable(const Scenario& a, const Scenario& b) {
    nlohmann::json da = a.resolved;
    nlohmann::json db = b.resolved;
    for (const char* key : {"radio", "name", "notes"}) {
        da.erase(key);
        db.erase(key);
    }
    std::vector<std::string> diverging;
    diff_paths(da, db, "", diverging);
    if (!diverging.empty()) {
        std::string msg = "compare: scenarios differ outside the radio block:";
        for (const auto& p : diverging) msg += "\n  " + p;
        throw ConfigError(msg);
    }
}

Scenario with_overrides(const Scenario& base,
                        const std::vector<std::pair<std::string, double>>& numeric,
                        std::optional<double> duration = {}) {
    nlohmann::json doc = base.resolved;
    for (const auto& [path, value] : numeric) set_numeric_path(doc, path, value);
    if (duration) doc["duration_s"] = *duration;
    return scenario_from_json(doc);
}

bool power_legal(const Scenario& sc, double power_dbm) {
    try {
        with_overrides(sc, {{"radio.tx_power_dbm", power_dbm}});
        return true;
    } catch (const ConfigError&) {
        return false;
    }
}

double mean_pdr_at(const Scenario& sc, double distance_m, int seeds, double duration_s) {
    const Scenario variant = with_overrides(sc, {}, duration_s);
    const auto rows = sweep(variant, "distance_m", {distance_m}, seeds);
    return rows.front().mean_pdr;
}

}  // namespace

Scenario load_scenario_ref(const std::string& ref, const CommonOpts& opts) {
    std::string base_dir;
    nlohmann::json user = resolve_scenario_ref(ref, &base_dir);
    for (const auto& assignment : opts.sets) apply_set_override(user, assignment);
    if (opts.seed) user["seed"] = *opts.seed;
    return scenario_from_json(user, base_dir);
}

std::vector<double> parse_values_spec(const std::string& spec) {
    std::vector<double> values;
    try {
        if (spec.find(':') != std::string::npos) {
            std::stringstream ss(spec);
            std::string lo, step, hi;
            if (!std::getline(ss, lo, ':') || !std::getline(ss, step, ':') ||
                !std::getline(ss, hi))
                throw ConfigError("values spec: expected start:step:stop");
            const double a = std::stod(lo), d = std::stod(step), b = std::stod(hi);
            if (d <= 0.0) throw ConfigError("values spec: step must be > 0");
            for (double v = a; v <= b + 1e-9; v += d) values.push_back(v);
            return values;
        }
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (!item.empty()) values.push_back(std::stod(item));
        }
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        throw ConfigError("malformed values spec: \"" + spec + "\"");
    }
    return values;
}

CompareReport compare_core(const Scenario& a, const Scenario& b) {
    check_comparable(a, b);
    const CompareConfig& cc = a.compare;

    CompareReport report;
    report.distances_m = cc.distances_m;
    report.point_m = cc.point_m;

    const Scenario curve_a = with_overrides(a, {}, cc.curve_duration_s);
    const Scenario curve_b = with_overrides(b, {}, cc.curve_duration_s);
    const auto rows_a = sweep(curve_a, "distance_m", cc.distances_m, cc.curve_seeds);
    const auto rows_b = sweep(curve_b, "distance_m", cc.distances_m, cc.curve_seeds);
    for (const auto& row : rows_a) report.pdr_a.push_back(row.mean_pdr);
    for (const auto& row : rows_b) report.pdr_b.push_back(row.mean_pdr);

    report.point_pdr_a = mean_pdr_at(a, cc.point_m, cc.point_seeds, cc.point_duration_s);
    report.point_pdr_b = mean_pdr_at(b, cc.point_m, cc.point_seeds, cc.point_duration_s);
    report.point_delta = report.point_pdr_a - report.point_pdr_b;

    for (const double p : cc.powers_dbm) {
        if (!power_legal(a, p) || !power_legal(b, p)) continue;
        report.powers_dbm.push_back(p);
        const Scenario pa =
            with_overrides(a, {{"radio.tx_power_dbm", p}}, cc.curve_duration_s);
        const Scenario pb =
            with_overrides(b, {{"radio.tx_power_dbm", p}}, cc.curve_duration_s);
        report.range_a_m.push_back(
            max_range_m(sweep(pa, "distance_m", cc.distances_m, cc.curve_seeds)));
        report.range_b_m.push_back(
            max_range_m(sweep(pb, "distance_m", cc.distances_m, cc.curve_seeds)));
    }
    return report;
}

int cmd_run(const std::string& scenario_ref, const CommonOpts& opts) {
    return guarded([&] {
        const Scenario sc = load_scenario_ref(scenario_ref, opts);
        const SimResult result = run_scenario(sc);
        write_result(result, opts.out_dir);
        std::printf("pdr=%s sent=%ld delivered=%ld brownouts=%ld boot_loops=%ld -> %s\n",
                    format_fixed9(result.pdr).c_str(), result.packets_sent,
                    result.packets_delivered, result.brownouts, result.boot_loops_detected,
                    opts.out_dir.c_str());
    });
}

int cmd_sweep(const std::string& scenario_ref, const std::string& param_path,
              const std::string& values_spec, int per_point_seeds, const CommonOpts& opts) {
    return guarded([&] {
        const Scenario base = load_scenario_ref(scenario_ref, opts);
        const std::vector<double> values = parse_values_spec(values_spec);
        const auto rows = sweep(base, param_path, values, per_point_seeds);
        const std::string digest = config_digest(base.resolved);

        auto table = open_output(std::filesystem::path(opts.out_dir) / "sweep.csv");
        table << "# config_digest=" << digest << " param=" << param_path << "\n";
        table << "value,mean_pdr,mean_sent,mean_delivered,mean_avg_current_ma,"
                 "mean_energy_consumed_j\n";
        for (const auto& row : rows)
            table << format_fixed9(row.value) << ',' << format_fixed9(row.mean_pdr) << ','
                  << format_fixed9(row.mean_sent) << ',' << format_fixed9(row.mean_delivered)
                  << ',' << format_fixed9(row.mean_avg_current_ma) << ','
                  << format_fixed9(row.mean_energy_consumed_j) << "\n";

        auto runs = open_output(std::filesystem::path(opts.out_dir) / "sweep_runs.csv");
        runs << "# config_digest=" << digest << " param=" << param_path << "\n";
        runs << "value,seed,pdr,sent,delivered,avg_current_ma,energy_consumed_j,"
                "brownouts,boot_loops_detected\n";
        for (const auto& row : rows) {
            for (std::size_t s = 0; s < row.runs.size(); ++s) {
                const SimResult& r = row.runs[s];
                runs << format_fixed9(row.value) << ',' << base.seed + s << ','
                     << format_fixed9(r.pdr) << ',' << r.packets_sent << ','
                     << r.packets_delivered << ',' << format_fixed9(r.avg_current_ma) << ','
                     << format_fixed9(r.energy_consumed_j) << ',' << r.brownouts << ','
                     << r.boot_loops_detected << "\n";
            }
        }
        std::printf("swept %s over %zu values x %d seeds -> %s\n", param_path.c_str(),
                    values.size(), per_point_seeds, opts.out_dir.c_str());
    });
}

int cmd_compare(const std::string& ref_a, const std::string& ref_b, const CommonOpts& opts) {
    return guarded([&] {
        const Scenario a = load_scenario_ref(ref_a, opts);
        const Scenario b = load_scenario_ref(ref_b, opts);
        const CompareReport report = compare_core(a, b);
        const std::string digest_a = config_digest(a.resolved);
        const std::string digest_b = config_digest(b.resolved);

        auto pdr = open_output(std::filesystem::path(opts.out_dir) / "pdr_vs_distance.csv");
        pdr << "# config_digest_a=" << digest_a << " config_digest_b=" << digest_b << "\n";
        pdr << "d_m,pdr_a,pdr_b,delta\n";
        for (std::size_t i = 0; i < report.distances_m.size(); ++i)
            pdr << format_fixed9(report.distances_m[i]) << ','
                << format_fixed9(report.pdr_a[i]) << ',' << format_fixed9(report.pdr_b[i])
                << ',' << format_fixed9(report.pdr_a[i] - report.pdr_b[i]) << "\n";

        auto rng = open_output(std::filesystem::path(opts.out_dir) / "range_vs_power.csv");
        rng << "# config_digest_a=" << digest_a << " config_digest_b=" << digest_b << "\n";
        rng << "power_dbm,max_range_a_m,max_range_b_m\n";
        for (std::size_t i = 0; i < report.powers_dbm.size(); ++i) {
            rng << format_fixed9(report.powers_dbm[i]) << ',';
            rng << (report.range_a_m[i] ? format_fixed9(*report.range_a_m[i]) : "none") << ',';
            rng << (report.range_b_m[i] ? format_fixed9(*report.range_b_m[i]) : "none")
                << "\n";
        }

        std::printf("pdr delta at %s m: a-b = %+.6f (a=%.6f, b=%.6f) -> %s\n",
                    format_fixed9(report.point_m).c_str(), report.point_delta,
                    report.point_pdr_a, report.point_pdr_b, opts.out_dir.c_str());
    });
}

int cmd_calibrate(const std::string& targets_path, const std::string& grid_spec,
                  const CommonOpts& opts) {
    return guarded([&] {
        std::vector<CalibrationTarget> targets;
        if (std::filesystem::exists(targets_path)) {
            targets = load_targets(targets_path);
        } else {
            // the shipped target set is addressable by name
            const std::string base = std::filesystem::path(targets_path).filename().string();
            if (base == "calib-nlos-targets.csv" || base == "calib-nlos-targets") {
                const auto tmp =
                    std::filesystem::temp_directory_path() / "sunlink-calib-targets.csv";
                auto out = open_output(tmp);
                out << calibration_targets_csv();
                out.close();
                targets = load_targets(tmp.string());
            } else {
                throw ConfigError("cannot open calibration targets: " + targets_path);
            }
        }
        const GridSpec grid = parse_grid_spec(grid_spec);
        ChannelModel base;
        base.exponent = 3.0;
        base.sigma_db = 6.0;
        const CalibrationResult result = calibrate_channel(targets, grid, base);

        nlohmann::json out_json = {
            {"d0_m", result.channel.d0_m},           {"pl0_db", result.channel.pl0_db},
            {"exponent", result.channel.exponent},   {"sigma_db", result.channel.sigma_db},
            {"tx_gain_dbi", result.channel.tx_gain_dbi},
            {"rx_gain_dbi", result.channel.rx_gain_dbi},
            {"residual", result.residual},
        };
        auto out = open_output(std::filesystem::path(opts.out_dir) / "channel.json");
        out << out_json.dump(2) << "\n";
        std::printf("calibrated exponent=%.6f sigma_db=%.6f residual=%.3e -> %s\n",
                    result.channel.exponent, result.channel.sigma_db, result.residual,
                    opts.out_dir.c_str());
    });
}

int cmd_feasibility(const std::string& scenario_ref, const CommonOpts& opts) {
    return guarded([&] {
        const Scenario sc = load_scenario_ref(scenario_ref, opts);
        const double airtime = radio_airtime(sc.radio, sc.payload_len);
        const double i_peak =
            tx_current(radio_current_curve(sc.radio), radio_tx_power(sc.radio));
        const double i_avg = i_peak * radio_avg_current_ratio(sc.radio);
        const double v_hi = sc.radio_ufop.interrupt_v;
        const double v_lo = sc.radio_ufop.regulated_out_v;
        const TxFeasibility f =
            tx_feasibility(sc.radio_ufop.bank, v_hi, v_lo, i_avg, airtime);
        const double c_min_f = f.required_c / (v_hi - v_lo);
        const double energy = packet_energy(v_lo, i_avg, airtime);

        std::printf("verdict: %s\n", f.feasible ? "feasible" : "infeasible");
        std::printf("airtime_s: %s\n", format_fixed9(airtime).c_str());
        std::printf("avg_tx_current_ma: %s\n", format_fixed9(i_avg).c_str());
        std::printf("required_c: %.9e\n", f.required_c);
        std::printf("deliverable_c: %.9e (bank %.1f uF, %.2f V -> %.2f V)\n", f.available_c,
                    sc.radio_ufop.bank.capacitance_f * 1e6, v_hi, v_lo);
        if (!f.feasible) std::printf("shortfall_c: %.9e\n", f.shortfall_c);
        std::printf("min_feasible_bank_uf: %.1f\n", c_min_f * 1e6);
        std::printf("packet_energy_j: %.9e\n", energy);
    });
}

int cmd_presets(const std::string& out_dir) {
    return guarded([&] {
        const int n = write_preset_files(out_dir);
        std::printf("wrote %d preset files -> %s\n", n, out_dir.c_str());
    });
}

}  // namespace sunlink
