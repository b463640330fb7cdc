#include "sunlink/scenario.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "sunlink/errors.hpp"

namespace sunlink {

namespace {

using nlohmann::json;

json radio_defaults(const std::string& type) {
    if (type == "lora") {
        const LoRaConfig d = default_lora();
        json curve = json::array();
        for (const auto& p : d.current_curve) curve.push_back({p.power_dbm, p.current_ma});
        json snr;
        for (const auto& [sf, v] : d.snr_required_db) snr[std::to_string(sf)] = v;
        return {
            {"type", "lora"},
            {"spreading_factor", d.spreading_factor},
            {"bandwidth_hz", d.bandwidth_hz},
            {"coding_rate", d.coding_rate},
            {"preamble_symbols", d.preamble_symbols},
            {"explicit_header", d.explicit_header},
            {"crc_on", d.crc_on},
            {"low_data_rate_opt", "auto"},
            {"tx_power_dbm", d.tx_power_dbm},
            {"frequency_hz", d.frequency_hz},
            {"noise_figure_db", d.noise_figure_db},
            {"snr_required_db", snr},
            {"current_curve", curve},
            {"avg_current_ratio", d.avg_current_ratio},
        };
    }
    if (type == "cc1101") {
        const FskConfig d = default_cc1101();
        json curve = json::array();
        for (const auto& p : d.current_curve) curve.push_back({p.power_dbm, p.current_ma});
        return {
            {"type", "cc1101"},
            {"bitrate_bps", d.bitrate_bps},
            {"overhead_bytes", d.overhead_bytes},
            {"tx_power_dbm", d.tx_power_dbm},
            {"sensitivity_dbm", d.sensitivity_dbm},
            {"frequency_hz", d.frequency_hz},
            {"current_curve", curve},
            {"avg_current_ratio", d.avg_current_ratio},
        };
    }
    throw ConfigError("radio.type must be \"lora\" or \"cc1101\", got \"" + type + "\"");
}

json ufop_defaults(double charge_start_v, double interrupt_v, double capacitance_uf) {
    return {
        {"charge_start_v", charge_start_v},
        {"interrupt_v", interrupt_v},
        {"capacitance_uf", capacitance_uf},
        {"clamp_v", 5.1},
        {"initial_v", 0.0},
        {"pass_limit_ma", 20.0},
        {"regulated_out_v", 3.0},
        {"dropout_v", 0.1},
        {"charge_limit_ma", 1e9},
        {"charge_while_gated", true},
    };
}

// Subtrees whose inner structure is not key-checked.
bool opaque_subtree(const std::string& path) {
    static const std::set<std::string> opaque = {
        "harvest.samples",       "radio.snr_required_db", "radio.current_curve",
        "compare.distances_m",   "compare.powers_dbm",    "notes",
    };
    return opaque.count(path) > 0;
}

void check_unknown_keys(const json& user, const json& defaults, const std::string& prefix,
                        std::vector<std::string>& errs) {
    if (!user.is_object()) return;
    for (const auto& [key, value] : user.items()) {
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        if (!defaults.contains(key)) {
            errs.push_back(path + ": unknown key");
            continue;
        }
        if (opaque_subtree(path)) continue;
        if (value.is_object() && defaults.at(key).is_object())
            check_unknown_keys(value, defaults.at(key), path, errs);
    }
}

// Collects type errors instead of throwing, so one pass reports everything.
struct Reader {
    const json& j;
    std::string path;
    std::vector<std::string>& errs;

    const json& raw(const char* key) const { return j.at(key); }

    double num(const char* key) const {
        const json& v = j.at(key);
        if (!v.is_number()) {
            errs.push_back(path + key + ": expected a number");
            return 0.0;
        }
        return v.get<double>();
    }
    int integer(const char* key) const {
        const json& v = j.at(key);
        if (!v.is_number_integer()) {
            errs.push_back(path + key + ": expected an integer");
            return 0;
        }
        return v.get<int>();
    }
    bool flag(const char* key) const {
        const json& v = j.at(key);
        if (!v.is_boolean()) {
            errs.push_back(path + key + ": expected a boolean");
            return false;
        }
        return v.get<bool>();
    }
    std::string text(const char* key) const {
        const json& v = j.at(key);
        if (!v.is_string()) {
            errs.push_back(path + key + ": expected a string");
            return {};
        }
        return v.get<std::string>();
    }
};

std::vector<CurrentPoint> parse_curve(const json& arr, const std::string& path,
                                      std::vector<std::string>& errs) {
    std::vector<CurrentPoint> curve;
    if (!arr.is_array()) {
        errs.push_back(path + ": expected an array of [power_dbm, current_ma] pairs");
        return curve;
    }
    for (const auto& p : arr) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
            errs.push_back(path + ": each point must be [power_dbm, current_ma]");
            return {};
        }
        curve.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    if (curve.size() < 2) {
        errs.push_back(path + ": needs at least 2 points");
        return curve;
    }
    for (std::size_t i = 1; i < curve.size(); ++i)
        if (curve[i].power_dbm <= curve[i - 1].power_dbm) {
            errs.push_back(path + ": power values must be strictly increasing");
            break;
        }
    return curve;
}

UfopUnit parse_ufop(const json& j, const std::string& name, std::vector<std::string>& errs) {
    Reader r{j, name + ".", errs};
    UfopUnit u;
    u.name = name;
    u.charge_start_v = r.num("charge_start_v");
    u.interrupt_v = r.num("interrupt_v");
    u.bank.capacitance_f = r.num("capacitance_uf") * 1e-6;
    u.bank.clamp_v = r.num("clamp_v");
    u.bank.voltage_v = r.num("initial_v");
    u.pass_limit_ma = r.num("pass_limit_ma");
    u.regulated_out_v = r.num("regulated_out_v");
    u.dropout_v = r.num("dropout_v");
    u.charge_limit_ma = r.num("charge_limit_ma");
    u.charge_while_gated = r.flag("charge_while_gated");

    if (u.charge_start_v >= u.interrupt_v)
        errs.push_back(name + ": charge_start_v must be < interrupt_v");
    if (u.bank.capacitance_f <= 0.0) errs.push_back(name + ".capacitance_uf: must be > 0");
    if (u.pass_limit_ma <= 0.0) errs.push_back(name + ".pass_limit_ma: must be > 0");
    if (u.dropout_v < 0.0) errs.push_back(name + ".dropout_v: must be >= 0");
    if (u.charge_limit_ma <= 0.0) errs.push_back(name + ".charge_limit_ma: must be > 0");
    if (u.bank.voltage_v < 0.0 || u.bank.voltage_v > u.bank.clamp_v)
        errs.push_back(name + ".initial_v: must lie in [0, clamp_v]");
    return u;
}

RadioModel parse_radio(json& j, int payload_len, std::vector<std::string>& errs) {
    Reader r{j, "radio.", errs};
    const std::string type = r.text("type");
    if (type == "lora") {
        LoRaConfig cfg;
        cfg.spreading_factor = r.integer("spreading_factor");
        cfg.bandwidth_hz = r.num("bandwidth_hz");
        cfg.coding_rate = r.integer("coding_rate");
        cfg.preamble_symbols = r.integer("preamble_symbols");
        cfg.explicit_header = r.flag("explicit_header");
        cfg.crc_on = r.flag("crc_on");
        cfg.tx_power_dbm = r.num("tx_power_dbm");
        cfg.frequency_hz = r.num("frequency_hz");
        cfg.noise_figure_db = r.num("noise_figure_db");
        cfg.avg_current_ratio = r.num("avg_current_ratio");
        cfg.current_curve = parse_curve(j.at("current_curve"), "radio.current_curve", errs);

        if (j.at("snr_required_db").is_object()) {
            for (const auto& [key, value] : j.at("snr_required_db").items()) {
                if (!value.is_number()) {
                    errs.push_back("radio.snr_required_db." + key + ": expected a number");
                    continue;
                }
                try {
                    cfg.snr_required_db[std::stoi(key)] = value.get<double>();
                } catch (const std::exception&) {
                    errs.push_back("radio.snr_required_db." + key +
                                   ": key must be a spreading factor");
                }
            }
        } else {
            errs.push_back("radio.snr_required_db: expected an object");
        }

        if (cfg.spreading_factor < 7 || cfg.spreading_factor > 12)
            errs.push_back("radio.spreading_factor: must be in [7, 12]");
        if (cfg.bandwidth_hz != 125000.0 && cfg.bandwidth_hz != 250000.0 &&
            cfg.bandwidth_hz != 500000.0)
            errs.push_back("radio.bandwidth_hz: must be one of 125000, 250000, 500000");
        if (cfg.coding_rate < 1 || cfg.coding_rate > 4)
            errs.push_back("radio.coding_rate: must be in [1, 4]");
        if (cfg.preamble_symbols < 1) errs.push_back("radio.preamble_symbols: must be >= 1");
        if (cfg.tx_power_dbm < 5.0 || cfg.tx_power_dbm > 23.0)
            errs.push_back("radio.tx_power_dbm: must be in [5, 23]");
        if (!cfg.snr_required_db.count(cfg.spreading_factor))
            errs.push_back("radio.snr_required_db: missing entry for the configured SF");
        if (cfg.avg_current_ratio <= 0.0)
            errs.push_back("radio.avg_current_ratio: must be > 0");
        if (payload_len < 0 || payload_len > 255)
            errs.push_back("payload_len: must be in [0, 255] for a LoRa radio");

        // "auto" enables the low-data-rate optimisation when the symbol time
        // exceeds 16 ms (SF11/SF12 at 125 kHz, SF12 at 250 kHz).
        const json& ldro = j.at("low_data_rate_opt");
        if (ldro.is_boolean()) {
            cfg.low_data_rate_opt = ldro.get<bool>();
        } else if (ldro.is_string() && ldro.get<std::string>() == "auto") {
            cfg.low_data_rate_opt =
                std::ldexp(1.0, cfg.spreading_factor) / cfg.bandwidth_hz > 16e-3;
            j["low_data_rate_opt"] = cfg.low_data_rate_opt;  // resolve the echo
        } else {
            errs.push_back("radio.low_data_rate_opt: must be true, false or \"auto\"");
        }

        if (!cfg.current_curve.empty() &&
            (cfg.tx_power_dbm < cfg.current_curve.front().power_dbm ||
             cfg.tx_power_dbm > cfg.current_curve.back().power_dbm))
            errs.push_back("radio.tx_power_dbm: outside the current curve span");
        return cfg;
    }
    if (type == "cc1101") {
        FskConfig cfg;
        cfg.bitrate_bps = r.num("bitrate_bps");
        cfg.overhead_bytes = r.integer("overhead_bytes");
        cfg.tx_power_dbm = r.num("tx_power_dbm");
        cfg.sensitivity_dbm = r.num("sensitivity_dbm");
        cfg.frequency_hz = r.num("frequency_hz");
        cfg.avg_current_ratio = r.num("avg_current_ratio");
        cfg.current_curve = parse_curve(j.at("current_curve"), "radio.current_curve", errs);

        if (cfg.bitrate_bps <= 0.0) errs.push_back("radio.bitrate_bps: must be > 0");
        if (cfg.overhead_bytes < 0) errs.push_back("radio.overhead_bytes: must be >= 0");
        if (cfg.tx_power_dbm < -30.0 || cfg.tx_power_dbm > 10.0)
            errs.push_back("radio.tx_power_dbm: must be in [-30, 10]");
        if (cfg.avg_current_ratio <= 0.0)
            errs.push_back("radio.avg_current_ratio: must be > 0");
        if (payload_len < 0) errs.push_back("payload_len: must be >= 0");
        if (!cfg.current_curve.empty() &&
            (cfg.tx_power_dbm < cfg.current_curve.front().power_dbm ||
             cfg.tx_power_dbm > cfg.current_curve.back().power_dbm))
            errs.push_back("radio.tx_power_dbm: outside the current curve span");
        return cfg;
    }
    errs.push_back("radio.type: must be \"lora\" or \"cc1101\"");
    return LoRaConfig{};
}

HarvestProfile parse_harvest(const json& j, const std::string& base_dir,
                             std::vector<std::string>& errs) {
    Reader r{j, "harvest.", errs};
    HarvestProfile h;
    const std::string kind = r.text("kind");
    h.constant_ma = r.num("constant_ma");
    h.amplitude_ma = r.num("amplitude_ma");
    h.period_s = r.num("period_s");
    h.scale = r.num("scale");
    h.irradiance = r.num("irradiance");

    if (kind == "constant") h.kind = HarvestKind::Constant;
    else if (kind == "trace") h.kind = HarvestKind::Trace;
    else if (kind == "diurnal") h.kind = HarvestKind::Diurnal;
    else errs.push_back("harvest.kind: must be constant, trace or diurnal");

    if (h.constant_ma < 0.0) errs.push_back("harvest.constant_ma: must be >= 0");
    if (h.amplitude_ma < 0.0) errs.push_back("harvest.amplitude_ma: must be >= 0");
    if (h.period_s <= 0.0) errs.push_back("harvest.period_s: must be > 0");
    if (h.scale < 0.0) errs.push_back("harvest.scale: must be >= 0");
    if (h.irradiance < 0.0) errs.push_back("harvest.irradiance: must be >= 0");

    if (h.kind == HarvestKind::Trace) {
        const json& samples = j.at("samples");
        if (samples.is_array() && !samples.empty()) {
            for (const auto& s : samples) {
                if (!s.is_array() || s.size() != 2 || !s[0].is_number() || !s[1].is_number()) {
                    errs.push_back("harvest.samples: each sample must be [t_s, i_mA]");
                    break;
                }
                h.samples.push_back({s[0].get<double>(), s[1].get<double>()});
            }
            for (std::size_t i = 0; i < h.samples.size(); ++i) {
                if (h.samples[i].current_ma < 0.0)
                    errs.push_back("harvest.samples: currents must be >= 0");
                if (i > 0 && h.samples[i].t_s <= h.samples[i - 1].t_s)
                    errs.push_back("harvest.samples: times must be strictly increasing");
            }
        } else {
            const std::string path = r.text("trace_path");
            if (path.empty()) {
                errs.push_back("harvest: trace kind needs samples or trace_path");
            } else {
                try {
                    const auto full = std::filesystem::path(base_dir) / path;
                    h.samples = load_trace(full.string()).samples;
                } catch (const std::exception& e) {
                    errs.push_back(std::string("harvest.trace_path: ") + e.what());
                }
            }
        }
    }
    return h;
}

}  // namespace

nlohmann::json default_scenario_json(const std::string& radio_type) {
    json j;
    j["name"] = "default";
    j["duration_s"] = 60.0;
    j["dt_s"] = 0.001;
    j["seed"] = 1;
    j["supply"] = {{"mode", "harvested"}, {"current_limit_ma", 16.0}, {"voltage_v", 3.7}};
    j["harvest"] = {{"kind", "constant"}, {"constant_ma", 70.0},   {"trace_path", ""},
                    {"samples", json::array()}, {"amplitude_ma", 70.0}, {"period_s", 86400.0},
                    {"scale", 1.0},         {"irradiance", 1.0}};
    j["main_cap"] = {{"capacitance_uf", 100.0}, {"clamp_v", 5.1}, {"initial_v", 0.0}};
    j["comparator"] = {{"v_on", 3.38}, {"v_off", 3.05}};
    j["rail_level_v"] = 3.3;
    j["radio_ufop"] = ufop_defaults(3.3, 3.5, 100.0);
    j["sensor_ufop"] = ufop_defaults(3.2, 3.3, 22.0);
    j["radio"] = radio_defaults(radio_type);
    j["channel"] = {{"d0_m", 1.0},        {"pl0_db", 25.2},    {"exponent", 3.0},
                    {"sigma_db", 6.0},    {"tx_gain_dbi", 0.0}, {"rx_gain_dbi", 0.0}};
    j["distance_m"] = 315.0;
    j["duty_period_s"] = 10.0;
    j["payload_len"] = 20;
    j["budget"] = {{"booting_ma", 5.0},    {"sleep_ma", 1.8},     {"sensing_ma", 2.0},
                   {"search_idle_ma", 12.0}, {"receiving_ma", 10.0}, {"sense_mcu_ma", 0.0},
                   {"tx_mcu_ma", 0.0},     {"boot_duration_s", 0.1}, {"sense_duration_s", 0.2}};
    j["boot_loop"] = {{"k", 3}, {"window_s", 60.0}};
    j["receiver_powered"] = true;
    j["record_current"] = false;
    j["compare"] = {{"point_m", 315.0},
                    {"distances_m", {60.0, 120.0, 180.0, 240.0, 315.0, 390.0, 470.0, 560.0, 660.0}},
                    {"powers_dbm", {5.0, 6.0, 7.0, 8.0, 9.0, 10.0}},
                    {"curve_seeds", 4},
                    {"curve_duration_s", 600.0},
                    {"point_seeds", 8},
                    {"point_duration_s", 4500.0}};
    j["notes"] = json::array();
    return j;
}

Scenario scenario_from_json(const nlohmann::json& user, const std::string& base_dir) {
    std::vector<std::string> errs;

    std::string radio_type = "lora";
    if (user.contains("radio") && user.at("radio").is_object() &&
        user.at("radio").contains("type") && user.at("radio").at("type").is_string())
        radio_type = user.at("radio").at("type").get<std::string>();

    json merged;
    try {
        merged = default_scenario_json(radio_type);
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("invalid scenario:\n  ") + e.what());
    }
    check_unknown_keys(user, merged, "", errs);
    if (errs.empty()) merged.update(user, /*merge_objects=*/true);
    if (!errs.empty()) {
        std::string msg = "invalid scenario:";
        for (const auto& e : errs) msg += "\n  " + e;
        throw ConfigError(msg);
    }

    Scenario sc;
    Reader r{merged, "", errs};
    sc.name = r.text("name");
    sc.duration_s = r.num("duration_s");
    sc.dt_s = r.num("dt_s");
    if (merged.at("seed").is_number())
        sc.seed = merged.at("seed").get<std::uint64_t>();
    else
        errs.push_back("seed: expected an integer");
    sc.rail_level_v = r.num("rail_level_v");
    sc.distance_m = r.num("distance_m");
    sc.duty_period_s = r.num("duty_period_s");
    sc.payload_len = r.integer("payload_len");
    sc.receiver_powered = r.flag("receiver_powered");
    sc.record_current = r.flag("record_current");

    {
        Reader s{merged.at("supply"), "supply.", errs};
        const std::string mode = s.text("mode");
        if (mode == "harvested") sc.supply.mode = SupplyConfig::Mode::Harvested;
        else if (mode == "bench") sc.supply.mode = SupplyConfig::Mode::Bench;
        else errs.push_back("supply.mode: must be harvested or bench");
        sc.supply.current_limit_ma = s.num("current_limit_ma");
        sc.supply.voltage_v = s.num("voltage_v");
        if (sc.supply.current_limit_ma <= 0.0)
            errs.push_back("supply.current_limit_ma: must be > 0");
        if (sc.supply.voltage_v <= 0.0) errs.push_back("supply.voltage_v: must be > 0");
    }

    sc.harvest = parse_harvest(merged.at("harvest"), base_dir, errs);
    if (sc.harvest.kind == HarvestKind::Trace && !sc.harvest.samples.empty()) {
        // Inline the samples so the resolved echo stands on its own.
        json samples = json::array();
        for (const auto& s : sc.harvest.samples) samples.push_back({s.t_s, s.current_ma});
        merged["harvest"]["samples"] = samples;
        merged["harvest"]["trace_path"] = "";
    }

    {
        Reader m{merged.at("main_cap"), "main_cap.", errs};
        sc.main_cap.capacitance_f = m.num("capacitance_uf") * 1e-6;
        sc.main_cap.clamp_v = m.num("clamp_v");
        sc.main_cap.voltage_v = m.num("initial_v");
        if (sc.main_cap.capacitance_f <= 0.0)
            errs.push_back("main_cap.capacitance_uf: must be > 0");
        if (sc.main_cap.voltage_v < 0.0 || sc.main_cap.voltage_v > sc.main_cap.clamp_v)
            errs.push_back("main_cap.initial_v: must lie in [0, clamp_v]");
    }
    {
        Reader c{merged.at("comparator"), "comparator.", errs};
        sc.comparator.v_on = c.num("v_on");
        sc.comparator.v_off = c.num("v_off");
        if (sc.comparator.v_off >= sc.comparator.v_on)
            errs.push_back("comparator: v_off must be strictly below v_on");
    }

    sc.radio_ufop = parse_ufop(merged.at("radio_ufop"), "radio_ufop", errs);
    sc.sensor_ufop = parse_ufop(merged.at("sensor_ufop"), "sensor_ufop", errs);
    sc.radio = parse_radio(merged.at("radio"), sc.payload_len, errs);

    {
        Reader c{merged.at("channel"), "channel.", errs};
        sc.channel.d0_m = c.num("d0_m");
        sc.channel.pl0_db = c.num("pl0_db");
        sc.channel.exponent = c.num("exponent");
        sc.channel.sigma_db = c.num("sigma_db");
        sc.channel.tx_gain_dbi = c.num("tx_gain_dbi");
        sc.channel.rx_gain_dbi = c.num("rx_gain_dbi");
        if (sc.channel.d0_m <= 0.0) errs.push_back("channel.d0_m: must be > 0");
        if (sc.channel.exponent <= 0.0) errs.push_back("channel.exponent: must be > 0");
        if (sc.channel.sigma_db < 0.0) errs.push_back("channel.sigma_db: must be >= 0");
    }
    {
        Reader b{merged.at("budget"), "budget.", errs};
        sc.budget.booting_ma = b.num("booting_ma");
        sc.budget.sleep_ma = b.num("sleep_ma");
        sc.budget.sensing_ma = b.num("sensing_ma");
        sc.budget.search_idle_ma = b.num("search_idle_ma");
        sc.budget.receiving_ma = b.num("receiving_ma");
        sc.budget.sense_mcu_ma = b.num("sense_mcu_ma");
        sc.budget.tx_mcu_ma = b.num("tx_mcu_ma");
        sc.budget.boot_duration_s = b.num("boot_duration_s");
        sc.budget.sense_duration_s = b.num("sense_duration_s");
        for (const double v : {sc.budget.booting_ma, sc.budget.sleep_ma, sc.budget.sensing_ma,
                               sc.budget.search_idle_ma, sc.budget.receiving_ma,
                               sc.budget.sense_mcu_ma, sc.budget.tx_mcu_ma}) {
            if (v < 0.0) {
                errs.push_back("budget: draws must be >= 0");
                break;
            }
        }
        if (sc.budget.sleep_ma > sc.budget.search_idle_ma)
            errs.push_back("budget: sleep_ma must not exceed search_idle_ma");
        if (sc.budget.boot_duration_s <= 0.0)
            errs.push_back("budget.boot_duration_s: must be > 0");
        if (sc.budget.sense_duration_s <= 0.0)
            errs.push_back("budget.sense_duration_s: must be > 0");
    }
    {
        Reader b{merged.at("boot_loop"), "boot_loop.", errs};
        sc.boot_loop.k = b.integer("k");
        sc.boot_loop.window_s = b.num("window_s");
        if (sc.boot_loop.k < 2) errs.push_back("boot_loop.k: must be >= 2");
        if (sc.boot_loop.window_s <= 0.0) errs.push_back("boot_loop.window_s: must be > 0");
    }
    {
        Reader c{merged.at("compare"), "compare.", errs};
        sc.compare.point_m = c.num("point_m");
        sc.compare.curve_seeds = c.integer("curve_seeds");
        sc.compare.curve_duration_s = c.num("curve_duration_s");
        sc.compare.point_seeds = c.integer("point_seeds");
        sc.compare.point_duration_s = c.num("point_duration_s");
        for (const auto& d : merged.at("compare").at("distances_m")) {
            if (!d.is_number()) {
                errs.push_back("compare.distances_m: expected numbers");
                break;
            }
            sc.compare.distances_m.push_back(d.get<double>());
        }
        for (const auto& p : merged.at("compare").at("powers_dbm")) {
            if (!p.is_number()) {
                errs.push_back("compare.powers_dbm: expected numbers");
                break;
            }
            sc.compare.powers_dbm.push_back(p.get<double>());
        }
        if (sc.compare.curve_seeds < 1 || sc.compare.point_seeds < 1)
            errs.push_back("compare: seed counts must be >= 1");
        if (sc.compare.curve_duration_s <= 0.0 || sc.compare.point_duration_s <= 0.0)
            errs.push_back("compare: durations must be > 0");
    }

    if (sc.dt_s <= 0.0) errs.push_back("dt_s: must be > 0");
    if (sc.duration_s < 0.0) errs.push_back("duration_s: must be >= 0");
    if (sc.duration_s > 0.0 && sc.duration_s < sc.dt_s)
        errs.push_back("duration_s: must be 0 or >= dt_s");
    if (sc.dt_s > 0.0 &&
        sc.dt_s > std::min(sc.budget.boot_duration_s, sc.budget.sense_duration_s) / 2.0)
        errs.push_back("dt_s: must not exceed half the shortest phase duration");
    if (sc.duty_period_s <= 0.0) errs.push_back("duty_period_s: must be > 0");
    if (sc.distance_m < sc.channel.d0_m)
        errs.push_back("distance_m: must be >= channel.d0_m");

    if (!errs.empty()) {
        std::string msg = "invalid scenario:";
        for (const auto& e : errs) msg += "\n  " + e;
        throw ConfigError(msg);
    }

    sc.resolved = merged;
    return sc;
}

Scenario load_scenario_file(const std::string& path,
                            const std::vector<std::string>& set_overrides,
                            std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scenario file: " + path);
    json user;
    try {
        user = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario file " + path + ": " + e.what());
    }
    for (const auto& assignment : set_overrides) apply_set_override(user, assignment);
    if (seed_override) user["seed"] = *seed_override;
    const std::string base_dir = std::filesystem::path(path).parent_path().string();
    return scenario_from_json(user, base_dir.empty() ? "." : base_dir);
}

HarvestProfile load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open harvest trace: " + path);

    HarvestProfile h;
    h.kind = HarvestKind::Trace;
    h.scale = 1.0;

    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "t_s,i_mA")
                throw ConfigError(path + ":" + std::to_string(line_no) +
                                  ": expected header \"t_s,i_mA\"");
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected two fields");
        double t = 0.0, i = 0.0;
        try {
            std::size_t used = 0;
            t = std::stod(line.substr(0, comma), &used);
            if (used != comma) throw std::invalid_argument("trailing characters");
            const std::string rest = line.substr(comma + 1);
            i = std::stod(rest, &used);
            if (used != rest.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw ConfigError(path + ":" + std::to_string(line_no) + ": malformed row");
        }
        if (t < 0.0)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": negative time");
        if (i < 0.0)
            throw ConfigError(path + ":" + std::to_string(line_no) + ": negative current");
        if (!h.samples.empty() && t <= h.samples.back().t_s)
            throw ConfigError(path + ":" + std::to_string(line_no) +
                              ": times must be strictly increasing");
        h.samples.push_back({t, i});
    }
    if (!header_seen) throw ConfigError(path + ": missing header \"t_s,i_mA\"");
    if (h.samples.empty()) throw ConfigError(path + ": empty trace");
    return h;
}

void apply_set_override(nlohmann::json& j, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("--set expects key.path=value, got \"" + assignment + "\"");
    const std::string path = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);

    json parsed = json::parse(value, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded()) parsed = value;  // fall back to a plain string

    json* node = &j;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (key.empty()) throw ConfigError("--set: empty key segment in \"" + path + "\"");
        if (dot == std::string::npos) {
            (*node)[key] = parsed;
            return;
        }
        node = &(*node)[key];
        if (!node->is_object() && !node->is_null()) {
            throw ConfigError("--set: " + path.substr(0, dot) + " is not an object");
        }
        start = dot + 1;
    }
}

namespace {

void collect_numeric_paths(const json& j, const std::string& prefix,
                           std::vector<std::string>& out) {
    if (j.is_object()) {
        for (const auto& [key, value] : j.items())
            collect_numeric_paths(value, prefix.empty() ? key : prefix + "." + key, out);
    } else if (j.is_number()) {
        out.push_back(prefix);
    }
}

}  // namespace

std::vector<std::string> numeric_paths(const nlohmann::json& j) {
    std::vector<std::string> out;
    collect_numeric_paths(j, "", out);
    return out;
}

void set_numeric_path(nlohmann::json& j, const std::string& path, double value) {
    json* node = &j;
    std::size_t start = 0;
    bool ok = true;
    while (ok) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot - start);
        if (!node->is_object() || !node->contains(key)) {
            ok = false;
            break;
        }
        node = &(*node)[key];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    if (!ok || !node->is_number()) {
        std::string msg = "sweep parameter \"" + path + "\" does not name a numeric field; valid paths:";
        for (const auto& p : numeric_paths(j)) msg += "\n  " + p;
        throw ConfigError(msg);
    }
    *node = value;
}

std::string config_digest(const nlohmann::json& j) {
    const std::string dump = j.dump();
    std::uint64_t hash = 0xCBF29CE484222325ULL;
    for (const unsigned char c : dump) {
        hash ^= c;
        hash *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace sunlink
