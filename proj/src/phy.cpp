#include "sunlink/phy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sunlink/errors.hpp"

namespace sunlink {

double lora_airtime(const LoRaConfig& cfg, int payload_len) {
    if (payload_len < 0 || payload_len > 255)
        throw std::invalid_argument("lora_airtime: payload length must be in [0, 255]");

    const int sf = cfg.spreading_factor;
    const int crc = cfg.crc_on ? 1 : 0;
    const int ih = cfg.explicit_header ? 0 : 1;
    const int de = cfg.low_data_rate_opt ? 1 : 0;

    const double t_sym = std::ldexp(1.0, sf) / cfg.bandwidth_hz;
    const double t_preamble = (cfg.preamble_symbols + 4.25) * t_sym;

    const int numer = 8 * payload_len - 4 * sf + 28 + 16 * crc - 20 * ih;
    const int denom = 4 * (sf - 2 * de);
    const int blocks = numer > 0 ? (numer + denom - 1) / denom : 0;
    const int payload_symbols = 8 + std::max(blocks * (cfg.coding_rate + 4), 0);

    return t_preamble + payload_symbols * t_sym;
}

double fsk_airtime(const FskConfig& cfg, int payload_len) {
    if (cfg.bitrate_bps <= 0.0) throw ConfigError("fsk_airtime: bitrate must be > 0");
    if (payload_len < 0) throw std::invalid_argument("fsk_airtime: payload length must be >= 0");
    return 8.0 * (payload_len + cfg.overhead_bytes) / cfg.bitrate_bps;
}

double lora_sensitivity(const LoRaConfig& cfg) {
    const auto it = cfg.snr_required_db.find(cfg.spreading_factor);
    if (it == cfg.snr_required_db.end())
        throw ConfigError("lora_sensitivity: no SNR requirement for SF" +
                          std::to_string(cfg.spreading_factor));
    return -174.0 + 10.0 * std::log10(cfg.bandwidth_hz) + cfg.noise_figure_db + it->second;
}

double lora_nominal_bit_rate(const LoRaConfig& cfg) {
    return cfg.spreading_factor * cfg.bandwidth_hz / std::ldexp(1.0, cfg.spreading_factor);
}

double path_loss(const ChannelModel& ch, double d_m) {
    if (d_m < ch.d0_m)
        throw std::invalid_argument("path_loss: distance below the reference distance");
    return ch.pl0_db + 10.0 * ch.exponent * std::log10(d_m / ch.d0_m);
}

double received_power_mean(const ChannelModel& ch, double ptx_dbm, double d_m) {
    return ptx_dbm + ch.tx_gain_dbi + ch.rx_gain_dbi - path_loss(ch, d_m);
}

double pdr_analytic(double margin_db, double sigma_db) {
    if (sigma_db < 0.0) throw std::invalid_argument("pdr_analytic: sigma must be >= 0");
    if (sigma_db == 0.0) return margin_db >= 0.0 ? 1.0 : 0.0;
    return 0.5 * std::erfc(-(margin_db / sigma_db) / std::sqrt(2.0));
}

bool sample_packet_outcome(const ChannelModel& ch, double sensitivity_dbm,
                           double ptx_dbm, double d_m, RandomStream& rng) {
    const double mean_dbm = received_power_mean(ch, ptx_dbm, d_m);
    const double shadowing_db = rng.next_normal() * ch.sigma_db;
    return mean_dbm - shadowing_db >= sensitivity_dbm;
}

double tx_current(const std::vector<CurrentPoint>& curve, double ptx_dbm) {
    if (curve.size() < 2) throw ConfigError("tx_current: curve needs at least 2 points");
    if (ptx_dbm < curve.front().power_dbm || ptx_dbm > curve.back().power_dbm)
        throw std::out_of_range("tx_current: power outside the radio's span");
    for (std::size_t i = 1; i < curve.size(); ++i) {
        if (ptx_dbm <= curve[i].power_dbm) {
            const auto& a = curve[i - 1];
            const auto& b = curve[i];
            const double f = (ptx_dbm - a.power_dbm) / (b.power_dbm - a.power_dbm);
            return a.current_ma + f * (b.current_ma - a.current_ma);
        }
    }
    return curve.back().current_ma;
}

double packet_energy(double vdd_v, double i_tx_ma, double airtime_s) {
    if (vdd_v < 0.0 || i_tx_ma < 0.0 || airtime_s < 0.0)
        throw std::invalid_argument("packet_energy: arguments must be >= 0");
    return vdd_v * (i_tx_ma / 1000.0) * airtime_s;
}

double radio_airtime(const RadioModel& radio, int payload_len) {
    return std::visit(
        [payload_len](const auto& cfg) -> double {
            using T = std::decay_t<decltype(cfg)>;
            if constexpr (std::is_same_v<T, LoRaConfig>) return lora_airtime(cfg, payload_len);
            else return fsk_airtime(cfg, payload_len);
        },
        radio);
}

double radio_sensitivity(const RadioModel& radio) {
    return std::visit(
        [](const auto& cfg) -> double {
            using T = std::decay_t<decltype(cfg)>;
            if constexpr (std::is_same_v<T, LoRaConfig>) return lora_sensitivity(cfg);
            else return cfg.sensitivity_dbm;
        },
        radio);
}

double radio_tx_power(const RadioModel& radio) {
    return std::visit([](const auto& cfg) { return cfg.tx_power_dbm; }, radio);
}

const std::vector<CurrentPoint>& radio_current_curve(const RadioModel& radio) {
    return std::visit(
        [](const auto& cfg) -> const std::vector<CurrentPoint>& { return cfg.current_curve; },
        radio);
}

double radio_avg_current_ratio(const RadioModel& radio) {
    return std::visit([](const auto& cfg) { return cfg.avg_current_ratio; }, radio);
}

std::map<int, double> default_snr_required() {
    return {{7, -7.5}, {8, -10.0}, {9, -12.5}, {10, -15.0}, {11, -17.5}, {12, -20.0}};
}

std::vector<CurrentPoint> default_lora_current_curve() {
    // Peak system current during transmission; the 5 dBm point is measured.
    return {{5, 15.6}, {8, 20.0}, {11, 29.0}, {14, 38.0}, {17, 55.0}, {20, 82.0}, {23, 120.0}};
}

std::vector<CurrentPoint> default_cc1101_current_curve() {
    // Sits above the LoRa curve across the overlapping 5..10 dBm span.
    return {{-30, 12.0}, {-20, 13.1}, {-10, 14.5}, {0, 17.0}, {5, 25.0}, {10, 31.0}};
}

LoRaConfig default_lora() {
    LoRaConfig cfg;
    cfg.snr_required_db = default_snr_required();
    cfg.current_curve = default_lora_current_curve();
    cfg.avg_current_ratio = 11.0 / 15.6;  // measured average over measured peak at 5 dBm
    return cfg;
}

FskConfig default_cc1101() {
    FskConfig cfg;
    cfg.current_curve = default_cc1101_current_curve();
    return cfg;
}

}  // namespace sunlink
