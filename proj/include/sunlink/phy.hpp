#pragma once

#include <map>
#include <variant>
#include <vector>

#include "sunlink/rng.hpp"

namespace sunlink {

struct CurrentPoint {
    double power_dbm = 0.0;
    double current_ma = 0.0;
};

// Chirp-spread-spectrum radio configuration (SX1276 class).
struct LoRaConfig {
    int spreading_factor = 7;      // 7..12
    double bandwidth_hz = 125000.0;
    int coding_rate = 1;           // denominator 4/(4+cr)
    int preamble_symbols = 8;
    bool explicit_header = true;   // true => header byte present (IH = 0)
    bool crc_on = true;
    bool low_data_rate_opt = false;
    double tx_power_dbm = 5.0;     // legal span [5, 23]
    double frequency_hz = 433e6;
    double noise_figure_db = 6.0;
    std::map<int, double> snr_required_db;  // per spreading factor
    std::vector<CurrentPoint> current_curve;
    double avg_current_ratio = 1.0;  // average-to-peak transmit current
};

// Narrowband FSK radio configuration (CC1101 class).
struct FskConfig {
    double bitrate_bps = 38400.0;
    int overhead_bytes = 12;       // preamble + sync + length + address + crc
    double tx_power_dbm = 5.0;     // legal span [-30, 10]
    double sensitivity_dbm = -104.0;
    double frequency_hz = 433e6;
    std::vector<CurrentPoint> current_curve;
    double avg_current_ratio = 1.0;
};

using RadioModel = std::variant<LoRaConfig, FskConfig>;

// Log-distance path loss with Gaussian shadowing.
struct ChannelModel {
    double d0_m = 1.0;
    double pl0_db = 25.2;   // free-space loss at 1 m, 433 MHz
    double exponent = 2.0;
    double sigma_db = 2.0;
    double tx_gain_dbi = 0.0;
    double rx_gain_dbi = 0.0;
};

// Frame duration from the SX1276 time-on-air formula.
double lora_airtime(const LoRaConfig& cfg, int payload_len);

// 8 * (payload + overhead) / bitrate.
double fsk_airtime(const FskConfig& cfg, int payload_len);

// -174 + 10*log10(BW) + NF + SNR_required(SF).
double lora_sensitivity(const LoRaConfig& cfg);

// Raw modulation bit rate SF * BW / 2^SF, in bits per second.
double lora_nominal_bit_rate(const LoRaConfig& cfg);

// Mean loss pl0 + 10*n*log10(d/d0); shadowing excluded. Requires d >= d0.
double path_loss(const ChannelModel& ch, double d_m);

// ptx + gains - path_loss.
double received_power_mean(const ChannelModel& ch, double ptx_dbm, double d_m);

// Link closure probability Phi(margin/sigma); a unit step when sigma == 0.
double pdr_analytic(double margin_db, double sigma_db);

// Draw one shadowing variate and test the link. Consumes exactly one normal.
bool sample_packet_outcome(const ChannelModel& ch, double sensitivity_dbm,
                           double ptx_dbm, double d_m, RandomStream& rng);

// Piecewise-linear interpolation over the transmit current curve. Queries
// outside the curve's power span throw (the radios' hard power limits).
double tx_current(const std::vector<CurrentPoint>& curve, double ptx_dbm);

// vdd * i_tx * airtime.
double packet_energy(double vdd_v, double i_tx_ma, double airtime_s);

// Dispatch helpers over RadioModel.
double radio_airtime(const RadioModel& radio, int payload_len);
double radio_sensitivity(const RadioModel& radio);
double radio_tx_power(const RadioModel& radio);
const std::vector<CurrentPoint>& radio_current_curve(const RadioModel& radio);
double radio_avg_current_ratio(const RadioModel& radio);

// Factory defaults used by scenarios and presets.
std::map<int, double> default_snr_required();
std::vector<CurrentPoint> default_lora_current_curve();
std::vector<CurrentPoint> default_cc1101_current_curve();
LoRaConfig default_lora();
FskConfig default_cc1101();

}  // namespace sunlink
