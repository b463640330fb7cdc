#include <doctest.h>

#include <cmath>

#include "sunlink/engine.hpp"
#include "sunlink/errors.hpp"
#include "sunlink/presets.hpp"
#include "sunlink/rng.hpp"

using namespace sunlink;
using nlohmann::json;

namespace {

Scenario make_preset(const std::string& name, const std::vector<std::string>& sets = {}) {
    json j = resolve_scenario_ref(name, nullptr);
    for (const auto& s : sets) apply_set_override(j, s);
    return scenario_from_json(j);
}

double closure_residual(const SimResult& r) {
    const double gap = r.energy_harvested_j - r.energy_consumed_j - r.energy_shunted_j -
                       r.energy_stored_delta_j;
    return std::abs(gap) / std::max(1e-9, std::abs(r.energy_harvested_j));
}

std::string event_trace(const SimResult& r) {
    std::string out;
    for (const auto& e : r.event_log) {
        out += e.node;
        out += ':';
        out += node_event_name(e.event.kind);
        out += '@';
        out += std::to_string(e.event.t_s);
        out += ';';
    }
    return out;
}

}  // namespace

TEST_CASE("zero-duration run returns zeroed counters") {
    const Scenario sc = scenario_from_json(json{{"duration_s", 0.0}});
    const SimResult r = run_scenario(sc);
    CHECK(r.packets_sent == 0);
    CHECK(r.packets_delivered == 0);
    CHECK(r.pdr == 0.0);
    CHECK(r.brownouts == 0);
    CHECK(r.energy_harvested_j == 0.0);
    CHECK(r.event_log.empty());
}

TEST_CASE("bench supply at 16 mA carries the 15.6 mA transmit profile") {
    const SimResult r = run_scenario(make_preset("sec631-bench-16mA"));
    CHECK(r.brownouts == 0);
    CHECK(r.packets_sent == 6);  // one cycle right after boot, then every 10 s
    CHECK(r.tx_failed_under_current == 0);
    CHECK(r.tx_failed_bank_depleted == 0);
    CHECK(r.pdr == 1.0);
}

TEST_CASE("raising the transmit demand above the pass limit fails every attempt") {
    const SimResult r =
        run_scenario(make_preset("sec631-bench-16mA", {"radio.tx_power_dbm=11"}));
    CHECK(r.tx_attempts >= 1);
    CHECK(r.tx_failed_under_current == r.tx_attempts);
    CHECK(r.packets_sent == 0);
}

TEST_CASE("identical scenarios reproduce identical results") {
    const Scenario sc = make_preset("sec631-bench-16mA");
    const SimResult a = run_scenario(sc);
    const SimResult b = run_scenario(sc);
    CHECK(a.packets_sent == b.packets_sent);
    CHECK(a.packets_delivered == b.packets_delivered);
    CHECK(a.pdr == b.pdr);
    CHECK(a.energy_harvested_j == b.energy_harvested_j);
    CHECK(a.energy_consumed_j == b.energy_consumed_j);
    CHECK(a.energy_shunted_j == b.energy_shunted_j);
    CHECK(a.energy_stored_delta_j == b.energy_stored_delta_j);
    CHECK(event_trace(a) == event_trace(b));
}

TEST_CASE("energy closure holds on representative scenarios") {
    for (const char* name : {"sec631-bench-16mA", "sec632-panel-count",
                             "sec81-capacitor-sizing", "sec81-current-clip"}) {
        const SimResult r = run_scenario(make_preset(name, {"duration_s=30"}));
        CAPTURE(name);
        CHECK(closure_residual(r) <= 1e-6);
    }
}

TEST_CASE("energy closure holds with a batteryless receiver") {
    const SimResult r = run_scenario(
        make_preset("sec81-current-clip", {"receiver_powered=false", "duration_s=30"}));
    CHECK(closure_residual(r) <= 1e-6);
}

TEST_CASE("an unpowered receiver drops otherwise good packets") {
    // bench-powered transmitter, harvest scale 0: the receiver never boots
    const Scenario sc = scenario_from_json(json::parse(R"({
        "supply": {"mode": "bench", "current_limit_ma": 200, "voltage_v": 3.7},
        "harvest": {"kind": "constant", "scale": 0.0},
        "receiver_powered": false,
        "radio_ufop": {"pass_limit_ma": 120},
        "channel": {"exponent": 2.0, "sigma_db": 0.0},
        "distance_m": 10
    })"));
    const SimResult r = run_scenario(sc);
    CHECK(r.packets_sent == 6);
    CHECK(r.packets_delivered == 0);
}

TEST_CASE("monte-carlo delivery matches the analytic closure probability") {
    // cc1101 at 315 m non-LOS: analytic PDR 0.9299
    const SimResult r = run_scenario(
        make_preset("fig10-nlos-pdr-cc1101", {"duration_s=3000", "seed=5"}));
    ChannelModel ch;
    ch.exponent = 3.0;
    ch.sigma_db = 6.0;
    const double p = pdr_analytic(received_power_mean(ch, 5.0, 315.0) + 104.0, 6.0);
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(r.packets_sent));
    CHECK(r.packets_sent == 300);
    CHECK(std::abs(r.pdr - p) <= 3.0 * se);
}

TEST_CASE("halving dt keeps the pdr identical and energy within a tenth percent") {
    const SimResult coarse =
        run_scenario(make_preset("fig10-nlos-pdr", {"duration_s=100"}));
    const SimResult fine =
        run_scenario(make_preset("fig10-nlos-pdr", {"duration_s=100", "dt_s=0.0025"}));
    CHECK(coarse.pdr == fine.pdr);
    CHECK(coarse.packets_sent == fine.packets_sent);
    CHECK(std::abs(coarse.energy_consumed_j - fine.energy_consumed_j) <=
          1e-3 * fine.energy_consumed_j);
    CHECK(std::abs(coarse.energy_harvested_j - fine.energy_harvested_j) <=
          1e-3 * fine.energy_harvested_j);
}

TEST_CASE("sweep with an empty value list yields an empty table") {
    const Scenario sc = make_preset("fig8-current-sweep");
    CHECK(sweep(sc, "radio.tx_power_dbm", {}, 2).empty());
}

TEST_CASE("sweep rejects unresolvable parameter paths") {
    const Scenario sc = make_preset("fig8-current-sweep");
    CHECK_THROWS_WITH_AS(sweep(sc, "radio.txpower", {5.0}, 1),
                         doctest::Contains("radio.tx_power_dbm"), ConfigError);
}

TEST_CASE("transmit power sweep: pdr non-decreasing, current increasing") {
    Scenario sc = make_preset("fig8-current-sweep", {"duration_s=30", "distance_m=700",
                                                     "channel.exponent=3.0",
                                                     "channel.sigma_db=6.0"});
    const auto rows = sweep(sc, "radio.tx_power_dbm", {5, 11, 17, 23}, 4);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].mean_pdr >= rows[i - 1].mean_pdr - 0.2);  // monte-carlo slack
        CHECK(rows[i].mean_avg_current_ma > rows[i - 1].mean_avg_current_ma);
    }
}

TEST_CASE("sweep seeds are shared across values so rows are paired") {
    const Scenario sc = make_preset("fig10-nlos-pdr", {"duration_s=60"});
    const auto rows = sweep(sc, "distance_m", {315.0, 315.0}, 3);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].mean_pdr == rows[1].mean_pdr);  // identical value, identical seeds
    REQUIRE(rows[0].runs.size() == 3);
    CHECK(event_trace(rows[0].runs[0]) == event_trace(rows[1].runs[0]));
}

TEST_CASE("max range selects the farthest row at or above half delivery") {
    std::vector<SweepRow> rows(3);
    rows[0].value = 100;
    rows[0].mean_pdr = 0.9;
    rows[1].value = 200;
    rows[1].mean_pdr = 0.5;
    rows[2].value = 300;
    rows[2].mean_pdr = 0.4;
    CHECK(max_range_m(rows) == 200.0);
    rows[1].mean_pdr = 0.49;
    CHECK(max_range_m(rows) == 100.0);
    rows[0].mean_pdr = 0.1;
    CHECK_FALSE(max_range_m(rows).has_value());
}

TEST_CASE("boot loops are detected on the starved preset and absent at triple harvest") {
    const SimResult starved =
        run_scenario(make_preset("sec632-panel-count", {"duration_s=60"}));
    CHECK(starved.boot_loops_detected >= 1);
    CHECK(starved.boot_events >= 3);

    const SimResult fed = run_scenario(
        make_preset("sec632-panel-count", {"duration_s=60", "harvest.scale=3"}));
    CHECK(fed.boot_loops_detected == 0);
    CHECK(fed.boot_events == 1);
}

TEST_CASE("bank-depletion preset fails every attempt regardless of bank size") {
    for (const char* set : {"radio_ufop.capacitance_uf=100",
                            "radio_ufop.capacitance_uf=1000"}) {
        const SimResult r = run_scenario(make_preset("sec81-capacitor-sizing", {set}));
        CAPTURE(set);
        CHECK(r.tx_attempts == 6);
        CHECK(r.tx_failed_bank_depleted == r.tx_attempts);
        CHECK(r.packets_sent == 0);
    }
}

TEST_CASE("pass-limit clip blocks transmissions until the limit is lifted") {
    const SimResult clipped = run_scenario(make_preset("sec81-current-clip"));
    CHECK(clipped.tx_attempts >= 1);
    CHECK(clipped.tx_failed_under_current == clipped.tx_attempts);
    CHECK(clipped.packets_sent == 0);

    const SimResult lifted =
        run_scenario(make_preset("sec81-current-clip", {"radio_ufop.pass_limit_ma=120"}));
    CHECK(lifted.packets_sent == 6);
    CHECK(lifted.tx_failed_under_current == 0);
    CHECK(lifted.tx_failed_bank_depleted == 0);
}

TEST_CASE("every built-in preset resolves and validates") {
    for (const auto& [name, text] : builtin_presets()) {
        CAPTURE(name);
        CHECK_NOTHROW(scenario_from_json(nlohmann::json::parse(text)));
    }
}

TEST_CASE("current series records the rail draw when requested") {
    const SimResult r = run_scenario(
        make_preset("sec631-bench-16mA", {"record_current=true", "duration_s=2"}));
    CHECK(r.current_series.size() == 4000);  // 2 s at 0.5 ms
    CHECK(r.current_series.front().first == 0.0);
    CHECK(r.peak_current_ma > 0.0);
}
