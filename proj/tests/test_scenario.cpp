#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "sunlink/errors.hpp"
#include "sunlink/scenario.hpp"

using namespace sunlink;
using nlohmann::json;

namespace {

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("empty document resolves to the documented defaults") {
    const Scenario sc = scenario_from_json(json::object());
    CHECK(sc.duration_s == 60.0);
    CHECK(sc.dt_s == 0.001);
    CHECK(sc.main_cap.capacitance_f == doctest::Approx(100e-6));
    CHECK(sc.main_cap.clamp_v == 5.1);
    CHECK(sc.comparator.v_on == 3.38);
    CHECK(sc.comparator.v_off == 3.05);
    CHECK(sc.radio_ufop.charge_start_v == 3.3);
    CHECK(sc.radio_ufop.interrupt_v == 3.5);
    CHECK(sc.radio_ufop.pass_limit_ma == 20.0);
    CHECK(sc.sensor_ufop.charge_start_v == 3.2);
    CHECK(sc.sensor_ufop.bank.capacitance_f == doctest::Approx(22e-6));
    CHECK(sc.duty_period_s == 10.0);
    CHECK(sc.budget.sleep_ma == 1.8);
    CHECK(std::holds_alternative<LoRaConfig>(sc.radio));
    CHECK(std::get<LoRaConfig>(sc.radio).tx_power_dbm == 5.0);
    CHECK(sc.harvest.constant_ma == 70.0);
}

TEST_CASE("unknown keys are rejected by path") {
    json j = {{"durations", 60}};
    CHECK_THROWS_WITH_AS(scenario_from_json(j),
                         doctest::Contains("durations: unknown key"), ConfigError);

    json nested = {{"radio_ufop", {{"pass_limit", 20}}}};
    CHECK_THROWS_WITH_AS(scenario_from_json(nested),
                         doctest::Contains("radio_ufop.pass_limit: unknown key"), ConfigError);
}

TEST_CASE("validation reports every violated field at once") {
    json j;
    j["dt_s"] = -1.0;
    j["duty_period_s"] = 0.0;
    j["comparator"] = {{"v_on", 3.0}, {"v_off", 3.2}};
    try {
        scenario_from_json(j);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("dt_s") != std::string::npos);
        CHECK(what.find("duty_period_s") != std::string::npos);
        CHECK(what.find("v_off must be strictly below v_on") != std::string::npos);
    }
}

TEST_CASE("radio validation enforces the hardware spans") {
    json j;
    j["radio"] = {{"type", "lora"}, {"tx_power_dbm", 24.0}};
    CHECK_THROWS_WITH_AS(scenario_from_json(j), doctest::Contains("tx_power_dbm"),
                         ConfigError);

    json k;
    k["radio"] = {{"type", "cc1101"}, {"tx_power_dbm", 11.0}};
    CHECK_THROWS_WITH_AS(scenario_from_json(k), doctest::Contains("[-30, 10]"), ConfigError);

    json bad_type;
    bad_type["radio"] = {{"type", "zigbee"}};
    CHECK_THROWS_AS(scenario_from_json(bad_type), ConfigError);
}

TEST_CASE("low data rate optimisation resolves per the 16 ms symbol rule") {
    json j;
    j["radio"] = {{"type", "lora"}, {"spreading_factor", 12}};
    const Scenario sc = scenario_from_json(j);
    CHECK(std::get<LoRaConfig>(sc.radio).low_data_rate_opt);
    CHECK(sc.resolved.at("radio").at("low_data_rate_opt").get<bool>());

    const Scenario sf7 = scenario_from_json(json::object());
    CHECK_FALSE(std::get<LoRaConfig>(sf7.radio).low_data_rate_opt);
}

TEST_CASE("harvest trace file is parsed with zero-order-hold samples") {
    const auto path = temp_file("sunlink-trace-ok.csv", "t_s,i_mA\n0,10\n5,30\n");
    const HarvestProfile h = load_trace(path.string());
    REQUIRE(h.samples.size() == 2);
    CHECK(h.samples[1].t_s == 5.0);
    CHECK(harvester_current(h, 2.5) == 10.0);
}

TEST_CASE("harvest trace errors carry line numbers") {
    const auto header_only = temp_file("sunlink-trace-empty.csv", "t_s,i_mA\n");
    CHECK_THROWS_WITH_AS(load_trace(header_only.string()), doctest::Contains("empty trace"),
                         ConfigError);

    const auto negative = temp_file("sunlink-trace-neg.csv", "t_s,i_mA\n0,10\n5,-2\n");
    CHECK_THROWS_WITH_AS(load_trace(negative.string()), doctest::Contains(":3:"), ConfigError);

    const auto unsorted = temp_file("sunlink-trace-unsorted.csv", "t_s,i_mA\n5,10\n1,20\n");
    CHECK_THROWS_WITH_AS(load_trace(unsorted.string()),
                         doctest::Contains("strictly increasing"), ConfigError);

    const auto garbled = temp_file("sunlink-trace-bad.csv", "t_s,i_mA\n0,ten\n");
    CHECK_THROWS_WITH_AS(load_trace(garbled.string()), doctest::Contains(":2:"), ConfigError);
}

TEST_CASE("trace scenarios inline their samples into the resolved echo") {
    const auto path = temp_file("sunlink-trace-inline.csv", "t_s,i_mA\n0,10\n5,30\n");
    json j;
    j["harvest"] = {{"kind", "trace"}, {"trace_path", path.filename().string()}};
    const Scenario sc =
        scenario_from_json(j, std::filesystem::temp_directory_path().string());
    CHECK(sc.resolved.at("harvest").at("samples").size() == 2);
    // the echo must stand alone: re-parsing it needs no file access
    const Scenario again = scenario_from_json(sc.resolved, "/nonexistent");
    CHECK(again.harvest.samples.size() == 2);
}

TEST_CASE("set overrides parse numbers, booleans and strings") {
    json j = json::object();
    apply_set_override(j, "radio.tx_power_dbm=11");
    apply_set_override(j, "radio_ufop.charge_while_gated=false");
    apply_set_override(j, "harvest.kind=diurnal");
    CHECK(j["radio"]["tx_power_dbm"] == 11);
    CHECK(j["radio_ufop"]["charge_while_gated"] == false);
    CHECK(j["harvest"]["kind"] == "diurnal");
    CHECK_THROWS_AS(apply_set_override(j, "no-equals-sign"), ConfigError);
}

TEST_CASE("numeric path setter rejects unknown paths and names valid ones") {
    json doc = default_scenario_json();
    set_numeric_path(doc, "radio.tx_power_dbm", 9.0);
    CHECK(doc["radio"]["tx_power_dbm"] == 9.0);
    try {
        set_numeric_path(doc, "radio.txpower", 9.0);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        CHECK(what.find("radio.tx_power_dbm") != std::string::npos);
        CHECK(what.find("distance_m") != std::string::npos);
    }
    CHECK_THROWS_AS(set_numeric_path(doc, "name", 1.0), ConfigError);
}

TEST_CASE("config digest is stable and content-sensitive") {
    json a = default_scenario_json();
    json b = default_scenario_json();
    CHECK(config_digest(a) == config_digest(b));
    b["seed"] = 2;
    CHECK(config_digest(a) != config_digest(b));
    CHECK(config_digest(a).size() == 16);
}

TEST_CASE("zero-duration scenarios are valid") {
    json j = {{"duration_s", 0.0}};
    CHECK_NOTHROW(scenario_from_json(j));
}

TEST_CASE("scenario files load with overrides applied") {
    const auto path = temp_file("sunlink-scn.json", R"({"duration_s": 30})");
    const Scenario sc =
        load_scenario_file(path.string(), {"radio.tx_power_dbm=11"}, 77);
    CHECK(sc.duration_s == 30.0);
    CHECK(sc.seed == 77);
    CHECK(std::get<LoRaConfig>(sc.radio).tx_power_dbm == 11.0);
    CHECK_THROWS_AS(load_scenario_file("/nonexistent.json"), ConfigError);

    const auto garbage = temp_file("sunlink-scn-bad.json", "{not json");
    CHECK_THROWS_AS(load_scenario_file(garbage.string()), ConfigError);
}

TEST_CASE("trace profiles report zero before their first sample") {
    HarvestProfile h;
    h.kind = HarvestKind::Trace;
    h.samples = {{2.0, 15.0}, {4.0, 30.0}};
    CHECK(harvester_current(h, 0.5) == 0.0);
    CHECK(harvester_current(h, 2.0) == 15.0);
}
