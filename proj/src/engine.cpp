#include "sunlink/engine.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "sunlink/errors.hpp"
#include "sunlink/rng.hpp"

namespace sunlink {

namespace {

constexpr double kVoltEps = 1e-9;

double occupancy(const NodeStepResult& r, NodePhase p) {
    return r.occupancy_s[static_cast<int>(p)];
}

double capacitor_energy(const CapacitorState& c) {
    return 0.5 * c.capacitance_f * c.voltage_v * c.voltage_v;
}

long count_boot_loops(const std::vector<BootRecord>& boots, int k, double window_s) {
    long count = 0;
    int run_start = 0;
    int next_free = 0;  // greedy: groups must not overlap
    for (int i = 0; i < static_cast<int>(boots.size()); ++i) {
        if (boots[i].completed_cycle) {
            run_start = i + 1;
            continue;
        }
        const int group_start = i - k + 1;
        if (group_start >= std::max(run_start, next_free) &&
            boots[i].t_s - boots[group_start].t_s <= window_s) {
            ++count;
            next_free = i + 1;
        }
    }
    return count;
}

// The batteryless-receiver variant: its own panel, storage and comparator.
struct ReceiverStack {
    CapacitorState cap;
    HysteresisComparator comparator;
    NodeState node;
};

}  // namespace

SimResult run_scenario(const Scenario& sc) {
    SimResult res;
    res.config_echo = sc.resolved;
    res.config_digest = config_digest(sc.resolved);
    res.duration_s = sc.duration_s;

    CurrentBudget budget = sc.budget;
    budget.tx_duration_s = radio_airtime(sc.radio, sc.payload_len);
    budget.transmitting_ma =
        tx_current(radio_current_curve(sc.radio), radio_tx_power(sc.radio));
    res.airtime_s = budget.tx_duration_s;
    res.tx_demand_ma = budget.transmitting_ma;

    const double sensitivity_dbm = radio_sensitivity(sc.radio);
    const double ptx_dbm = radio_tx_power(sc.radio);
    const double dt = sc.dt_s;

    CapacitorState main_cap = sc.main_cap;
    HysteresisComparator comparator = sc.comparator;
    UfopUnit radio_ufop = sc.radio_ufop;
    UfopUnit sensor_ufop = sc.sensor_ufop;

    NodeState tx_node;
    tx_node.role = NodeRole::Transmitter;

    const bool model_rx = !sc.receiver_powered;
    ReceiverStack rx;
    rx.cap = sc.main_cap;
    rx.comparator = sc.comparator;
    rx.node.role = NodeRole::Receiver;

    double stored_start = capacitor_energy(main_cap) + capacitor_energy(radio_ufop.bank) +
                          capacitor_energy(sensor_ufop.bank);
    if (model_rx) stored_start += capacitor_energy(rx.cap);

    const long steps = static_cast<long>(std::floor(sc.duration_s / dt + 1e-9));
    std::uint64_t packet_index = 0;
    double charge_consumed_c = 0.0;

    for (long k = 0; k < steps; ++k) {
        const double t = k * dt;

        // Rail state from the comparator on the stored-rail voltage.
        comparator = comparator_step(comparator, main_cap.voltage_v);
        const bool rail_on = comparator.output;
        const double rail_v = rail_on ? main_cap.voltage_v : 0.0;

        NodeInputs in;
        in.rail_on = rail_on;
        in.radio_interrupt = radio_ufop.bank.voltage_v >= radio_ufop.interrupt_v - kVoltEps;
        in.sensor_interrupt = sensor_ufop.bank.voltage_v >= sensor_ufop.interrupt_v - kVoltEps;
        in.radio_under_current =
            budget.transmitting_ma > radio_ufop.pass_limit_ma + kVoltEps;
        in.radio_bank_alive = ufop_output_alive(radio_ufop);
        in.sensor_bank_alive = ufop_output_alive(sensor_ufop);

        NodeStepResult ns = node_step(std::move(tx_node), in, budget, sc.duty_period_s, t, dt);
        tx_node = std::move(ns.state);

        // Peripheral loads run through their banks; phase boundaries inside
        // the step are billed by occupancy so charge totals are dt-exact.
        const double radio_demand_ma =
            budget.transmitting_ma * occupancy(ns, NodePhase::Transmitting) / dt;
        const double sensor_demand_ma =
            budget.sensing_ma * occupancy(ns, NodePhase::Sensing) / dt;
        const UfopStepResult ru = ufop_step(radio_ufop, rail_v, radio_demand_ma, dt);
        const UfopStepResult su = ufop_step(sensor_ufop, rail_v, sensor_demand_ma, dt);
        radio_ufop = ru.unit;
        sensor_ufop = su.unit;

        // Rail-side draw: MCU phases plus both charging paths.
        const double mcu_ma =
            (occupancy(ns, NodePhase::Booting) * budget.booting_ma +
             occupancy(ns, NodePhase::Sleep) * budget.sleep_ma +
             occupancy(ns, NodePhase::SearchIdle) * budget.search_idle_ma +
             occupancy(ns, NodePhase::Receiving) * budget.receiving_ma +
             occupancy(ns, NodePhase::Sensing) * budget.sense_mcu_ma +
             occupancy(ns, NodePhase::Transmitting) * budget.tx_mcu_ma) /
            dt;
        const double outflow_ma = mcu_ma + ru.charge_ma + su.charge_ma;

        double supply_ma = 0.0;
        if (sc.supply.mode == SupplyConfig::Mode::Harvested) {
            supply_ma = harvester_current(sc.harvest, t);
        } else {
            // Bench PSU in CV operation with a current limit: source whatever
            // holds the setpoint, up to the limit.
            const double to_setpoint_ma = (sc.supply.voltage_v - main_cap.voltage_v) *
                                          main_cap.capacitance_f / dt * 1000.0;
            supply_ma = std::clamp(to_setpoint_ma + outflow_ma, 0.0,
                                   sc.supply.current_limit_ma);
        }

        const CapacitorStep ms = capacitor_step(main_cap, supply_ma - outflow_ma, dt);
        main_cap = ms.state;

        res.energy_harvested_j += supply_ma / 1000.0 * dt * ms.v_avg;
        res.energy_shunted_j += ms.shunt_energy_j + ru.shunt_energy_j + su.shunt_energy_j;
        res.energy_consumed_j += mcu_ma / 1000.0 * dt * ms.v_avg;
        // Pass-element drop between the raw rail and each bank.
        res.energy_consumed_j += ru.charge_ma / 1000.0 * dt * (ms.v_avg - ru.bank_v_avg);
        res.energy_consumed_j += su.charge_ma / 1000.0 * dt * (ms.v_avg - su.bank_v_avg);
        // Peripheral draw (radio, sensor and their regulators).
        res.energy_consumed_j += ru.delivered_ma / 1000.0 * dt * ru.bank_v_avg;
        res.energy_consumed_j += su.delivered_ma / 1000.0 * dt * su.bank_v_avg;

        charge_consumed_c += outflow_ma / 1000.0 * dt;
        res.peak_current_ma = std::max(res.peak_current_ma, outflow_ma);
        if (sc.record_current) res.current_series.emplace_back(t, outflow_ma);

        // Receiver side.
        bool rx_listening = true;
        if (model_rx) {
            rx.comparator = comparator_step(rx.comparator, rx.cap.voltage_v);
            NodeInputs rin;
            rin.rail_on = rx.comparator.output;
            rin.incoming_packet = occupancy(ns, NodePhase::Transmitting) > 0.0;
            NodeStepResult rs =
                node_step(std::move(rx.node), rin, budget, sc.duty_period_s, t, dt);
            rx.node = std::move(rs.state);

            const double rx_outflow_ma =
                (occupancy(rs, NodePhase::Booting) * budget.booting_ma +
                 occupancy(rs, NodePhase::SearchIdle) * budget.search_idle_ma +
                 occupancy(rs, NodePhase::Receiving) * budget.receiving_ma) /
                dt;
            const double rx_supply_ma = harvester_current(sc.harvest, t);
            const CapacitorStep rss =
                capacitor_step(rx.cap, rx_supply_ma - rx_outflow_ma, dt);
            rx.cap = rss.state;
            res.energy_harvested_j += rx_supply_ma / 1000.0 * dt * rss.v_avg;
            res.energy_consumed_j += rx_outflow_ma / 1000.0 * dt * rss.v_avg;
            res.energy_shunted_j += rss.shunt_energy_j;

            rx_listening = occupancy(rs, NodePhase::SearchIdle) +
                               occupancy(rs, NodePhase::Receiving) >=
                           dt - 1e-12;
            for (const NodeEvent& ev : rs.events) {
                res.event_log.push_back({"rx", ev});
                if (ev.kind == NodeEventKind::Brownout) ++res.brownouts;
            }
        }

        for (const NodeEvent& ev : ns.events) {
            res.event_log.push_back({"tx", ev});
            switch (ev.kind) {
                case NodeEventKind::TxStarted:
                    ++res.tx_attempts;
                    break;
                case NodeEventKind::TxCompleted: {
                    RandomStream stream = packet_stream(sc.seed, packet_index++);
                    const bool link_ok = sample_packet_outcome(sc.channel, sensitivity_dbm,
                                                               ptx_dbm, sc.distance_m, stream);
                    if (link_ok && rx_listening) {
                        ++res.packets_delivered;
                        res.event_log.push_back(
                            {"tx", {NodeEventKind::AckReceived, ev.t_s}});
                    }
                    break;
                }
                case NodeEventKind::TxFailedUnderCurrent:
                    ++res.tx_failed_under_current;
                    break;
                case NodeEventKind::TxFailedBankDepleted:
                    ++res.tx_failed_bank_depleted;
                    break;
                case NodeEventKind::Brownout:
                    ++res.brownouts;
                    break;
                default:
                    break;
            }
        }
    }

    res.packets_sent = tx_node.packets_sent;
    res.pdr = res.packets_sent > 0
                  ? static_cast<double>(res.packets_delivered) / res.packets_sent
                  : 0.0;
    res.boot_events = static_cast<long>(tx_node.boot_events.size());
    res.boot_loops_detected =
        count_boot_loops(tx_node.boot_events, sc.boot_loop.k, sc.boot_loop.window_s);

    double stored_end = capacitor_energy(main_cap) + capacitor_energy(radio_ufop.bank) +
                        capacitor_energy(sensor_ufop.bank);
    if (model_rx) stored_end += capacitor_energy(rx.cap);
    res.energy_stored_delta_j = stored_end - stored_start;
    res.avg_current_ma =
        sc.duration_s > 0.0 ? charge_consumed_c / sc.duration_s * 1000.0 : 0.0;
    return res;
}

std::vector<SweepRow> sweep(const Scenario& base, const std::string& param_path,
                            const std::vector<double>& values, int per_point_seeds) {
    if (per_point_seeds < 1) throw ConfigError("sweep: per_point_seeds must be >= 1");

    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (const double value : values) {
        SweepRow row;
        row.value = value;
        for (int s = 0; s < per_point_seeds; ++s) {
            nlohmann::json doc = base.resolved;
            set_numeric_path(doc, param_path, value);
            doc["seed"] = base.seed + static_cast<std::uint64_t>(s);
            const Scenario variant = scenario_from_json(doc);
            row.runs.push_back(run_scenario(variant));
        }
        for (const SimResult& r : row.runs) {
            row.mean_pdr += r.pdr;
            row.mean_sent += static_cast<double>(r.packets_sent);
            row.mean_delivered += static_cast<double>(r.packets_delivered);
            row.mean_avg_current_ma += r.avg_current_ma;
            row.mean_energy_consumed_j += r.energy_consumed_j;
        }
        const double n = static_cast<double>(row.runs.size());
        row.mean_pdr /= n;
        row.mean_sent /= n;
        row.mean_delivered /= n;
        row.mean_avg_current_ma /= n;
        row.mean_energy_consumed_j /= n;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::optional<double> max_range_m(const std::vector<SweepRow>& rows) {
    std::optional<double> best;
    for (const SweepRow& row : rows) {
        if (row.mean_pdr >= 0.5 && (!best || row.value > *best)) best = row.value;
    }
    return best;
}

}  // namespace sunlink
