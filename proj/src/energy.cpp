#include "sunlink/energy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sunlink/errors.hpp"

namespace sunlink {

CapacitorStep capacitor_step(const CapacitorState& cap, double net_current_ma, double dt_s) {
    if (dt_s <= 0.0) throw std::invalid_argument("capacitor_step: dt must be > 0");

    const double dv_raw = (net_current_ma / 1000.0) * dt_s / cap.capacitance_f;
    const double v_raw = cap.voltage_v + dv_raw;
    const double v_next = std::clamp(v_raw, 0.0, cap.clamp_v);
    const double shunt_q = cap.capacitance_f * (v_raw - v_next);

    CapacitorStep out;
    out.state = cap;
    out.state.voltage_v = v_next;
    out.state.shunted_c += std::abs(shunt_q);
    out.v_avg = 0.5 * (cap.voltage_v + v_next);
    out.shunt_energy_j = shunt_q * out.v_avg;
    return out;
}

double harvester_current(const HarvestProfile& profile, double t_s) {
    if (t_s < 0.0) throw std::invalid_argument("harvester_current: t must be >= 0");
    const double gain = profile.scale * profile.irradiance;

    switch (profile.kind) {
        case HarvestKind::Constant:
            return gain * profile.constant_ma;
        case HarvestKind::Diurnal: {
            const double phase = std::sin(2.0 * std::numbers::pi * t_s / profile.period_s);
            return gain * profile.amplitude_ma * std::max(0.0, phase);
        }
        case HarvestKind::Trace: {
            if (profile.samples.empty())
                throw ConfigError("harvest trace is empty");
            if (t_s < profile.samples.front().t_s) return 0.0;
            if (t_s >= profile.samples.back().t_s) {
                // zero-order hold ends at the last sample
                return t_s == profile.samples.back().t_s
                           ? gain * profile.samples.back().current_ma
                           : 0.0;
            }
            auto it = std::upper_bound(
                profile.samples.begin(), profile.samples.end(), t_s,
                [](double t, const HarvestSample& s) { return t < s.t_s; });
            return gain * std::prev(it)->current_ma;
        }
    }
    return 0.0;
}

HysteresisComparator comparator_step(const HysteresisComparator& comp, double v) {
    HysteresisComparator out = comp;
    if (v >= comp.v_on) {
        out.output = true;
    } else if (v <= comp.v_off) {
        out.output = false;
    }
    return out;
}

bool ufop_output_alive(const UfopUnit& unit) {
    return unit.bank.voltage_v >= unit.regulated_out_v + unit.dropout_v - 1e-12;
}

UfopStepResult ufop_step(const UfopUnit& unit, double rail_v, double load_demand_ma, double dt_s) {
    if (dt_s <= 0.0) throw std::invalid_argument("ufop_step: dt must be > 0");
    if (load_demand_ma < 0.0) throw std::invalid_argument("ufop_step: load demand must be >= 0");

    UfopStepResult out;
    out.unit = unit;
    out.unit.gate_closed = load_demand_ma > 0.0;

    // Gate path: min(demand, pass_limit) while the output regulator is alive.
    double gate_ma = 0.0;
    if (out.unit.gate_closed && ufop_output_alive(unit)) {
        gate_ma = std::min(load_demand_ma, unit.pass_limit_ma);
    }
    out.delivered_ma = gate_ma;
    out.under_supplied = out.unit.gate_closed && gate_ma < load_demand_ma - 1e-12;

    // Charging path: constant current toward the rail-driven target, sized to
    // land on the target without overshoot while covering the gate outflow.
    const double target = std::min({rail_v, unit.interrupt_v, unit.bank.clamp_v});
    double charge_ma = 0.0;
    const bool charging_allowed = unit.charge_while_gated || !out.unit.gate_closed;
    if (rail_v >= unit.charge_start_v && charging_allowed &&
        (unit.bank.voltage_v < target || gate_ma > 0.0)) {
        // sized to land on the target while covering the gate outflow
        const double needed_ma =
            (target - unit.bank.voltage_v) * unit.bank.capacitance_f / dt_s * 1000.0 + gate_ma;
        charge_ma = std::clamp(needed_ma, 0.0,
                               std::min(unit.pass_limit_ma, unit.charge_limit_ma));
    }
    out.charge_ma = charge_ma;

    const CapacitorStep step = capacitor_step(unit.bank, charge_ma - gate_ma, dt_s);
    out.unit.bank = step.state;
    out.bank_v_avg = step.v_avg;
    out.shunt_energy_j = step.shunt_energy_j;
    out.interrupt = out.unit.bank.voltage_v >= unit.interrupt_v - 1e-9;
    return out;
}

double deliverable_charge(const CapacitorState& bank, double v_hi, double v_lo) {
    if (v_lo >= v_hi) throw std::invalid_argument("deliverable_charge: v_lo must be < v_hi");
    if (v_hi > bank.clamp_v + 1e-12)
        throw std::invalid_argument("deliverable_charge: v_hi above the bank clamp");
    return bank.capacitance_f * (v_hi - v_lo);
}

}  // namespace sunlink
