#pragma once

#include <string>
#include <vector>

namespace sunlink {

// An ideal capacitor with a Zener-style clamp. Charge pushed above the clamp
// (or pulled below ground) is diverted and tallied in shunted_c.
struct CapacitorState {
    double capacitance_f = 100e-6;
    double voltage_v = 0.0;
    double clamp_v = 5.1;
    double shunted_c = 0.0;
};

struct CapacitorStep {
    CapacitorState state;
    double v_avg = 0.0;           // mean terminal voltage over the step
    double shunt_energy_j = 0.0;  // energy diverted at the clamp this step (signed)
};

// Explicit Euler with the net current held constant over dt. Clamping is the
// defined behaviour, not an error; the step satisfies
//   net_current * dt * v_avg == dE_stored + shunt_energy
// exactly, which is what makes whole-run energy closure checkable.
CapacitorStep capacitor_step(const CapacitorState& cap, double net_current_ma, double dt_s);

enum class HarvestKind { Constant, Trace, Diurnal };

struct HarvestSample {
    double t_s = 0.0;
    double current_ma = 0.0;
};

struct HarvestProfile {
    HarvestKind kind = HarvestKind::Constant;
    double constant_ma = 70.0;        // one panel in full sun
    std::vector<HarvestSample> samples;  // kind == Trace, times strictly increasing
    double amplitude_ma = 70.0;       // kind == Diurnal
    double period_s = 86400.0;
    double scale = 1.0;               // panel count
    double irradiance = 1.0;          // 1 = full sun; indoor presets use 0.05
};

// Harvest current at time t. Trace profiles use zero-order hold between
// samples, 0 mA before the first and after the last sample.
double harvester_current(const HarvestProfile& profile, double t_s);

struct HysteresisComparator {
    double v_on = 3.38;
    double v_off = 3.05;
    bool output = false;
};

// Two-threshold comparator: on at v >= v_on, off at v <= v_off, held between.
HysteresisComparator comparator_step(const HysteresisComparator& comp, double v);

// One federated per-peripheral energy bank: a capacitor charged from the rail
// through a current-limited path, drained through a gate into the peripheral,
// and regulated by an ideal LDO on the way out.
struct UfopUnit {
    std::string name;
    double charge_start_v = 3.3;   // rail level at which charging begins
    double interrupt_v = 3.5;      // bank level raising the full-charge interrupt
    CapacitorState bank;
    bool gate_closed = false;      // true = peripheral drawing from the bank
    double pass_limit_ma = 20.0;   // max current through the charging/gating path
    double regulated_out_v = 3.0;  // LDO output level
    double dropout_v = 0.1;        // LDO collapses when bank < out + dropout
    double charge_limit_ma = 1e9;  // optional cap on the charging current
    bool charge_while_gated = true;
};

struct UfopStepResult {
    UfopUnit unit;
    bool interrupt = false;
    double delivered_ma = 0.0;   // current actually passed to the peripheral
    bool under_supplied = false; // delivered < demand
    double charge_ma = 0.0;      // current drawn from the rail this step
    double bank_v_avg = 0.0;
    double shunt_energy_j = 0.0;
};

// Advance one bank by dt. Charging runs while rail_v >= charge_start_v and
// the bank sits below its target min(rail_v, interrupt_v, clamp), at a current
// never exceeding min(pass_limit, charge_limit). The gate passes
// min(load_demand, pass_limit) while the LDO is above dropout.
UfopStepResult ufop_step(const UfopUnit& unit, double rail_v, double load_demand_ma, double dt_s);

// True when the bank's output regulator is above dropout.
bool ufop_output_alive(const UfopUnit& unit);

// Charge extractable from a bank while staying above the peripheral's minimum
// operating rail: capacitance * (v_hi - v_lo).
double deliverable_charge(const CapacitorState& bank, double v_hi, double v_lo);

}  // namespace sunlink
