#pragma once

#include <array>
#include <vector>

#include "sunlink/energy.hpp"

namespace sunlink {

enum class NodePhase { Off, Booting, Sleep, Sensing, Transmitting, SearchIdle, Receiving };
inline constexpr int kNumPhases = 7;

enum class NodeRole { Transmitter, Receiver };

// Per-phase current draws plus phase durations. Transmit draw and duration
// are resolved by the engine from the radio configuration. Draws are
// system-level: the measured radio curves already include the MCU, so the
// separate MCU terms default to zero.
struct CurrentBudget {
    double booting_ma = 5.0;
    double sleep_ma = 1.8;
    double sensing_ma = 2.0;       // drawn from the sensor bank
    double transmitting_ma = 0.0;  // drawn from the radio bank (resolved)
    double search_idle_ma = 12.0;
    double receiving_ma = 10.0;
    double sense_mcu_ma = 0.0;     // rail-side extras during Sensing
    double tx_mcu_ma = 0.0;        // rail-side extras during Transmitting
    double boot_duration_s = 0.1;
    double sense_duration_s = 0.2;
    double tx_duration_s = 0.0;    // packet airtime (resolved)
};

struct BootRecord {
    double t_s = 0.0;
    bool completed_cycle = false;
};

struct NodeState {
    NodePhase phase = NodePhase::Off;
    double phase_elapsed_s = 0.0;
    double duty_timer_s = 0.0;
    long packets_sent = 0;
    std::vector<BootRecord> boot_events;
    NodeRole role = NodeRole::Transmitter;
};

enum class NodeEventKind {
    BootStarted,
    BootCompleted,
    SenseDone,
    TxStarted,
    TxCompleted,
    TxFailedUnderCurrent,
    TxFailedBankDepleted,
    Brownout,
    AckReceived,
};

struct NodeEvent {
    NodeEventKind kind;
    double t_s = 0.0;
};

const char* node_event_name(NodeEventKind kind);

struct NodeInputs {
    bool rail_on = false;
    bool radio_interrupt = false;
    bool sensor_interrupt = false;
    bool radio_under_current = false;  // transmit demand exceeds the radio path limit
    bool radio_bank_alive = true;      // radio bank LDO above dropout
    bool sensor_bank_alive = true;
    bool incoming_packet = false;      // receiver role only
};

struct NodeStepResult {
    NodeState state;
    std::vector<NodeEvent> events;
    double demand_ma = 0.0;                        // mean draw over the step
    std::array<double, kNumPhases> occupancy_s{};  // time spent per phase
};

// Advance the duty-cycle state machine by dt. Phase boundaries inside the
// step are split exactly, so per-phase charge billing is independent of dt.
// Requires dt <= min(boot_duration, sense_duration) / 2. The state is taken
// by value; move it in when the caller no longer needs its copy.
NodeStepResult node_step(NodeState state, const NodeInputs& in,
                         const CurrentBudget& budget, double duty_period_s,
                         double t_now_s, double dt_s);

// Table lookup; Transmitting and Sensing include their rail-side MCU terms.
double phase_current(NodePhase phase, const CurrentBudget& budget);

// True iff some k consecutive boot events fall within a window and none of
// them completed a duty cycle.
bool detect_boot_loop(const std::vector<BootRecord>& boots, int k, double window_s);

struct TxFeasibility {
    bool feasible = false;
    double required_c = 0.0;
    double available_c = 0.0;
    double shortfall_c = 0.0;  // 0 when feasible
};

// Worst-case check: can the bank alone, drained from the interrupt level down
// to the minimum operating rail, deliver one whole packet. Rail assist is
// excluded on purpose.
TxFeasibility tx_feasibility(const CapacitorState& bank, double v_interrupt,
                             double v_min_operate, double i_tx_ma, double airtime_s);

}  // namespace sunlink
