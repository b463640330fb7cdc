#include "sunlink/node.hpp"

#include <algorithm>
#include <stdexcept>

namespace sunlink {

namespace {

constexpr double kTimeEps = 1e-12;

int phase_index(NodePhase p) { return static_cast<int>(p); }

}  // namespace

const char* node_event_name(NodeEventKind kind) {
    switch (kind) {
        case NodeEventKind::BootStarted: return "BootStarted";
        case NodeEventKind::BootCompleted: return "BootCompleted";
        case NodeEventKind::SenseDone: return "SenseDone";
        case NodeEventKind::TxStarted: return "TxStarted";
        case NodeEventKind::TxCompleted: return "TxCompleted";
        case NodeEventKind::TxFailedUnderCurrent: return "TxFailedUnderCurrent";
        case NodeEventKind::TxFailedBankDepleted: return "TxFailedBankDepleted";
        case NodeEventKind::Brownout: return "Brownout";
        case NodeEventKind::AckReceived: return "AckReceived";
    }
    return "Unknown";
}

double phase_current(NodePhase phase, const CurrentBudget& budget) {
    switch (phase) {
        case NodePhase::Off: return 0.0;
        case NodePhase::Booting: return budget.booting_ma;
        case NodePhase::Sleep: return budget.sleep_ma;
        case NodePhase::Sensing: return budget.sensing_ma + budget.sense_mcu_ma;
        case NodePhase::Transmitting: return budget.transmitting_ma + budget.tx_mcu_ma;
        case NodePhase::SearchIdle: return budget.search_idle_ma;
        case NodePhase::Receiving: return budget.receiving_ma;
    }
    return 0.0;
}

NodeStepResult node_step(NodeState state, const NodeInputs& in,
                         const CurrentBudget& budget, double duty_period_s,
                         double t_now_s, double dt_s) {
    if (dt_s <= 0.0) throw std::invalid_argument("node_step: dt must be > 0");
    if (dt_s > std::min(budget.boot_duration_s, budget.sense_duration_s) / 2.0 + kTimeEps)
        throw std::invalid_argument(
            "node_step: dt must not exceed half the shortest phase duration");

    NodeStepResult r;
    r.state = std::move(state);
    NodeState& s = r.state;

    double t = t_now_s;
    double remaining = dt_s;

    auto emit = [&](NodeEventKind kind, double when) { r.events.push_back({kind, when}); };
    auto occupy = [&](NodePhase phase, double secs) {
        r.occupancy_s[phase_index(phase)] += secs;
        s.duty_timer_s = std::max(0.0, s.duty_timer_s - secs);
        t += secs;
        remaining -= secs;
    };

    // Rail collapse preempts everything else this step.
    if (!in.rail_on && s.phase != NodePhase::Off) {
        const bool mid_cycle = s.phase == NodePhase::Booting || s.phase == NodePhase::Sensing ||
                               s.phase == NodePhase::Transmitting ||
                               s.phase == NodePhase::Receiving;
        if (mid_cycle) emit(NodeEventKind::Brownout, t);
        if (s.phase == NodePhase::Transmitting && !in.radio_bank_alive)
            emit(NodeEventKind::TxFailedBankDepleted, t);
        s.phase = NodePhase::Off;
        s.phase_elapsed_s = 0.0;
    }

    for (int guard = 0; remaining > kTimeEps && guard < 32; ++guard) {
        switch (s.phase) {
            case NodePhase::Off: {
                if (in.rail_on) {
                    emit(NodeEventKind::BootStarted, t);
                    s.boot_events.push_back({t, false});
                    s.phase = NodePhase::Booting;
                    s.phase_elapsed_s = 0.0;
                    continue;
                }
                occupy(NodePhase::Off, remaining);
                break;
            }
            case NodePhase::Booting: {
                const double use =
                    std::min(remaining, budget.boot_duration_s - s.phase_elapsed_s);
                occupy(NodePhase::Booting, use);
                s.phase_elapsed_s += use;
                if (s.phase_elapsed_s >= budget.boot_duration_s - kTimeEps) {
                    emit(NodeEventKind::BootCompleted, t);
                    s.phase = s.role == NodeRole::Receiver ? NodePhase::SearchIdle
                                                           : NodePhase::Sleep;
                    s.phase_elapsed_s = 0.0;
                    s.duty_timer_s = 0.0;  // first duty cycle runs right after boot
                }
                break;
            }
            case NodePhase::Sleep: {
                if (s.duty_timer_s <= kTimeEps && in.sensor_interrupt) {
                    s.duty_timer_s = duty_period_s;  // cadence anchored at cycle start
                    s.phase = NodePhase::Sensing;
                    s.phase_elapsed_s = 0.0;
                    continue;
                }
                const double until_tick = in.sensor_interrupt ? s.duty_timer_s : remaining;
                occupy(NodePhase::Sleep, std::min(remaining, std::max(until_tick, 0.0)));
                break;
            }
            case NodePhase::Sensing: {
                if (!in.sensor_bank_alive) {
                    // sensor supply collapsed; abandon the cycle
                    s.phase = NodePhase::Sleep;
                    s.phase_elapsed_s = 0.0;
                    continue;
                }
                const double use =
                    std::min(remaining, budget.sense_duration_s - s.phase_elapsed_s);
                occupy(NodePhase::Sensing, use);
                s.phase_elapsed_s += use;
                if (s.phase_elapsed_s >= budget.sense_duration_s - kTimeEps) {
                    emit(NodeEventKind::SenseDone, t);
                    s.phase_elapsed_s = 0.0;
                    if (s.role == NodeRole::Transmitter && in.radio_interrupt) {
                        emit(NodeEventKind::TxStarted, t);
                        s.phase = NodePhase::Transmitting;
                    } else {
                        s.phase = NodePhase::Sleep;  // cycle incomplete
                    }
                }
                break;
            }
            case NodePhase::Transmitting: {
                if (in.radio_under_current) {
                    emit(NodeEventKind::TxFailedUnderCurrent, t);
                    s.phase = NodePhase::Sleep;
                    s.phase_elapsed_s = 0.0;
                    continue;
                }
                if (!in.radio_bank_alive) {
                    emit(NodeEventKind::TxFailedBankDepleted, t);
                    s.phase = NodePhase::Sleep;
                    s.phase_elapsed_s = 0.0;
                    continue;
                }
                const double use = std::min(remaining, budget.tx_duration_s - s.phase_elapsed_s);
                occupy(NodePhase::Transmitting, std::max(use, 0.0));
                s.phase_elapsed_s += std::max(use, 0.0);
                if (s.phase_elapsed_s >= budget.tx_duration_s - kTimeEps) {
                    emit(NodeEventKind::TxCompleted, t);
                    ++s.packets_sent;
                    if (!s.boot_events.empty()) s.boot_events.back().completed_cycle = true;
                    s.phase = NodePhase::Sleep;
                    s.phase_elapsed_s = 0.0;
                }
                break;
            }
            case NodePhase::SearchIdle: {
                if (in.incoming_packet) {
                    s.phase = NodePhase::Receiving;
                    s.phase_elapsed_s = 0.0;
                    continue;
                }
                occupy(NodePhase::SearchIdle, remaining);
                break;
            }
            case NodePhase::Receiving: {
                if (!in.incoming_packet) {
                    s.phase = NodePhase::SearchIdle;
                    s.phase_elapsed_s = 0.0;
                    continue;
                }
                occupy(NodePhase::Receiving, remaining);
                break;
            }
        }
    }

    double charge = 0.0;
    for (int p = 0; p < kNumPhases; ++p)
        charge += r.occupancy_s[p] * phase_current(static_cast<NodePhase>(p), budget);
    r.demand_ma = charge / dt_s;
    return r;
}

bool detect_boot_loop(const std::vector<BootRecord>& boots, int k, double window_s) {
    if (k < 2) throw std::invalid_argument("detect_boot_loop: k must be >= 2");
    if (window_s <= 0.0) throw std::invalid_argument("detect_boot_loop: window must be > 0");

    int run_start = 0;
    for (int i = 0; i < static_cast<int>(boots.size()); ++i) {
        if (boots[i].completed_cycle) {
            run_start = i + 1;
            continue;
        }
        if (i - run_start + 1 >= k && boots[i].t_s - boots[i - k + 1].t_s <= window_s)
            return true;
    }
    return false;
}

TxFeasibility tx_feasibility(const CapacitorState& bank, double v_interrupt,
                             double v_min_operate, double i_tx_ma, double airtime_s) {
    if (v_min_operate >= v_interrupt)
        throw std::invalid_argument("tx_feasibility: v_min_operate must be < v_interrupt");

    TxFeasibility out;
    out.required_c = (i_tx_ma / 1000.0) * airtime_s;
    out.available_c = deliverable_charge(bank, v_interrupt, v_min_operate);
    out.feasible = out.available_c >= out.required_c;
    out.shortfall_c = out.feasible ? 0.0 : out.required_c - out.available_c;
    return out;
}

}  // namespace sunlink
