#include "sunlink/output.hpp"

#include <cstdio>

#include "sunlink/errors.hpp"

namespace sunlink {

std::string format_fixed9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void write_result(const SimResult& result, const std::filesystem::path& out_dir) {
    {
        auto out = open_output(out_dir / "summary.csv");
        out << "# config_digest=" << result.config_digest << "\n";
        out << "packets_sent,packets_delivered,pdr,tx_attempts,tx_failed_under_current,"
               "tx_failed_bank_depleted,brownouts,boot_events,boot_loops_detected,"
               "energy_harvested_j,energy_consumed_j,energy_shunted_j,"
               "energy_stored_delta_j,avg_current_ma,peak_current_ma,duration_s,"
               "airtime_s,tx_demand_ma\n";
        out << result.packets_sent << ',' << result.packets_delivered << ','
            << format_fixed9(result.pdr) << ',' << result.tx_attempts << ','
            << result.tx_failed_under_current << ',' << result.tx_failed_bank_depleted << ','
            << result.brownouts << ',' << result.boot_events << ','
            << result.boot_loops_detected << ',' << format_fixed9(result.energy_harvested_j)
            << ',' << format_fixed9(result.energy_consumed_j) << ','
            << format_fixed9(result.energy_shunted_j) << ','
            << format_fixed9(result.energy_stored_delta_j) << ','
            << format_fixed9(result.avg_current_ma) << ','
            << format_fixed9(result.peak_current_ma) << ','
            << format_fixed9(result.duration_s) << ',' << format_fixed9(result.airtime_s)
            << ',' << format_fixed9(result.tx_demand_ma) << "\n";
        if (!out) throw IoError("write failed: " + (out_dir / "summary.csv").string());
    }
    {
        auto out = open_output(out_dir / "events.csv");
        out << "# config_digest=" << result.config_digest << "\n";
        out << "t_s,node,event\n";
        for (const EngineEvent& e : result.event_log)
            out << format_fixed9(e.event.t_s) << ',' << e.node << ','
                << node_event_name(e.event.kind) << "\n";
        if (!out) throw IoError("write failed: " + (out_dir / "events.csv").string());
    }
    if (!result.current_series.empty()) {
        auto out = open_output(out_dir / "current.csv");
        out << "# config_digest=" << result.config_digest << "\n";
        out << "t_s,i_mA\n";
        for (const auto& [t, i] : result.current_series)
            out << format_fixed9(t) << ',' << format_fixed9(i) << "\n";
        if (!out) throw IoError("write failed: " + (out_dir / "current.csv").string());
    }
    {
        auto out = open_output(out_dir / "config.resolved");
        out << result.config_echo.dump(2) << "\n";
        if (!out) throw IoError("write failed: " + (out_dir / "config.resolved").string());
    }
}

}  // namespace sunlink
