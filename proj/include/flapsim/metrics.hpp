#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "flapsim/log.hpp"

namespace flapsim {

// Hover-quality summary over the window t >= window_start. Position errors
// compare the true position against the active setpoint; attitude excursions
// are the logged roll/pitch extrema; saturation duty is the fraction of
// control ticks with at least one clipped actuator channel.
struct MetricsSummary {
    double window_start{0.0};   // s
    std::size_t window_records{0};
    double max_e1{0.0};         // m
    double max_e2{0.0};         // m
    double max_e3{0.0};         // m
    double roll_min_deg{0.0};
    double roll_max_deg{0.0};
    double pitch_min_deg{0.0};
    double pitch_max_deg{0.0};
    double saturation_duty{0.0};  // fraction of ticks in [0, 1]
    double final_error{0.0};      // m, ||r - r_d|| at the last record
};

inline MetricsSummary compute_metrics(const ParsedLog& log, double window_start) {
    if (log.rows.empty()) throw std::runtime_error("metrics: log contains no records");
    const std::size_t it = log.column_index("t_s");
    const std::size_t ir1 = log.column_index("r1_m");
    const std::size_t ir2 = log.column_index("r2_m");
    const std::size_t ir3 = log.column_index("r3_m");
    const std::size_t id1 = log.column_index("r1_d_m");
    const std::size_t id2 = log.column_index("r2_d_m");
    const std::size_t id3 = log.column_index("r3_d_m");
    const std::size_t iroll = log.column_index("roll_deg");
    const std::size_t ipitch = log.column_index("pitch_deg");
    const std::size_t isat[4] = {log.column_index("sat1"), log.column_index("sat2"),
                                 log.column_index("sat3"), log.column_index("sat4")};

    MetricsSummary m;
    m.window_start = window_start;
    bool first = true;
    std::size_t saturated_ticks = 0;
    for (const auto& row : log.rows) {
        if (row[it] < window_start) continue;
        const double e1 = row[ir1] - row[id1];
        const double e2 = row[ir2] - row[id2];
        const double e3 = row[ir3] - row[id3];
        if (first) {
            m.roll_min_deg = m.roll_max_deg = row[iroll];
            m.pitch_min_deg = m.pitch_max_deg = row[ipitch];
            first = false;
        }
        m.max_e1 = std::max(m.max_e1, std::abs(e1));
        m.max_e2 = std::max(m.max_e2, std::abs(e2));
        m.max_e3 = std::max(m.max_e3, std::abs(e3));
        m.roll_min_deg = std::min(m.roll_min_deg, row[iroll]);
        m.roll_max_deg = std::max(m.roll_max_deg, row[iroll]);
        m.pitch_min_deg = std::min(m.pitch_min_deg, row[ipitch]);
        m.pitch_max_deg = std::max(m.pitch_max_deg, row[ipitch]);
        if (row[isat[0]] != 0.0 || row[isat[1]] != 0.0 || row[isat[2]] != 0.0 ||
            row[isat[3]] != 0.0)
            ++saturated_ticks;
        ++m.window_records;
        m.final_error = std::sqrt(e1 * e1 + e2 * e2 + e3 * e3);
    }
    if (m.window_records == 0)
        throw std::runtime_error("metrics: window starting at " + std::to_string(window_start) +
                                 " s contains no records");
    m.saturation_duty = static_cast<double>(saturated_ticks) /
                        static_cast<double>(m.window_records);
    return m;
}

inline std::string metrics_report(const MetricsSummary& m) {
    std::string out;
    auto line = [&out](const std::string& key, double value) {
        out += key + " = " + format_double(value) + "\n";
    };
    line("window_start_s", m.window_start);
    line("window_records", static_cast<double>(m.window_records));
    line("max_e1_m", m.max_e1);
    line("max_e2_m", m.max_e2);
    line("max_e3_m", m.max_e3);
    line("roll_min_deg", m.roll_min_deg);
    line("roll_max_deg", m.roll_max_deg);
    line("pitch_min_deg", m.pitch_min_deg);
    line("pitch_max_deg", m.pitch_max_deg);
    line("saturation_duty", m.saturation_duty);
    line("final_error_m", m.final_error);
    return out;
}

}  // namespace flapsim
