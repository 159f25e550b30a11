#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "flapsim/config_io.hpp"
#include "flapsim/quat.hpp"
#include "flapsim/wrench.hpp"

namespace flapsim {

// Z-Y-X (yaw-pitch-roll) Euler angles, radians. Reporting only; control never
// touches Euler angles.
struct EulerZYX {
    double roll{0.0};
    double pitch{0.0};
    double yaw{0.0};
};

inline EulerZYX euler_zyx(const Quat& q) {
    const double w = q.w, x = q.v.x, y = q.v.y, z = q.v.z;
    EulerZYX e;
    e.roll = std::atan2(2.0 * (w * x + y * z), 1.0 - 2.0 * (x * x + y * y));
    const double sp = std::clamp(2.0 * (w * y - z * x), -1.0, 1.0);
    e.pitch = std::asin(sp);
    e.yaw = std::atan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z));
    return e;
}

constexpr double rad_to_deg(double r) { return r * 180.0 / std::numbers::pi; }
constexpr double deg_to_rad(double d) { return d * std::numbers::pi / 180.0; }

inline Quat quat_from_euler_zyx(const EulerZYX& e) {
    const Quat q = Quat::from_axis_angle(Vec3::unit_z(), e.yaw) *
                   Quat::from_axis_angle(Vec3::unit_y(), e.pitch) *
                   Quat::from_axis_angle(Vec3::unit_x(), e.roll);
    return q.normalized().value_or(Quat{});
}

// One row per control tick. Actuator commands use the generic v1..v4 naming:
// for the two-winged robot they hold (theta_amp, theta_roll, theta_pitch,
// theta_yaw) in that order.
struct LogRecord {
    double t{0.0};
    // true state
    Vec3 r{};
    Vec3 v{};
    Quat q{};
    Vec3 omega{};
    // estimator output consumed by the controller this tick
    Vec3 r_est{};
    Vec3 v_est{};
    Quat q_est{};
    Vec3 omega_est{};
    // active setpoint and the desired attitude actually used
    Vec3 r_d{};
    double psi_d{0.0};
    Quat q_d{};
    // controller wrench before allocation
    Wrench wrench_cmd{};
    // saturated actuator commands and per-channel clip flags
    std::array<double, 4> cmd{};
    std::array<bool, 4> sat{};
    // forward-mixed wrench actually applied to the plant until the next tick
    Wrench wrench_app{};
};

inline constexpr std::array<std::string_view, 54> kLogColumns = {
    "t_s",
    "r1_m", "r2_m", "r3_m",
    "v1_mps", "v2_mps", "v3_mps",
    "qw", "qx", "qy", "qz",
    "roll_deg", "pitch_deg", "yaw_deg",
    "w1_radps", "w2_radps", "w3_radps",
    "r1_est_m", "r2_est_m", "r3_est_m",
    "v1_est_mps", "v2_est_mps", "v3_est_mps",
    "qw_est", "qx_est", "qy_est", "qz_est",
    "w1_est_radps", "w2_est_radps", "w3_est_radps",
    "r1_d_m", "r2_d_m", "r3_d_m",
    "psi_d_rad",
    "qw_d", "qx_d", "qy_d", "qz_d",
    "f_cmd_N", "tau1_cmd_Nm", "tau2_cmd_Nm", "tau3_cmd_Nm",
    "v1_cmd", "v2_cmd", "v3_cmd", "v4_cmd",
    "sat1", "sat2", "sat3", "sat4",
    "f_app_N", "tau1_app_Nm", "tau2_app_Nm", "tau3_app_Nm",
};

inline constexpr std::string_view kLogVersionLine =
    "# flapsim log v1; euler convention Z-Y-X (yaw-pitch-roll), reporting only";

inline void row_values(const LogRecord& rec, std::array<double, 54>& out) {
    const EulerZYX e = euler_zyx(rec.q);
    std::size_t i = 0;
    auto put = [&](double v) { out[i++] = v; };
    auto put3 = [&](const Vec3& v) {
        put(v.x);
        put(v.y);
        put(v.z);
    };
    auto put4 = [&](const Quat& q) {
        put(q.w);
        put(q.v.x);
        put(q.v.y);
        put(q.v.z);
    };
    put(rec.t);
    put3(rec.r);
    put3(rec.v);
    put4(rec.q);
    put(rad_to_deg(e.roll));
    put(rad_to_deg(e.pitch));
    put(rad_to_deg(e.yaw));
    put3(rec.omega);
    put3(rec.r_est);
    put3(rec.v_est);
    put4(rec.q_est);
    put3(rec.omega_est);
    put3(rec.r_d);
    put(rec.psi_d);
    put4(rec.q_d);
    put(rec.wrench_cmd.thrust);
    put3(rec.wrench_cmd.torque);
    for (double c : rec.cmd) put(c);
    for (bool s : rec.sat) put(s ? 1.0 : 0.0);
    put(rec.wrench_app.thrust);
    put3(rec.wrench_app.torque);
}

inline void write_log(std::ostream& os, const std::vector<LogRecord>& records) {
    os << kLogVersionLine << '\n';
    for (std::size_t i = 0; i < kLogColumns.size(); ++i) {
        if (i) os << ',';
        os << kLogColumns[i];
    }
    os << '\n';
    std::array<double, 54> row{};
    for (const LogRecord& rec : records) {
        row_values(rec, row);
        std::string line;
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) line += ',';
            line += format_double(row[i]);
        }
        line += '\n';
        os << line;
    }
}

inline void write_log_file(const std::string& path, const std::vector<LogRecord>& records) {
    std::ofstream f(path, std::ios::binary);  // binary: identical bytes on every platform
    if (!f) throw std::runtime_error("cannot open log file for writing: " + path);
    write_log(f, records);
    f.flush();
    if (!f) throw std::runtime_error("failed while writing log file: " + path);
}

struct LogParseError : std::runtime_error {
    LogParseError(const std::string& what, std::size_t line)
        : std::runtime_error("log line " + std::to_string(line) + ": " + what), line_number(line) {}
    std::size_t line_number;
};

// Raw parsed log: column names plus one row of doubles per record. Metrics
// work off this representation, so any tool-produced CSV with the v1 schema
// loads back.
struct ParsedLog {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column_index(std::string_view name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        throw std::runtime_error("log is missing column: " + std::string(name));
    }
};

inline ParsedLog read_log(std::istream& is) {
    ParsedLog log;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::stringstream cells(line);
        std::string cell;
        if (!have_header) {
            while (std::getline(cells, cell, ',')) log.columns.push_back(cell);
            if (log.columns.empty()) throw LogParseError("empty header row", line_no);
            have_header = true;
            continue;
        }
        std::vector<double> row;
        row.reserve(log.columns.size());
        while (std::getline(cells, cell, ',')) {
            double value = 0.0;
            const char* first = cell.data();
            const char* last = cell.data() + cell.size();
            const auto res = std::from_chars(first, last, value);
            if (res.ec != std::errc{} || res.ptr != last)
                throw LogParseError("bad numeric cell '" + cell + "'", line_no);
            row.push_back(value);
        }
        if (row.size() != log.columns.size())
            throw LogParseError("expected " + std::to_string(log.columns.size()) +
                                    " cells, got " + std::to_string(row.size()),
                                line_no);
        log.rows.push_back(std::move(row));
    }
    if (!have_header) throw LogParseError("no header row found", line_no);
    return log;
}

inline ParsedLog read_log_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open log file: " + path);
    return read_log(f);
}

}  // namespace flapsim
