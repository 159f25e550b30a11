#pragma once

#include <array>
#include <stdexcept>

#include "flapsim/wrench.hpp"

namespace flapsim {

// Force & torque <-> actuator-command mappings for the two vehicles, plus
// command saturation. Both mappings are linear and exactly invertible as long
// as every coefficient is strictly positive, which the parameter constructors
// enforce.

// --------------------------------------------------------------------------
// Two-winged vehicle: diagonal mapping
//   f    = k_amp   * theta_amp     (mean flapping amplitude)
//   tau1 = k_roll  * theta_roll    (differential flapping angle)
//   tau2 = k_pitch * theta_pitch   (mean-angle shift)
//   tau3 = k_yaw   * theta_yaw     (second-harmonic proportion)
// --------------------------------------------------------------------------

struct RoboBeeMixParams {
    double k_amp{1.0};    // N per unit theta_amp
    double k_roll{1.0};   // N*m per unit theta_roll
    double k_pitch{1.0};  // N*m per unit theta_pitch
    double k_yaw{1.0};    // N*m per unit theta_yaw; low authority in practice

    RoboBeeMixParams() = default;
    RoboBeeMixParams(double amp, double roll, double pitch, double yaw)
        : k_amp(amp), k_roll(roll), k_pitch(pitch), k_yaw(yaw) {
        if (!(amp > 0.0 && roll > 0.0 && pitch > 0.0 && yaw > 0.0)) {
            throw std::invalid_argument("RoboBeeMixParams: coefficients must be > 0");
        }
    }
};

struct RoboBeeCommand {
    double theta_amp{0.0};
    double theta_roll{0.0};
    double theta_pitch{0.0};
    double theta_yaw{0.0};
};

inline Wrench robobee_forward(const RoboBeeCommand& c, const RoboBeeMixParams& p) {
    return {p.k_amp * c.theta_amp,
            {p.k_roll * c.theta_roll, p.k_pitch * c.theta_pitch, p.k_yaw * c.theta_yaw}};
}

inline RoboBeeCommand robobee_inverse(const Wrench& w, const RoboBeeMixParams& p) {
    return {w.thrust / p.k_amp, w.torque.x / p.k_roll, w.torque.y / p.k_pitch,
            w.torque.z / p.k_yaw};
}

// --------------------------------------------------------------------------
// Four-winged vehicle: 4x4 mapping
//   [f   ]   [ k_f      k_f      k_f      k_f    ] [v1]
//   [tau1] = [-k_f d1  -k_f d1   k_f d1   k_f d1 ] [v2]
//   [tau2]   [ k_f d2  -k_f d2   k_f d2  -k_f d2 ] [v3]
//   [tau3]   [ k_s d3  -k_s d3  -k_s d3   k_s d3 ] [v4]
// v_i is the magnitude of the sinusoidal command driving wing i.
// --------------------------------------------------------------------------

struct BeePlusMixParams {
    double k_f{1.0};  // N per command unit (thrust per wing)
    double k_s{1.0};  // N per command unit (steering-plane projection)
    double d1{1.0};   // m, roll lever arm
    double d2{1.0};   // m, pitch lever arm
    double d3{1.0};   // m, yaw lever arm

    BeePlusMixParams() = default;
    BeePlusMixParams(double kf, double ks, double d1_, double d2_, double d3_)
        : k_f(kf), k_s(ks), d1(d1_), d2(d2_), d3(d3_) {
        if (!(kf > 0.0 && ks > 0.0 && d1_ > 0.0 && d2_ > 0.0 && d3_ > 0.0)) {
            throw std::invalid_argument("BeePlusMixParams: coefficients must be > 0");
        }
    }
};

struct BeePlusCommand {
    double v1{0.0};
    double v2{0.0};
    double v3{0.0};
    double v4{0.0};
};

inline Wrench beeplus_forward(const BeePlusCommand& c, const BeePlusMixParams& p) {
    return {p.k_f * (c.v1 + c.v2 + c.v3 + c.v4),
            {p.k_f * p.d1 * (-c.v1 - c.v2 + c.v3 + c.v4),
             p.k_f * p.d2 * (c.v1 - c.v2 + c.v3 - c.v4),
             p.k_s * p.d3 * (c.v1 - c.v2 - c.v3 + c.v4)}};
}

// Closed-form inverse of the 4x4 mapping above.
inline BeePlusCommand beeplus_inverse(const Wrench& w, const BeePlusMixParams& p) {
    const double a = w.thrust / (4.0 * p.k_f);
    const double b = w.torque.x / (4.0 * p.d1 * p.k_f);
    const double c = w.torque.y / (4.0 * p.d2 * p.k_f);
    const double d = w.torque.z / (4.0 * p.d3 * p.k_s);
    return {a - b + c + d, a - b - c - d, a + b + c - d, a + b - c + d};
}

// --------------------------------------------------------------------------
// Saturation
// --------------------------------------------------------------------------

struct RoboBeeLimits {
    double theta_amp_max{1.0};
    double theta_roll_max{1.0};
    double theta_pitch_max{1.0};
    double theta_yaw_max{1.0};
};

struct BeePlusLimits {
    double v_max{1.0};
};

template <typename Command>
struct Saturated {
    Command command;
    std::array<bool, 4> clipped{false, false, false, false};

    bool any_clipped() const {
        return clipped[0] || clipped[1] || clipped[2] || clipped[3];
    }
};

namespace detail {
inline double clamp_flag(double x, double lo, double hi, bool& flag) {
    if (x < lo) {
        flag = true;
        return lo;
    }
    if (x > hi) {
        flag = true;
        return hi;
    }
    return x;
}
}  // namespace detail

// Torque channels clamp symmetrically; the mean flapping amplitude, like the
// four-winged command magnitudes, cannot be negative and clamps below at 0.
inline Saturated<RoboBeeCommand> saturate(const RoboBeeCommand& c, const RoboBeeLimits& lim) {
    Saturated<RoboBeeCommand> out{c};
    out.command.theta_amp =
        detail::clamp_flag(c.theta_amp, 0.0, lim.theta_amp_max, out.clipped[0]);
    out.command.theta_roll =
        detail::clamp_flag(c.theta_roll, -lim.theta_roll_max, lim.theta_roll_max, out.clipped[1]);
    out.command.theta_pitch = detail::clamp_flag(c.theta_pitch, -lim.theta_pitch_max,
                                                 lim.theta_pitch_max, out.clipped[2]);
    out.command.theta_yaw =
        detail::clamp_flag(c.theta_yaw, -lim.theta_yaw_max, lim.theta_yaw_max, out.clipped[3]);
    return out;
}

inline Saturated<BeePlusCommand> saturate(const BeePlusCommand& c, const BeePlusLimits& lim) {
    Saturated<BeePlusCommand> out{c};
    out.command.v1 = detail::clamp_flag(c.v1, 0.0, lim.v_max, out.clipped[0]);
    out.command.v2 = detail::clamp_flag(c.v2, 0.0, lim.v_max, out.clipped[1]);
    out.command.v3 = detail::clamp_flag(c.v3, 0.0, lim.v_max, out.clipped[2]);
    out.command.v4 = detail::clamp_flag(c.v4, 0.0, lim.v_max, out.clipped[3]);
    return out;
}

}  // namespace flapsim
