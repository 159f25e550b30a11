#pragma once

#include <cmath>
#include <numbers>
#include <optional>

#include "flapsim/allocation.hpp"
#include "flapsim/quat.hpp"
#include "flapsim/wrench.hpp"

namespace flapsim {

enum class RobotKind { robobee, beeplus };

// Physical parameters of one vehicle. The thrust axis is the body z-axis b3;
// gravity acts along -n3 in the inertial frame. The inertia tensor is diagonal.
struct RobotParams {
    RobotKind kind{RobotKind::robobee};
    double mass{7.5e-5};                 // kg
    Mat3 inertia{Mat3::diagonal({1.42e-9, 1.34e-9, 0.45e-9})};  // kg*m^2
    double gravity{9.81};                // m/s^2
    double flap_freq{100.0};             // Hz, sinusoidal actuation drive

    // Zero-mean flapping-induced body disturbance. Roll torque ripples at the
    // wingbeat fundamental, pitch and thrust at the symmetric second harmonic,
    // yaw at the third. Distinct harmonics keep the gyroscopic products
    // omega_i * omega_j zero-mean; in-phase ripple would rectify into a steady
    // parasitic torque on the unactuated axis.
    Vec3 ripple_torque_amp{};            // N*m
    double ripple_force_amp{0.0};        // N
    // Stroke-amplitude spin-up time at takeoff. Switching the ripple on
    // abruptly from rest leaves a rate offset equal to the full ripple
    // amplitude (the 1 - cos step response of an undamped axis), which tilts
    // the body hard before the attitude loop can catch it; ramping the
    // envelope over a few strokes starts the forcing adiabatically. 0 means
    // the wings are already at speed.
    double ripple_ramp_s{0.0};           // s

    RoboBeeMixParams robobee_mix{};
    RoboBeeLimits robobee_limits{};
    BeePlusMixParams beeplus_mix{};
    BeePlusLimits beeplus_limits{};

    double weight() const { return mass * gravity; }
};

// Full rigid-body state. q maps body-frame vectors to the inertial frame;
// omega is the body-frame angular velocity.
struct RigidBodyState {
    Vec3 r{};      // m, inertial
    Vec3 v{};      // m/s, inertial
    Quat q{};      // unit, body-to-inertial
    Vec3 omega{};  // rad/s, body frame

    bool is_finite() const {
        return r.is_finite() && v.is_finite() && q.is_finite() && omega.is_finite();
    }
};

struct RigidBodyDerivative {
    Vec3 dr{};
    Vec3 dv{};
    Quat dq{0.0, {}};
    Vec3 domega{};
};

// Continuous-time dynamics:
//   dr/dt     = v
//   m dv/dt   = -m g n3 + f b3
//   dq/dt     = 1/2 q * [0, omega]
//   J dw/dt   = -omega x J omega + tau
inline RigidBodyDerivative state_derivative(const RigidBodyState& s, const Wrench& w,
                                            const RobotParams& p) {
    const Vec3 b3 = s.q.rotate(Vec3::unit_z());
    RigidBodyDerivative d;
    d.dr = s.v;
    d.dv = Vec3{0.0, 0.0, -p.gravity} + b3 * (w.thrust / p.mass);
    d.dq = s.q * Quat::pure(s.omega) * 0.5;
    const Vec3 j_omega = p.inertia * s.omega;
    d.domega = p.inertia.inverse() * (w.torque - s.omega.cross(j_omega));
    return d;
}

namespace detail {
inline RigidBodyState advance(const RigidBodyState& s, const RigidBodyDerivative& d, double h) {
    RigidBodyState out;
    out.r = s.r + d.dr * h;
    out.v = s.v + d.dv * h;
    out.q = s.q + d.dq * h;
    out.omega = s.omega + d.domega * h;
    return out;
}
}  // namespace detail

// One classic fourth-order Runge-Kutta step with the wrench held constant.
// The quaternion is renormalized afterwards. Returns nullopt if the result is
// non-finite (integration blowup) or the quaternion norm collapsed.
inline std::optional<RigidBodyState> step_rk4(const RigidBodyState& s, const Wrench& w,
                                              const RobotParams& p, double dt) {
    const RigidBodyDerivative k1 = state_derivative(s, w, p);
    const RigidBodyDerivative k2 = state_derivative(detail::advance(s, k1, 0.5 * dt), w, p);
    const RigidBodyDerivative k3 = state_derivative(detail::advance(s, k2, 0.5 * dt), w, p);
    const RigidBodyDerivative k4 = state_derivative(detail::advance(s, k3, dt), w, p);

    const double h = dt / 6.0;
    RigidBodyState out;
    out.r = s.r + (k1.dr + (k2.dr + k3.dr) * 2.0 + k4.dr) * h;
    out.v = s.v + (k1.dv + (k2.dv + k3.dv) * 2.0 + k4.dv) * h;
    out.q = s.q + (k1.dq + (k2.dq + k3.dq) * 2.0 + k4.dq) * h;
    out.omega = s.omega + (k1.domega + (k2.domega + k3.domega) * 2.0 + k4.domega) * h;

    if (!out.is_finite()) return std::nullopt;
    const auto qn = out.q.normalized();
    if (!qn) return std::nullopt;
    out.q = *qn;
    return out;
}

// Flapping-induced disturbance at time t. Zero-mean over every wing stroke,
// with each channel on its own harmonic (see RobotParams).
inline Wrench flap_ripple(double t, const RobotParams& p) {
    double env = 1.0;
    if (p.ripple_ramp_s > 0.0 && t < p.ripple_ramp_s) {
        const double u = std::max(t, 0.0) / p.ripple_ramp_s;
        env = u * u * (3.0 - 2.0 * u);  // smoothstep takeoff envelope
    }
    const double phase = 2.0 * std::numbers::pi * p.flap_freq * t;
    const Vec3 tau{p.ripple_torque_amp.x * std::sin(phase),
                   p.ripple_torque_amp.y * std::sin(2.0 * phase),
                   p.ripple_torque_amp.z * std::sin(3.0 * phase)};
    return {env * p.ripple_force_amp * std::sin(2.0 * phase), env * tau};
}

}  // namespace flapsim
