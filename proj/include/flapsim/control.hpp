#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "flapsim/dynamics.hpp"
#include "flapsim/quat.hpp"
#include "flapsim/wrench.hpp"

namespace flapsim {

// Diagonals of the positive definite attitude gain matrices.
struct AttitudeGains {
    Vec3 K1{};  // N*m per unit quaternion-error component
    Vec3 K2{};  // N*m*s/rad rate damping

    bool is_valid() const {
        return K1.x > 0 && K1.y > 0 && K1.z > 0 && K2.x > 0 && K2.y > 0 && K2.z > 0;
    }
};

// Diagonals of the position PID; Ki entries may be zero, Kp/Kd must not be.
// integral_limit bounds the force contribution Ki * integral, in newtons.
struct PositionGains {
    Vec3 Kp{};              // N/m
    Vec3 Kd{};              // N*s/m
    Vec3 Ki{};              // N/(m*s)
    Vec3 integral_limit{};  // N, componentwise anti-windup clamp on Ki*integral

    bool is_valid() const {
        return Kp.x > 0 && Kp.y > 0 && Kp.z > 0 && Kd.x > 0 && Kd.y > 0 && Kd.z > 0 &&
               Ki.x >= 0 && Ki.y >= 0 && Ki.z >= 0 && integral_limit.x >= 0 &&
               integral_limit.y >= 0 && integral_limit.z >= 0;
    }
};

struct FlightSetpoint {
    Vec3 r_d{};          // m
    Vec3 rdot_d{};       // m/s
    Vec3 rddot_d{};      // m/s^2
    double psi_d{0.0};   // rad, desired yaw
    Vec3 omega_hat_d{};  // rad/s, desired angular velocity in the desired frame
    Vec3 tau_d{};        // N*m feedforward

    bool is_finite() const {
        return r_d.is_finite() && rdot_d.is_finite() && rddot_d.is_finite() &&
               std::isfinite(psi_d) && omega_hat_d.is_finite() && tau_d.is_finite();
    }
};

// Scalar and vector parts of the error quaternion q_e = q_d^-1 * q.
struct AttitudeError {
    double m_e{1.0};
    Vec3 n_e{};
};

inline AttitudeError attitude_error(const Quat& q, const Quat& q_d) {
    const Quat qe = q_d.conjugate() * q;
    return {qe.w, qe.v};
}

// tau = -K1 sgn(m_e) n_e - K2 (omega - omega_d) + tau_d, with sgn(0) := +1.
// The sign factor collapses the double cover: tau(q_e) == tau(-q_e).
inline Vec3 attitude_torque(const AttitudeError& e, const Vec3& omega, const Vec3& omega_d,
                            const Vec3& tau_d, const AttitudeGains& g) {
    const double sign = e.m_e >= 0.0 ? 1.0 : -1.0;
    return g.K1.cwise(e.n_e) * (-sign) - g.K2.cwise(omega - omega_d) + tau_d;
}

// How to express the desired angular velocity in the body frame. The source
// text reads as a literal component transfer; the frame-consistent rotation by
// q_e^-1 is kept available for experimentation. Both agree at hover.
enum class OmegaDFrame { literal, rotated };

inline Vec3 desired_omega_in_body(const Vec3& omega_hat_d) { return omega_hat_d; }

inline Vec3 desired_omega_in_body(const Vec3& omega_hat_d, const AttitudeError& e,
                                  OmegaDFrame frame) {
    if (frame == OmegaDFrame::literal) return omega_hat_d;
    const Quat qe{e.m_e, e.n_e};
    return qe.conjugate().rotate(omega_hat_d);
}

// f_a = -Kp e - Kd edot - Ki integral + m g n3 + m rddot_d, with e = r - r_d.
// `integral` must already be clamped by the caller.
inline Vec3 position_force(const Vec3& r, const Vec3& v, const Vec3& integral,
                           const FlightSetpoint& sp, double mass, double gravity,
                           const PositionGains& g) {
    return g.Kp.cwise(r - sp.r_d) * -1.0 - g.Kd.cwise(v - sp.rdot_d) - g.Ki.cwise(integral) +
           Vec3{0.0, 0.0, mass * gravity} + sp.rddot_d * mass;
}

// f = f_a . b3, clamped at zero: flapping wings cannot pull.
inline double thrust_magnitude(const Vec3& f_a, const Quat& q) {
    return std::max(f_a.dot(q.rotate(Vec3::unit_z())), 0.0);
}

// Desired attitude from the thrust direction and yaw reference:
//   b3d = f_a/|f_a|,  b1d = normalize([-sin psi, cos psi, 0] x b3d),
//   b2d = b3d x b1d,  S_d = [b1d b2d b3d].
struct DesiredAttitude {
    enum class Error { none, degenerate_thrust, gimbal_degenerate };
    std::optional<Quat> q_d;
    Error error{Error::none};
};

inline DesiredAttitude desired_attitude(const Vec3& f_a, double psi_d, double f_min) {
    const double fn = f_a.norm();
    if (fn <= f_min) return {std::nullopt, DesiredAttitude::Error::degenerate_thrust};
    const Vec3 b3d = f_a / fn;
    const Vec3 yaw_ref{-std::sin(psi_d), std::cos(psi_d), 0.0};
    const Vec3 b1_raw = yaw_ref.cross(b3d);
    const double b1n = b1_raw.norm();
    if (b1n <= 1e-6) return {std::nullopt, DesiredAttitude::Error::gimbal_degenerate};
    const Vec3 b1d = b1_raw / b1n;
    const Vec3 b2d = b3d.cross(b1d);
    const auto q_d = quat_from_rotation_matrix(Mat3::from_columns(b1d, b2d, b3d));
    if (!q_d) return {std::nullopt, DesiredAttitude::Error::degenerate_thrust};
    return {*q_d, DesiredAttitude::Error::none};
}

// Yaw handling. `open_loop` slaves psi_d to the measured yaw and applies no
// yaw torque (feedback control of yaw is not implemented on either testbed);
// `regulated` runs the full three-axis torque law.
enum class YawMode { open_loop, regulated };

struct ControllerConfig {
    AttitudeGains attitude{};
    PositionGains position{};
    YawMode yaw_mode{YawMode::open_loop};
    OmegaDFrame omega_d_frame{OmegaDFrame::literal};
    bool altitude_only{false};  // zero the lateral components of f_a: altitude
                                // regulation plus level roll/pitch, lateral
                                // position left uncontrolled
    double f_min_factor{0.05};  // thrust floor for attitude extraction, x m g
    double dt{5e-4};            // control period, s
};

struct ControllerOutput {
    Wrench wrench{};
    Quat q_d{};             // desired attitude actually used this tick
    AttitudeError error{};  // q_e diagnostic
    double psi_d{0.0};      // yaw reference actually used this tick
    bool attitude_held{false};  // degenerate f_a, previous q_d reused
};

// ZYX yaw of a body-to-inertial quaternion: heading of the body x-axis.
inline double yaw_of(const Quat& q) {
    const Vec3 b1 = q.rotate(Vec3::unit_x());
    return std::atan2(b1.y, b1.x);
}

// Cascaded position + attitude controller. Value-semantics state machine: the
// only state is the position-error integral and the last good desired
// attitude. One step per control tick.
class Controller {
  public:
    Controller(const ControllerConfig& cfg, double mass, double gravity)
        : cfg_(cfg), mass_(mass), gravity_(gravity) {
        if (!cfg.attitude.is_valid()) throw std::invalid_argument("attitude gains must be positive");
        if (!cfg.position.is_valid()) throw std::invalid_argument("position gains invalid");
        if (!(cfg.dt > 0.0)) throw std::invalid_argument("control period must be positive");
        if (!(mass > 0.0) || !(gravity > 0.0))
            throw std::invalid_argument("mass and gravity must be positive");
        // The anti-windup limit is a force; convert to a bound on the raw
        // integral state. A zero Ki channel contributes no force, so its
        // state is pinned at zero rather than left to grow without bound.
        const auto bound = [](double limit, double ki) { return ki > 0.0 ? limit / ki : 0.0; };
        integral_bound_ = {bound(cfg.position.integral_limit.x, cfg.position.Ki.x),
                           bound(cfg.position.integral_limit.y, cfg.position.Ki.y),
                           bound(cfg.position.integral_limit.z, cfg.position.Ki.z)};
    }

    ControllerOutput step(const RigidBodyState& est, const FlightSetpoint& sp) {
        ControllerOutput out;
        out.psi_d = cfg_.yaw_mode == YawMode::open_loop ? yaw_of(est.q) : sp.psi_d;

        Vec3 f_a = position_force(est.r, est.v, integral_, sp, mass_, gravity_, cfg_.position);
        if (cfg_.altitude_only) f_a.x = f_a.y = 0.0;
        out.wrench.thrust = thrust_magnitude(f_a, est.q);

        const auto des = desired_attitude(f_a, out.psi_d, cfg_.f_min_factor * mass_ * gravity_);
        if (des.q_d) {
            prev_qd_ = *des.q_d;
        } else {
            out.attitude_held = true;
        }
        out.q_d = prev_qd_;

        out.error = attitude_error(est.q, out.q_d);
        const Vec3 omega_d = desired_omega_in_body(sp.omega_hat_d, out.error, cfg_.omega_d_frame);
        out.wrench.torque = attitude_torque(out.error, est.omega, omega_d, sp.tau_d,
                                            cfg_.attitude);
        if (cfg_.yaw_mode == YawMode::open_loop) out.wrench.torque.z = 0.0;

        integral_ = (integral_ + (est.r - sp.r_d) * cfg_.dt).clamped(integral_bound_);
        return out;
    }

    const Vec3& integral() const { return integral_; }
    const Quat& previous_desired() const { return prev_qd_; }

    void reset() {
        integral_ = Vec3{};
        prev_qd_ = Quat{};
    }

  private:
    ControllerConfig cfg_;
    double mass_;
    double gravity_;
    Vec3 integral_bound_{};
    Vec3 integral_{};
    Quat prev_qd_{};
};

}  // namespace flapsim
