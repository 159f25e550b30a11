#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

#include "flapsim/dynamics.hpp"
#include "flapsim/quat.hpp"

namespace flapsim {

struct MocapMeasurement {
    double t{0.0};   // s
    Vec3 r_meas{};   // m
    Quat q_meas{};   // unit
};

struct NoiseModel {
    double pos_sigma{0.0};    // m, per axis
    double angle_sigma{0.0};  // rad, rotation magnitude
    std::uint64_t seed{0};

    bool is_valid() const { return pos_sigma >= 0.0 && angle_sigma >= 0.0; }
};

// Standard normal draws via Box-Muller over mt19937_64. std::normal_distribution
// is implementation-defined, which would break byte-identical logs across
// standard libraries; this pins the exact sequence to the seed.
class GaussianSource {
  public:
    explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    Vec3 next_vec3() {
        const double a = next(), b = next(), c = next();
        return {a, b, c};
    }

  private:
    double uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 rng_;
    double spare_{0.0};
    bool have_spare_{false};
};

// Simulated motion-capture camera: true pose plus Gaussian position noise and
// a small random rotation of Gaussian magnitude about a uniformly random axis.
// Draw order per sample is fixed (3 position, 3 axis, 1 angle), so a given
// seed always yields the same measurement stream.
class MocapSensor {
  public:
    explicit MocapSensor(const NoiseModel& noise) : noise_(noise), gauss_(noise.seed) {
        if (!noise.is_valid()) throw std::invalid_argument("noise sigmas must be nonnegative");
    }

    MocapMeasurement sample(const RigidBodyState& s, double t) {
        MocapMeasurement m;
        m.t = t;
        m.r_meas = s.r + gauss_.next_vec3() * noise_.pos_sigma;
        const Vec3 axis_raw = gauss_.next_vec3();
        const double angle = gauss_.next() * noise_.angle_sigma;
        const double an = axis_raw.norm();
        const Vec3 axis = an > 1e-12 ? axis_raw / an : Vec3::unit_x();
        const Quat perturbed = s.q * Quat::from_axis_angle(axis, angle);
        m.q_meas = perturbed.normalized().value_or(s.q);
        return m;
    }

  private:
    NoiseModel noise_;
    GaussianSource gauss_;
};

// Bilinear (Tustin) discretization of the derivative filter lambda*s/(s+lambda):
//   y[k] = (1-a)/(1+a) * y[k-1] + lambda/(1+a) * (x[k] - x[k-1]),  a = lambda*dt/2.
// DC maps to exactly zero and the steady-state ramp response is exactly the
// slope. The first sample initializes the state, so startup output is zero.
class DerivativeFilter {
  public:
    DerivativeFilter(double lambda, double dt) : lambda_(lambda), dt_(dt) {
        if (!(lambda > 0.0)) throw std::invalid_argument("filter lambda must be positive");
        if (!(dt > 0.0)) throw std::invalid_argument("filter dt must be positive");
        if (!(lambda * dt < 2.0)) throw std::invalid_argument("lambda*dt must be below 2");
        const double a = lambda * dt / 2.0;
        decay_ = (1.0 - a) / (1.0 + a);
        gain_ = lambda / (1.0 + a);
    }

    double step(double x) {
        if (!initialized_) {
            initialized_ = true;
            prev_x_ = x;
            y_ = 0.0;
            return y_;
        }
        y_ = decay_ * y_ + gain_ * (x - prev_x_);
        prev_x_ = x;
        return y_;
    }

    double output() const { return y_; }
    double lambda() const { return lambda_; }
    double dt() const { return dt_; }
    bool initialized() const { return initialized_; }

    void reset() {
        initialized_ = false;
        prev_x_ = 0.0;
        y_ = 0.0;
    }

  private:
    double lambda_;
    double dt_;
    double decay_{0.0};
    double gain_{0.0};
    double prev_x_{0.0};
    double y_{0.0};
    bool initialized_{false};
};

// omega from the filtered quaternion derivative: [scalar; omega] = 2 q^-1 * qdot.
// The scalar part is not exactly zero in discrete time; it is surfaced as a
// consistency diagnostic and otherwise discarded.
inline Quat omega_product(const Quat& q_meas, const Quat& qdot_filtered) {
    return q_meas.conjugate() * qdot_filtered * 2.0;
}

inline Vec3 estimate_omega(const Quat& q_meas, const Quat& qdot_filtered) {
    return omega_product(q_meas, qdot_filtered).v;
}

// Four synchronized scalar filters on the quaternion components. Hemisphere
// continuity (sign flip when consecutive samples land on opposite covers) is
// enforced before filtering; componentwise filtering is sign-sensitive.
class AngularVelocityEstimator {
  public:
    AngularVelocityEstimator(double lambda, double dt)
        : fw_(lambda, dt), fx_(lambda, dt), fy_(lambda, dt), fz_(lambda, dt) {}

    void update(const Quat& q_meas) {
        Quat q = q_meas;
        if (fw_.initialized() && q.dot(q_latest_) < 0.0) q = -q;
        q_latest_ = q;
        qdot_f_ = Quat{fw_.step(q.w), {fx_.step(q.v.x), fy_.step(q.v.y), fz_.step(q.v.z)}};
    }

    Vec3 omega() const { return estimate_omega(q_latest_, qdot_f_); }
    double scalar_residual() const { return omega_product(q_latest_, qdot_f_).w; }
    const Quat& latest_attitude() const { return q_latest_; }
    bool has_sample() const { return fw_.initialized(); }

  private:
    DerivativeFilter fw_, fx_, fy_, fz_;
    Quat q_latest_{};
    Quat qdot_f_{0.0, {}};
};

// Three parallel filters on the measured position.
class VelocityEstimator {
  public:
    VelocityEstimator(double lambda, double dt) : fx_(lambda, dt), fy_(lambda, dt), fz_(lambda, dt) {}

    void update(const Vec3& r_meas) {
        r_latest_ = r_meas;
        v_ = Vec3{fx_.step(r_meas.x), fy_.step(r_meas.y), fz_.step(r_meas.z)};
    }

    const Vec3& velocity() const { return v_; }
    const Vec3& latest_position() const { return r_latest_; }

  private:
    DerivativeFilter fx_, fy_, fz_;
    Vec3 r_latest_{};
    Vec3 v_{};
};

// Full state estimate from the measurement stream: pose passes through,
// velocities come from the derivative filters. The controller consumes the
// latest estimate between measurement updates (zero-order hold).
class StateEstimator {
  public:
    StateEstimator(double lambda, double mocap_dt)
        : omega_est_(lambda, mocap_dt), vel_est_(lambda, mocap_dt) {}

    void update(const MocapMeasurement& m) {
        omega_est_.update(m.q_meas);
        vel_est_.update(m.r_meas);
    }

    RigidBodyState estimate() const {
        RigidBodyState s;
        s.r = vel_est_.latest_position();
        s.v = vel_est_.velocity();
        s.q = omega_est_.latest_attitude();
        s.omega = omega_est_.omega();
        return s;
    }

    double omega_scalar_residual() const { return omega_est_.scalar_residual(); }
    bool has_sample() const { return omega_est_.has_sample(); }

  private:
    AngularVelocityEstimator omega_est_;
    VelocityEstimator vel_est_;
};

}  // namespace flapsim
