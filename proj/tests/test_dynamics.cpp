#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "flapsim/dynamics.hpp"

namespace flapsim {
namespace {

RobotParams default_robot() { return RobotParams{}; }

// ---------------------------------------------------------------------------
// Fixed points and closed-form trajectories
// ---------------------------------------------------------------------------

TEST(Dynamics, HoverIsAFixedPoint) {
    const RobotParams p = default_robot();
    RigidBodyState s;
    s.r = {0.0, 0.0, 0.3};
    const Wrench hover{p.weight(), {}};

    RigidBodyState cur = s;
    for (int i = 0; i < 100; ++i) {
        const auto next = step_rk4(cur, hover, p, 1e-4);
        ASSERT_TRUE(next.has_value());
        cur = *next;
    }
    EXPECT_NEAR(cur.r.x, s.r.x, 1e-12);
    EXPECT_NEAR(cur.r.y, s.r.y, 1e-12);
    EXPECT_NEAR(cur.r.z, s.r.z, 1e-12);
    EXPECT_NEAR(cur.v.norm(), 0.0, 1e-12);
    EXPECT_NEAR(cur.omega.norm(), 0.0, 1e-12);
    EXPECT_NEAR(cur.q.w, 1.0, 1e-12);
}

TEST(Dynamics, FreeFallMatchesClosedForm) {
    const RobotParams p = default_robot();
    RigidBodyState s;
    const double dt = 1e-4;
    const int steps = 5000;  // 0.5 s
    RigidBodyState cur = s;
    for (int i = 0; i < steps; ++i) {
        const auto next = step_rk4(cur, Wrench::zero(), p, dt);
        ASSERT_TRUE(next.has_value());
        cur = *next;
    }
    const double t = steps * dt;
    // linear acceleration: RK4 reproduces the quadratic exactly, so the
    // tolerance only covers accumulated rounding
    EXPECT_NEAR(cur.r.z, -0.5 * p.gravity * t * t, 1e-9);
    EXPECT_NEAR(cur.v.z, -p.gravity * t, 1e-9);
    EXPECT_NEAR(cur.r.x, 0.0, 1e-12);
    EXPECT_NEAR(cur.r.y, 0.0, 1e-12);
}

TEST(Dynamics, TiltedThrustAcceleratesAlongBodyZ) {
    const RobotParams p = default_robot();
    const double phi = 0.3;  // roll
    RigidBodyState s;
    s.q = Quat::from_axis_angle(Vec3::unit_x(), phi);
    const double f = 1.5 * p.weight();
    const Wrench w{f, {}};

    const double dt = 1e-4;
    const auto next = step_rk4(s, w, p, dt);
    ASSERT_TRUE(next.has_value());

    // constant acceleration over the step: a = -g n3 + (f/m) b3 with
    // b3 = (0, -sin phi, cos phi)
    const Vec3 a{0.0, -(f / p.mass) * std::sin(phi), (f / p.mass) * std::cos(phi) - p.gravity};
    EXPECT_NEAR(next->v.x, a.x * dt, 1e-15);
    EXPECT_NEAR(next->v.y, a.y * dt, 1e-12);
    EXPECT_NEAR(next->v.z, a.z * dt, 1e-12);
    EXPECT_NEAR(next->r.y, 0.5 * a.y * dt * dt, 1e-15);
    EXPECT_NEAR(next->r.z, 0.5 * a.z * dt * dt, 1e-15);
}

// ---------------------------------------------------------------------------
// Rotational invariants
// ---------------------------------------------------------------------------

TEST(Dynamics, IsotropicSpinIsConstant) {
    RobotParams p = default_robot();
    p.inertia = Mat3::diagonal({1e-9, 1e-9, 1e-9});
    RigidBodyState s;
    s.omega = {2.0, -3.0, 1.0};
    RigidBodyState cur = s;
    for (int i = 0; i < 10000; ++i) {
        const auto next = step_rk4(cur, Wrench::zero(), p, 1e-4);
        ASSERT_TRUE(next.has_value());
        cur = *next;
    }
    EXPECT_NEAR(cur.omega.x, s.omega.x, 1e-9);
    EXPECT_NEAR(cur.omega.y, s.omega.y, 1e-9);
    EXPECT_NEAR(cur.omega.z, s.omega.z, 1e-9);
    EXPECT_NEAR(cur.q.norm(), 1.0, 1e-12);
}

TEST(Dynamics, TorqueFreeTumbleConservesEnergyAndMomentum) {
    RobotParams p = default_robot();
    p.inertia = Mat3::diagonal({1e-9, 2e-9, 3e-9});
    RigidBodyState s;
    s.omega = {1.0, 1.0, 1.0};

    auto energy = [&](const RigidBodyState& st) {
        return 0.5 * st.omega.dot(p.inertia * st.omega);
    };
    auto momentum_body = [&](const RigidBodyState& st) { return p.inertia * st.omega; };

    const double e0 = energy(s);
    const double h0 = momentum_body(s).norm();
    const Vec3 l0 = s.q.rotate(momentum_body(s));  // inertial angular momentum

    RigidBodyState cur = s;
    const int steps = 50000;  // 5 s at dt = 1e-4
    for (int i = 0; i < steps; ++i) {
        const auto next = step_rk4(cur, Wrench::zero(), p, 1e-4);
        ASSERT_TRUE(next.has_value());
        cur = *next;
    }
    EXPECT_NEAR(energy(cur) / e0, 1.0, 1e-6);
    EXPECT_NEAR(momentum_body(cur).norm() / h0, 1.0, 1e-6);
    const Vec3 l = cur.q.rotate(momentum_body(cur));
    EXPECT_NEAR((l - l0).norm() / l0.norm(), 0.0, 1e-6);
}

TEST(Dynamics, QuaternionNormStaysUnit) {
    RobotParams p = default_robot();
    p.inertia = Mat3::diagonal({1e-9, 2e-9, 3e-9});
    RigidBodyState cur;
    cur.omega = {3.0, -2.0, 5.0};
    double worst = 0.0;
    for (int i = 0; i < 200000; ++i) {
        const auto next = step_rk4(cur, Wrench::zero(), p, 1e-4);
        ASSERT_TRUE(next.has_value());
        cur = *next;
        worst = std::max(worst, std::abs(cur.q.norm() - 1.0));
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(Dynamics, GyroscopicTorqueMatchesEulerEquation) {
    RobotParams p = default_robot();
    p.inertia = Mat3::diagonal({1e-9, 2e-9, 3e-9});
    RigidBodyState s;
    s.omega = {1.5, -0.5, 2.0};
    const Vec3 tau{3e-9, -1e-9, 2e-9};
    const RigidBodyDerivative d = state_derivative(s, Wrench{0.0, tau}, p);

    // J wdot = -w x (J w) + tau, componentwise for a diagonal J
    const Vec3 jw = p.inertia * s.omega;
    const Vec3 rhs = tau - s.omega.cross(jw);
    EXPECT_NEAR(d.domega.x * 1e-9, rhs.x, 1e-22);
    EXPECT_NEAR(d.domega.y * 2e-9, rhs.y, 1e-22);
    EXPECT_NEAR(d.domega.z * 3e-9, rhs.z, 1e-22);
}

// ---------------------------------------------------------------------------
// Integrator order
// ---------------------------------------------------------------------------

double state_distance(const RigidBodyState& a, const RigidBodyState& b) {
    const Quat qa = a.q.dot(b.q) < 0.0 ? -a.q : a.q;
    const Quat dq = qa + (-b.q);
    return (a.r - b.r).norm() + (a.v - b.v).norm() + (a.omega - b.omega).norm() +
           std::sqrt(dq.norm_squared());
}

RigidBodyState integrate(RigidBodyState s, const Wrench& w, const RobotParams& p, double dt,
                         int steps) {
    for (int i = 0; i < steps; ++i) {
        const auto next = step_rk4(s, w, p, dt);
        EXPECT_TRUE(next.has_value());
        s = *next;
    }
    return s;
}

TEST(Dynamics, ObservedConvergenceOrderIsFour) {
    RobotParams p = default_robot();
    p.inertia = Mat3::diagonal({1e-9, 2e-9, 3e-9});
    RigidBodyState s;
    s.omega = {3.0, 2.0, 1.0};
    const Wrench w{1.2 * p.weight(), {}};  // thrust couples translation to attitude

    const double horizon = 0.2;
    const RigidBodyState ref = integrate(s, w, p, horizon / 1600, 1600);
    const RigidBodyState coarse = integrate(s, w, p, horizon / 10, 10);
    const RigidBodyState fine = integrate(s, w, p, horizon / 20, 20);

    const double e_coarse = state_distance(coarse, ref);
    const double e_fine = state_distance(fine, ref);
    ASSERT_GT(e_coarse, 1e-12);  // errors must sit above rounding for the ratio to mean anything
    ASSERT_GT(e_fine, 1e-13);
    const double order = std::log2(e_coarse / e_fine);
    EXPECT_GE(order, 3.5);
    EXPECT_LE(order, 4.5);
}

// ---------------------------------------------------------------------------
// Failure detection
// ---------------------------------------------------------------------------

TEST(Dynamics, NonFiniteInputsAreRejected) {
    const RobotParams p = default_robot();
    RigidBodyState s;
    EXPECT_FALSE(step_rk4(s, Wrench{std::numeric_limits<double>::quiet_NaN(), {}}, p, 1e-4)
                     .has_value());
    EXPECT_FALSE(
        step_rk4(s, Wrench{0.0, {std::numeric_limits<double>::infinity(), 0.0, 0.0}}, p, 1e-4)
            .has_value());
}

TEST(Dynamics, ExplosiveTorqueReportsBlowup) {
    const RobotParams p = default_robot();
    RigidBodyState cur;
    // off-axis so the gyroscopic coupling compounds; J ~ 1e-9 makes this absurd
    const Wrench w{0.0, {1e3, 7e2, 3e2}};
    bool blew_up = false;
    for (int i = 0; i < 100; ++i) {
        const auto next = step_rk4(cur, w, p, 1e-4);
        if (!next) {
            blew_up = true;
            break;
        }
        cur = *next;
    }
    EXPECT_TRUE(blew_up);
}

// ---------------------------------------------------------------------------
// Flapping ripple
// ---------------------------------------------------------------------------

TEST(Dynamics, RippleIsZeroAtStartAndZeroMean) {
    RobotParams p = default_robot();
    p.ripple_torque_amp = {1.5e-5, 1.5e-5, 2e-6};
    p.ripple_force_amp = 0.3 * p.weight();

    const Wrench at_zero = flap_ripple(0.0, p);
    EXPECT_EQ(at_zero.thrust, 0.0);
    EXPECT_EQ(at_zero.torque.x, 0.0);

    // midpoint sum over exactly one wing stroke: sinusoids cancel
    const int n = 256;
    const double period = 1.0 / p.flap_freq;
    Wrench mean = Wrench::zero();
    for (int k = 0; k < n; ++k) {
        const double t = (k + 0.5) * period / n;
        mean = mean + flap_ripple(t, p);
    }
    EXPECT_NEAR(mean.thrust / n, 0.0, 1e-12 * p.ripple_force_amp + 1e-18);
    EXPECT_NEAR(mean.torque.x / n, 0.0, 1e-12 * p.ripple_torque_amp.x + 1e-18);
    EXPECT_NEAR(mean.torque.y / n, 0.0, 1e-12 * p.ripple_torque_amp.y + 1e-18);
    EXPECT_NEAR(mean.torque.z / n, 0.0, 1e-12 * p.ripple_torque_amp.z + 1e-18);
}

TEST(Dynamics, RippleHarmonicStructure) {
    RobotParams p = default_robot();
    p.ripple_torque_amp = {1e-5, 2e-5, 3e-6};
    p.ripple_force_amp = 1e-4;

    // quarter stroke: roll (fundamental) peaks, pitch and thrust (second
    // harmonic) cross zero, yaw (third harmonic) sits at its trough
    const double quarter = 0.25 / p.flap_freq;
    const Wrench w = flap_ripple(quarter, p);
    EXPECT_NEAR(w.torque.x, p.ripple_torque_amp.x, 1e-18);
    EXPECT_NEAR(w.torque.y, 0.0, 1e-18);
    EXPECT_NEAR(w.torque.z, -p.ripple_torque_amp.z, 1e-18);
    EXPECT_NEAR(w.thrust, 0.0, 1e-15);

    // eighth stroke: second-harmonic channels peak together
    const Wrench w8 = flap_ripple(0.125 / p.flap_freq, p);
    EXPECT_NEAR(w8.thrust, p.ripple_force_amp, 1e-15);
    EXPECT_NEAR(w8.torque.y, p.ripple_torque_amp.y, 1e-18);

    // the harmonics are mutually orthogonal over a stroke: no pairwise
    // product of torque channels rectifies into a nonzero mean
    const int n = 512;
    const double period = 1.0 / p.flap_freq;
    double mean_xy = 0.0, mean_xz = 0.0, mean_yz = 0.0;
    for (int k = 0; k < n; ++k) {
        const Vec3 tau = flap_ripple((k + 0.5) * period / n, p).torque;
        mean_xy += tau.x * tau.y;
        mean_xz += tau.x * tau.z;
        mean_yz += tau.y * tau.z;
    }
    const double scale = p.ripple_torque_amp.x * p.ripple_torque_amp.y;
    EXPECT_NEAR(mean_xy / n, 0.0, 1e-12 * scale);
    EXPECT_NEAR(mean_xz / n, 0.0, 1e-12 * scale);
    EXPECT_NEAR(mean_yz / n, 0.0, 1e-12 * scale);
}

TEST(Dynamics, RippleSpinUpEnvelope) {
    RobotParams p = default_robot();
    p.ripple_torque_amp = {1e-5, 2e-5, 3e-6};
    p.ripple_force_amp = 1e-4;
    RobotParams ramped = p;
    ramped.ripple_ramp_s = 0.1;

    // monotone smoothstep: half amplitude at half the ramp, full after it
    const double mid = 0.5 * ramped.ripple_ramp_s;
    const Wrench w_mid = flap_ripple(mid, ramped);
    const Wrench w_ref = flap_ripple(mid, p);
    EXPECT_NEAR(w_mid.torque.x, 0.5 * w_ref.torque.x, 1e-20);
    EXPECT_NEAR(w_mid.torque.y, 0.5 * w_ref.torque.y, 1e-20);
    EXPECT_NEAR(w_mid.torque.z, 0.5 * w_ref.torque.z, 1e-20);
    EXPECT_NEAR(w_mid.thrust, 0.5 * w_ref.thrust, 1e-19);

    const double after = 2.0 * ramped.ripple_ramp_s + 0.00375;
    const Wrench w_after = flap_ripple(after, ramped);
    const Wrench w_full = flap_ripple(after, p);
    EXPECT_EQ(w_after.thrust, w_full.thrust);
    EXPECT_EQ(w_after.torque.x, w_full.torque.x);
    EXPECT_EQ(w_after.torque.y, w_full.torque.y);
    EXPECT_EQ(w_after.torque.z, w_full.torque.z);
}

TEST(Dynamics, WeightHelper) {
    RobotParams p = default_robot();
    EXPECT_DOUBLE_EQ(p.weight(), p.mass * p.gravity);
    EXPECT_NEAR(p.weight(), 7.5e-5 * 9.81, 1e-12);
}

}  // namespace
}  // namespace flapsim
