#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "flapsim/estimation.hpp"

namespace flapsim {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMocapDt = 2e-3;  // 500 Hz
constexpr double kLambda = 50.0;

// ---------------------------------------------------------------------------
// Oracle: exact steady-state response of the discrete filter chain to a
// constant body-rate spin. The bilinear transform maps the discrete response
// at signal frequency nu onto the analog prototype at the prewarped frequency
// nu_w = (2/dt) tan(nu dt/2); a spin of rate W drives every quaternion
// component at nu = W/2, and the algebra of 2 q^-1 qdot_f collapses to
//   |omega_est| = 2 nu_w lambda^2 / (lambda^2 + nu_w^2)
//   scalar residual = 2 lambda nu_w^2 / (lambda^2 + nu_w^2)
// with the direction exactly along the spin axis.
// ---------------------------------------------------------------------------

struct SpinResponse {
    double omega_mag;
    double residual;
};

SpinResponse oracle_spin_response(double spin_rate, double lambda, double dt) {
    const double nu = spin_rate / 2.0;
    const double nu_w = (2.0 / dt) * std::tan(nu * dt / 2.0);
    const double denom = lambda * lambda + nu_w * nu_w;
    return {2.0 * nu_w * lambda * lambda / denom, 2.0 * lambda * nu_w * nu_w / denom};
}

// ---------------------------------------------------------------------------
// Seeded Gaussian stream
// ---------------------------------------------------------------------------

TEST(GaussianSource, BitReproducible) {
    GaussianSource a(12345), b(12345), c(54321);
    bool any_difference = false;
    for (int i = 0; i < 1000; ++i) {
        const double va = a.next();
        EXPECT_EQ(va, b.next());
        if (va != c.next()) any_difference = true;
    }
    EXPECT_TRUE(any_difference);
}

TEST(GaussianSource, MomentsMatchStandardNormal) {
    GaussianSource g(99);
    const int n = 100000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = g.next();
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    EXPECT_NEAR(mean, 0.0, 0.02);
    EXPECT_NEAR(std::sqrt(var), 1.0, 0.02);
}

// ---------------------------------------------------------------------------
// Mocap sensor
// ---------------------------------------------------------------------------

RigidBodyState example_state() {
    RigidBodyState s;
    s.r = {0.1, -0.2, 0.3};
    s.q = Quat::from_axis_angle({1.0, 2.0, -1.0}, 0.7);
    return s;
}

TEST(MocapSensor, ZeroNoisePassesThrough) {
    MocapSensor sensor(NoiseModel{0.0, 0.0, 3});
    const RigidBodyState s = example_state();
    const MocapMeasurement m = sensor.sample(s, 0.25);
    EXPECT_EQ(m.t, 0.25);
    EXPECT_EQ(m.r_meas, s.r);
    EXPECT_NEAR(std::abs(m.q_meas.dot(s.q)), 1.0, 1e-12);
}

TEST(MocapSensor, SeededStreamIsBitReproducible) {
    MocapSensor a(NoiseModel{0.5e-3, 0.01, 17});
    MocapSensor b(NoiseModel{0.5e-3, 0.01, 17});
    const RigidBodyState s = example_state();
    for (int i = 0; i < 200; ++i) {
        const MocapMeasurement ma = a.sample(s, i * kMocapDt);
        const MocapMeasurement mb = b.sample(s, i * kMocapDt);
        EXPECT_EQ(ma.r_meas.x, mb.r_meas.x);
        EXPECT_EQ(ma.r_meas.y, mb.r_meas.y);
        EXPECT_EQ(ma.r_meas.z, mb.r_meas.z);
        EXPECT_EQ(ma.q_meas.w, mb.q_meas.w);
        EXPECT_EQ(ma.q_meas.v, mb.q_meas.v);
    }
}

TEST(MocapSensor, NoiseMagnitudesMatchConfiguration) {
    const double pos_sigma = 1e-3, ang_sigma = 0.01;
    MocapSensor sensor(NoiseModel{pos_sigma, ang_sigma, 5});
    const RigidBodyState s = example_state();
    const int n = 20000;
    double pos_sq[3] = {0, 0, 0};
    double ang_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const MocapMeasurement m = sensor.sample(s, i * kMocapDt);
        const Vec3 dp = m.r_meas - s.r;
        pos_sq[0] += dp.x * dp.x;
        pos_sq[1] += dp.y * dp.y;
        pos_sq[2] += dp.z * dp.z;
        const double angle = 2.0 * std::acos(std::clamp(std::abs(m.q_meas.dot(s.q)), 0.0, 1.0));
        ang_sq += angle * angle;
    }
    for (double acc : pos_sq) EXPECT_NEAR(std::sqrt(acc / n), pos_sigma, 0.05 * pos_sigma);
    EXPECT_NEAR(std::sqrt(ang_sq / n), ang_sigma, 0.05 * ang_sigma);
}

TEST(MocapSensor, RejectsNegativeSigmas) {
    EXPECT_THROW(MocapSensor(NoiseModel{-1e-3, 0.0, 0}), std::invalid_argument);
    EXPECT_THROW(MocapSensor(NoiseModel{0.0, -0.1, 0}), std::invalid_argument);
    EXPECT_FALSE(NoiseModel({-1.0, 0.0, 0}).is_valid());
}

// ---------------------------------------------------------------------------
// Derivative filter
// ---------------------------------------------------------------------------

TEST(DerivativeFilter, ConstructorEnforcesStability) {
    EXPECT_THROW(DerivativeFilter(0.0, kMocapDt), std::invalid_argument);
    EXPECT_THROW(DerivativeFilter(-5.0, kMocapDt), std::invalid_argument);
    EXPECT_THROW(DerivativeFilter(50.0, 0.0), std::invalid_argument);
    EXPECT_THROW(DerivativeFilter(1000.0, kMocapDt), std::invalid_argument);  // lambda dt = 2
    EXPECT_NO_THROW(DerivativeFilter(999.0, kMocapDt));
}

TEST(DerivativeFilter, FirstSampleInitializesToZero) {
    DerivativeFilter f(kLambda, kMocapDt);
    EXPECT_FALSE(f.initialized());
    EXPECT_EQ(f.step(3.7), 0.0);
    EXPECT_TRUE(f.initialized());
}

TEST(DerivativeFilter, ConstantInputGivesExactZero) {
    DerivativeFilter f(kLambda, kMocapDt);
    for (int i = 0; i < 200; ++i) {
        const double y = f.step(42.0);
        EXPECT_NEAR(y, 0.0, 1e-9);
        EXPECT_EQ(y, 0.0);  // the recursion never leaves zero
    }
}

TEST(DerivativeFilter, RampRecoversSlopeExactly) {
    const double slope = -0.37;
    DerivativeFilter f(kLambda, kMocapDt);
    double y = 0.0;
    for (int k = 0; k < 400; ++k) y = f.step(slope * k * kMocapDt);
    EXPECT_NEAR(y, slope, std::abs(slope) * 1e-9);
}

TEST(DerivativeFilter, NyquistGainIsLambda) {
    // alternating input: the steady amplitude equals the filter's
    // high-frequency gain exactly
    DerivativeFilter f(kLambda, kMocapDt);
    double y = 0.0;
    for (int k = 0; k < 500; ++k) y = f.step(k % 2 == 0 ? 1.0 : -1.0);
    EXPECT_NEAR(std::abs(y), kLambda, kLambda * 1e-9);
}

TEST(DerivativeFilter, SinusoidGainMatchesPrewarpedPrototype) {
    const double freq = 5.0;  // Hz
    const double nu = 2.0 * kPi * freq;
    const double nu_w = (2.0 / kMocapDt) * std::tan(nu * kMocapDt / 2.0);
    const double expected_gain = kLambda * nu_w / std::sqrt(kLambda * kLambda + nu_w * nu_w);

    DerivativeFilter f(kLambda, kMocapDt);
    const int samples_per_period = 100;  // exact at 500 Hz and 5 Hz
    std::vector<double> tail;
    for (int k = 0; k < 10 * samples_per_period; ++k) {
        const double y = f.step(std::sin(nu * k * kMocapDt));
        if (k >= 8 * samples_per_period) tail.push_back(y);
    }
    double sum_sq = 0.0;
    for (double y : tail) sum_sq += y * y;
    const double amplitude = std::sqrt(2.0 * sum_sq / tail.size());
    EXPECT_NEAR(amplitude, expected_gain, 5e-3 * expected_gain);
}

TEST(DerivativeFilter, Linearity) {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DerivativeFilter fx(kLambda, kMocapDt), fy(kLambda, kMocapDt), fmix(kLambda, kMocapDt);
    const double a = 1.7, b = -0.4;
    for (int k = 0; k < 300; ++k) {
        const double x = u(gen), y = u(gen);
        const double lhs = fmix.step(a * x + b * y);
        const double rhs = a * fx.step(x) + b * fy.step(y);
        EXPECT_NEAR(lhs, rhs, 1e-12);
    }
}

TEST(DerivativeFilter, ResetRestoresInitialBehavior) {
    DerivativeFilter f(kLambda, kMocapDt);
    f.step(1.0);
    f.step(2.0);
    EXPECT_NE(f.output(), 0.0);
    f.reset();
    EXPECT_FALSE(f.initialized());
    EXPECT_EQ(f.step(5.0), 0.0);
}

// ---------------------------------------------------------------------------
// Angular velocity estimation
// ---------------------------------------------------------------------------

TEST(EstimateOmega, RecoversExactDerivative) {
    const Quat q = Quat::from_axis_angle(Vec3::unit_z(), 0.8);
    const Vec3 omega{0.3, -0.2, 0.5};
    const Quat qdot = q * Quat::pure(omega) * 0.5;
    const Vec3 est = estimate_omega(q, qdot);
    EXPECT_NEAR(est.x, omega.x, 1e-15);
    EXPECT_NEAR(est.y, omega.y, 1e-15);
    EXPECT_NEAR(est.z, omega.z, 1e-15);
    EXPECT_NEAR(omega_product(q, qdot).w, 0.0, 1e-15);
}

TEST(AngularVelocityEstimator, StationaryAttitudeGivesZeroRate) {
    AngularVelocityEstimator est(kLambda, kMocapDt);
    const Quat q = Quat::from_axis_angle({0.3, 1.0, -0.2}, 1.1);
    for (int i = 0; i < 100; ++i) est.update(q);
    EXPECT_EQ(est.omega(), Vec3{});
    EXPECT_EQ(est.scalar_residual(), 0.0);
    EXPECT_TRUE(est.has_sample());
}

TEST(AngularVelocityEstimator, ConstantSpinMatchesClosedForm) {
    const Vec3 axis = Vec3{1.0, -2.0, 0.5} / Vec3{1.0, -2.0, 0.5}.norm();
    for (double rate : {0.25, 2.0, 10.0}) {
        AngularVelocityEstimator est(kLambda, kMocapDt);
        const Quat q0 = Quat::from_axis_angle({0.2, 0.1, 0.9}, 0.4);
        for (int k = 0; k < 2000; ++k) {
            const Quat q = q0 * Quat::from_axis_angle(axis, rate * k * kMocapDt);
            est.update(q);
        }
        const SpinResponse expected = oracle_spin_response(rate, kLambda, kMocapDt);
        const Vec3 w = est.omega();
        EXPECT_NEAR(w.norm(), expected.omega_mag, 1e-9 * expected.omega_mag) << "rate " << rate;
        EXPECT_NEAR(w.dot(axis), w.norm(), 1e-9 * expected.omega_mag) << "rate " << rate;
        EXPECT_NEAR(est.scalar_residual(), expected.residual, 1e-9 + 1e-6 * expected.residual)
            << "rate " << rate;
    }
}

TEST(AngularVelocityEstimator, AccuracyWithinTwoPercentAfterSettling) {
    const Vec3 axis = Vec3{0.4, 0.3, 1.0} / Vec3{0.4, 0.3, 1.0}.norm();
    for (double rate : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        AngularVelocityEstimator est(kLambda, kMocapDt);
        const double settle = 5.0 / kLambda;
        double worst = 0.0;
        for (int k = 0; k < 750; ++k) {  // 1.5 s
            const double t = k * kMocapDt;
            est.update(Quat::from_axis_angle(axis, rate * t));
            if (t > settle) {
                const Vec3 err = est.omega() - axis * rate;
                worst = std::max(worst, err.norm() / rate);
            }
        }
        EXPECT_LT(worst, 0.02) << "rate " << rate;
    }
}

TEST(AngularVelocityEstimator, ScalarResidualSmallAtModestRates) {
    AngularVelocityEstimator est(kLambda, kMocapDt);
    const double rate = 0.25;
    for (int k = 0; k < 1500; ++k)
        est.update(Quat::from_axis_angle(Vec3::unit_z(), rate * k * kMocapDt));
    EXPECT_LT(std::abs(est.scalar_residual()), 1e-3);
}

TEST(AngularVelocityEstimator, HemisphereFlipsAreTransparent) {
    AngularVelocityEstimator plain(kLambda, kMocapDt), flipped(kLambda, kMocapDt);
    const Vec3 axis{0.0, 0.0, 1.0};
    for (int k = 0; k < 400; ++k) {
        const Quat q = Quat::from_axis_angle(axis, 2.0 * k * kMocapDt + 0.3);
        plain.update(q);
        flipped.update(k % 3 == 1 ? -q : q);  // measurement stream with random cover choice
        const Vec3 a = plain.omega();
        const Vec3 b = flipped.omega();
        EXPECT_NEAR(a.x, b.x, 1e-15);
        EXPECT_NEAR(a.y, b.y, 1e-15);
        EXPECT_NEAR(a.z, b.z, 1e-15);
    }
}

TEST(AngularVelocityEstimator, LatencyIsAboutOneOverLambda) {
    // 1 Hz yaw wobble; the rate estimate should trail the true rate by about
    // the filter time constant. Cross-correlate over integer sample shifts.
    const double amp = 0.2;
    const double wobble = 2.0 * kPi;  // rad/s
    AngularVelocityEstimator est(kLambda, kMocapDt);
    std::vector<double> true_rate, est_rate;
    const int n = 2000;  // 4 s
    for (int k = 0; k < n; ++k) {
        const double t = k * kMocapDt;
        const double psi = amp * std::sin(wobble * t);
        est.update(Quat::from_axis_angle(Vec3::unit_z(), psi));
        true_rate.push_back(amp * wobble * std::cos(wobble * t));
        est_rate.push_back(est.omega().z);
    }
    int best_shift = 0;
    double best_corr = -1e300;
    for (int shift = 0; shift <= 25; ++shift) {
        double corr = 0.0;
        for (int k = 500; k < n; ++k) corr += est_rate[k] * true_rate[k - shift];
        if (corr > best_corr) {
            best_corr = corr;
            best_shift = shift;
        }
    }
    const double latency = best_shift * kMocapDt;
    const double expected = 1.0 / kLambda;
    EXPECT_GE(latency, 0.8 * expected);
    EXPECT_LE(latency, 1.2 * expected);
}

TEST(AngularVelocityEstimator, RejectsUnstableConfiguration) {
    EXPECT_THROW(AngularVelocityEstimator(1000.0, kMocapDt), std::invalid_argument);
}

// ---------------------------------------------------------------------------
// Velocity estimation and the composite estimator
// ---------------------------------------------------------------------------

TEST(VelocityEstimator, RampPositionRecoversVelocity) {
    VelocityEstimator est(kLambda, kMocapDt);
    const Vec3 v{0.3, -0.1, 0.05};
    for (int k = 0; k < 400; ++k) est.update(v * (k * kMocapDt));
    EXPECT_NEAR(est.velocity().x, v.x, 1e-9);
    EXPECT_NEAR(est.velocity().y, v.y, 1e-9);
    EXPECT_NEAR(est.velocity().z, v.z, 1e-9);
    EXPECT_EQ(est.latest_position(), v * ((400 - 1) * kMocapDt));
}

TEST(StateEstimator, CombinesPoseAndDerivedRates) {
    StateEstimator est(kLambda, kMocapDt);
    EXPECT_FALSE(est.has_sample());

    const Vec3 v{0.2, 0.0, -0.1};
    const Vec3 axis = Vec3::unit_y();
    const double rate = 1.5;
    MocapMeasurement m;
    for (int k = 0; k < 600; ++k) {
        m.t = k * kMocapDt;
        m.r_meas = v * m.t;
        m.q_meas = Quat::from_axis_angle(axis, rate * m.t);
        est.update(m);
    }
    EXPECT_TRUE(est.has_sample());
    const RigidBodyState s = est.estimate();
    EXPECT_EQ(s.r, m.r_meas);
    EXPECT_NEAR(std::abs(s.q.dot(m.q_meas)), 1.0, 1e-12);
    EXPECT_NEAR((s.v - v).norm(), 0.0, 1e-9);
    const SpinResponse expected = oracle_spin_response(rate, kLambda, kMocapDt);
    EXPECT_NEAR(s.omega.norm(), expected.omega_mag, 1e-6);
    EXPECT_NEAR(s.omega.y, s.omega.norm(), 1e-9);
    EXPECT_NEAR(est.omega_scalar_residual(), expected.residual, 1e-6);
}

}  // namespace
}  // namespace flapsim
