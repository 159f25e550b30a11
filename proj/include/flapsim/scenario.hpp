#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "flapsim/config_io.hpp"
#include "flapsim/control.hpp"
#include "flapsim/dynamics.hpp"
#include "flapsim/estimation.hpp"
#include "flapsim/log.hpp"

namespace flapsim {

enum class ScenarioKind { robobee_hover, beeplus_altitude_attitude, beeplus_position, custom };

inline std::string scenario_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::robobee_hover: return "robobee_hover";
        case ScenarioKind::beeplus_altitude_attitude: return "beeplus_altitude_attitude";
        case ScenarioKind::beeplus_position: return "beeplus_position";
        case ScenarioKind::custom: return "custom";
    }
    return "custom";
}

inline std::optional<ScenarioKind> scenario_kind_from_name(const std::string& name) {
    for (ScenarioKind k : {ScenarioKind::robobee_hover, ScenarioKind::beeplus_altitude_attitude,
                           ScenarioKind::beeplus_position, ScenarioKind::custom}) {
        if (scenario_name(k) == name) return k;
    }
    return std::nullopt;
}

inline std::vector<std::string> scenario_names() {
    return {"robobee_hover", "beeplus_altitude_attitude", "beeplus_position", "custom"};
}

// A setpoint becomes active at time t and stays active until the next one.
struct TimedSetpoint {
    double t{0.0};
    FlightSetpoint setpoint{};
};

// Flight volume; leaving it terminates the run, standing in for the motion
// capture arena's automatic power cutoff.
struct SafetyBox {
    Vec3 min_corner{-0.75, -0.75, -0.25};
    Vec3 max_corner{0.75, 0.75, 1.0};

    bool contains(const Vec3& r) const {
        return r.x >= min_corner.x && r.x <= max_corner.x && r.y >= min_corner.y &&
               r.y <= max_corner.y && r.z >= min_corner.z && r.z <= max_corner.z;
    }
};

struct Rates {
    double physics_hz{10000.0};
    double control_hz{2000.0};
    double mocap_hz{500.0};
};

struct ScenarioConfig {
    ScenarioKind scenario{ScenarioKind::custom};
    RobotParams robot{};
    double duration{20.0};  // s
    Rates rates{};
    std::vector<TimedSetpoint> setpoints{TimedSetpoint{}};
    NoiseModel noise{};
    ControllerConfig controller{};
    double estimator_lambda{50.0};  // rad/s
    RigidBodyState initial{};
    SafetyBox safety{};
    double metrics_window{1.0};  // s, transient excluded from metrics

    double physics_dt() const { return 1.0 / rates.physics_hz; }
    double control_dt() const { return 1.0 / rates.control_hz; }
    double mocap_dt() const { return 1.0 / rates.mocap_hz; }

    const FlightSetpoint& setpoint_at(double t) const {
        std::size_t active = 0;
        for (std::size_t i = 0; i < setpoints.size(); ++i) {
            if (setpoints[i].t <= t) active = i;
        }
        return setpoints[active].setpoint;
    }

    void validate() const;
};

namespace detail {

// Calibrated tuning, not measured hardware values. The attitude loop is
// sized for natural frequency 20 rad/s
// at damping 0.9 (error dynamics J th'' = -K1 th/2 - K2 th'), five times the
// position loop and well under the 50 rad/s estimator filter; the position
// loop sits at 4 rad/s, damping 0.9, with a slow integral corner at 0.1 rad/s
// (any faster and the integrator's slow closed-loop pole leaves a millimetre
// tail that takes tens of seconds to drain after a step).
constexpr double kAttitudeOmega = 20.0;  // rad/s
constexpr double kAttitudeZeta = 0.9;
constexpr double kPositionOmega = 4.0;  // rad/s
constexpr double kPositionZeta = 0.9;

inline AttitudeGains attitude_gains_for(const Mat3& inertia) {
    const Vec3 j{inertia(0, 0), inertia(1, 1), inertia(2, 2)};
    return {j * (2.0 * kAttitudeOmega * kAttitudeOmega),
            j * (2.0 * kAttitudeZeta * kAttitudeOmega)};
}

inline PositionGains position_gains_for(double mass, double gravity) {
    PositionGains g;
    g.Kp = Vec3{1.0, 1.0, 1.0} * (mass * kPositionOmega * kPositionOmega);
    g.Kd = Vec3{1.0, 1.0, 1.0} * (mass * 2.0 * kPositionZeta * kPositionOmega);
    g.Ki = g.Kp * 0.1;  // integral corner at 0.1 rad/s
    g.integral_limit = Vec3{1.0, 1.0, 1.0} * (0.3 * mass * gravity);
    return g;
}

inline void check(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

inline bool is_integer_multiple(double hi, double lo) {
    if (!(lo > 0.0) || !(hi > 0.0)) return false;
    const double ratio = hi / lo;
    return std::abs(ratio - std::round(ratio)) < 1e-9 && ratio >= 1.0 - 1e-9;
}

}  // namespace detail

inline void ScenarioConfig::validate() const {
    using detail::check;
    check(duration > 0.0, "scenario.duration_s must be positive");
    check(rates.physics_hz > 0.0 && rates.control_hz > 0.0 && rates.mocap_hz > 0.0,
          "rates must be positive");
    check(rates.physics_hz >= rates.control_hz && rates.control_hz >= rates.mocap_hz,
          "rates must satisfy physics_hz >= control_hz >= mocap_hz");
    check(detail::is_integer_multiple(rates.physics_hz, rates.control_hz),
          "rates.physics_hz must be an integer multiple of rates.control_hz");
    check(detail::is_integer_multiple(rates.control_hz, rates.mocap_hz),
          "rates.control_hz must be an integer multiple of rates.mocap_hz");
    const double steps = duration * rates.physics_hz;
    check(std::abs(steps - std::round(steps)) < 1e-6,
          "scenario.duration_s must contain a whole number of physics steps");

    check(!setpoints.empty(), "setpoint schedule must not be empty");
    check(std::abs(setpoints.front().t) < 1e-12, "first setpoint must start at t = 0");
    for (std::size_t i = 0; i < setpoints.size(); ++i) {
        check(std::isfinite(setpoints[i].t) && setpoints[i].setpoint.is_finite(),
              "setpoint " + std::to_string(i) + " must be finite");
        check(setpoints[i].t < duration,
              "setpoint " + std::to_string(i) + " starts after the scenario ends");
        if (i > 0)
            check(setpoints[i].t > setpoints[i - 1].t,
                  "setpoint times must be strictly increasing");
    }

    check(noise.is_valid(), "noise sigmas must be nonnegative");
    check(robot.mass > 0.0, "robot.mass_kg must be positive");
    check(robot.gravity > 0.0, "robot.gravity_mps2 must be positive");
    check(robot.flap_freq > 0.0, "robot.flap_freq_hz must be positive");
    check(robot.inertia(0, 0) > 0.0 && robot.inertia(1, 1) > 0.0 && robot.inertia(2, 2) > 0.0,
          "robot.inertia_kgm2 diagonal must be positive");
    check(robot.ripple_torque_amp.is_finite() && std::isfinite(robot.ripple_force_amp),
          "ripple amplitudes must be finite");
    check(std::isfinite(robot.ripple_ramp_s) && robot.ripple_ramp_s >= 0.0,
          "ripple.ramp_s must be nonnegative");
    if (robot.kind == RobotKind::robobee) {
        const auto& p = robot.robobee_mix;
        check(p.k_amp > 0.0 && p.k_roll > 0.0 && p.k_pitch > 0.0 && p.k_yaw > 0.0,
              "mix coefficients must be positive");
        const auto& l = robot.robobee_limits;
        check(l.theta_amp_max > 0.0 && l.theta_roll_max > 0.0 && l.theta_pitch_max > 0.0 &&
                  l.theta_yaw_max > 0.0,
              "limits must be positive");
    } else {
        const auto& p = robot.beeplus_mix;
        check(p.k_f > 0.0 && p.k_s > 0.0 && p.d1 > 0.0 && p.d2 > 0.0 && p.d3 > 0.0,
              "mix coefficients must be positive");
        check(robot.beeplus_limits.v_max > 0.0, "limits.v_max must be positive");
    }

    check(controller.attitude.is_valid(), "gains.K1/K2 must be positive");
    check(controller.position.is_valid(),
          "gains.Kp/Kd must be positive and gains.Ki/integral_limit_N nonnegative");
    check(controller.f_min_factor > 0.0 && controller.f_min_factor < 1.0,
          "control.f_min_factor must lie in (0, 1)");
    check(std::abs(controller.dt - control_dt()) < 1e-12,
          "controller period must equal 1/rates.control_hz");

    check(estimator_lambda > 0.0, "estimator.lambda_radps must be positive");
    check(estimator_lambda * mocap_dt() < 2.0,
          "estimator.lambda_radps too high for the mocap rate (lambda*dt must stay below 2)");

    check(initial.is_finite(), "initial state must be finite");
    check(std::abs(initial.q.norm() - 1.0) <= 1e-9, "initial attitude must be normalized");
    check(safety.min_corner.x < safety.max_corner.x && safety.min_corner.y < safety.max_corner.y &&
              safety.min_corner.z < safety.max_corner.z,
          "safety box must have positive extent");
    check(safety.contains(initial.r), "initial position must lie inside the safety box");
    check(metrics_window >= 0.0 && metrics_window < duration,
          "scenario.metrics_window_s must lie in [0, duration)");
}

// Built-in scenario presets. Masses, rates and durations match the hover
// experiments these presets model; inertias, gains, mixing coefficients,
// noise and ripple amplitudes are calibrated defaults.
inline ScenarioConfig make_scenario(ScenarioKind kind) {
    ScenarioConfig cfg;
    cfg.scenario = kind;

    const bool beeplus =
        kind == ScenarioKind::beeplus_altitude_attitude || kind == ScenarioKind::beeplus_position;

    if (beeplus) {
        cfg.robot.kind = RobotKind::beeplus;
        cfg.robot.mass = 9.5e-5;
        cfg.robot.inertia = Mat3::diagonal({2.1e-9, 1.9e-9, 0.55e-9});
        const double weight = cfg.robot.weight();
        // hover sits at v_i = 0.5, leaving a factor-2 thrust ceiling
        cfg.robot.beeplus_mix = BeePlusMixParams{weight / 2.0, weight / 20.0, 0.006, 0.006, 0.008};
        cfg.robot.beeplus_limits = BeePlusLimits{1.0};
        // about 3 deg of body wobble at the 100 Hz flapping frequency
        cfg.robot.ripple_torque_amp = {4e-5, 4e-5, 4e-6};
        cfg.robot.ripple_force_amp = 0.3 * weight;
        cfg.robot.ripple_ramp_s = 0.1;
    } else {
        cfg.robot.kind = RobotKind::robobee;
        cfg.robot.mass = 7.5e-5;
        cfg.robot.inertia = Mat3::diagonal({1.42e-9, 1.34e-9, 0.45e-9});
        const double weight = cfg.robot.weight();
        // hover sits at theta_amp = 0.5; yaw channel is low-authority
        cfg.robot.robobee_mix = RoboBeeMixParams{2.0 * weight, 1e-6, 1e-6, 1e-7};
        cfg.robot.robobee_limits = RoboBeeLimits{1.0, 1.0, 1.0, 1.0};
        // about 1.5 deg of body wobble at the 100 Hz flapping frequency
        cfg.robot.ripple_torque_amp = {1.5e-5, 1.5e-5, 2e-6};
        cfg.robot.ripple_force_amp = 0.3 * weight;
        cfg.robot.ripple_ramp_s = 0.1;
    }
    cfg.robot.flap_freq = 100.0;

    cfg.controller.attitude = detail::attitude_gains_for(cfg.robot.inertia);
    cfg.controller.position = detail::position_gains_for(cfg.robot.mass, cfg.robot.gravity);
    cfg.controller.yaw_mode = YawMode::open_loop;
    cfg.controller.omega_d_frame = OmegaDFrame::literal;
    cfg.controller.dt = cfg.control_dt();

    cfg.noise = NoiseModel{0.5e-3, 0.01, 1};
    cfg.estimator_lambda = 50.0;

    FlightSetpoint hover;
    hover.r_d = {0.0, 0.0, 0.3};
    cfg.setpoints = {TimedSetpoint{0.0, hover}};

    switch (kind) {
        case ScenarioKind::robobee_hover:
        case ScenarioKind::custom:
            cfg.duration = 20.0;
            break;
        case ScenarioKind::beeplus_altitude_attitude:
            cfg.duration = 5.0;
            cfg.controller.altitude_only = true;
            break;
        case ScenarioKind::beeplus_position: {
            // Aggressive altitude square wave around a lateral offset; the
            // climb legs demand roughly 1.7x weight, inside the default
            // actuator range but beyond a reduced one.
            cfg.duration = 2.0;
            cfg.metrics_window = 0.5;
            auto at = [&hover](double z) {
                FlightSetpoint sp = hover;
                sp.r_d = {0.2, 0.0, z};
                return sp;
            };
            cfg.setpoints = {TimedSetpoint{0.0, at(0.45)}, TimedSetpoint{0.7, at(0.1)},
                             TimedSetpoint{1.1, at(0.55)}, TimedSetpoint{1.5, at(0.1)},
                             TimedSetpoint{1.9, at(0.55)}};
            break;
        }
    }
    return cfg;
}

// ------------------------------------------------------------------------
// Config file binding
// ------------------------------------------------------------------------

namespace detail {

inline const std::set<std::string>& static_config_keys() {
    static const std::set<std::string> keys = {
        "scenario.name", "scenario.duration_s", "scenario.metrics_window_s",
        "rates.physics_hz", "rates.control_hz", "rates.mocap_hz",
        "robot.kind", "robot.mass_kg", "robot.inertia_kgm2", "robot.gravity_mps2",
        "robot.flap_freq_hz",
        "ripple.torque_amp_Nm", "ripple.force_amp_N", "ripple.ramp_s",
        "mix.k_amp_N", "mix.k_roll_Nm", "mix.k_pitch_Nm", "mix.k_yaw_Nm",
        "mix.k_f_N", "mix.k_s_N", "mix.d1_m", "mix.d2_m", "mix.d3_m",
        "limits.theta_amp_max", "limits.theta_roll_max", "limits.theta_pitch_max",
        "limits.theta_yaw_max", "limits.v_max",
        "gains.K1", "gains.K2", "gains.Kp", "gains.Kd", "gains.Ki", "gains.integral_limit_N",
        "control.yaw_mode", "control.omega_d_frame", "control.altitude_only",
        "control.f_min_factor",
        "estimator.lambda_radps",
        "noise.pos_sigma_m", "noise.angle_sigma_rad", "noise.seed",
        "initial.r_m", "initial.v_mps", "initial.rpy_deg", "initial.omega_radps",
        "safety.min_m", "safety.max_m",
        "setpoint.count",
    };
    return keys;
}

inline const std::vector<std::string>& setpoint_field_names() {
    static const std::vector<std::string> fields = {
        "t_s", "r_m", "rdot_mps", "rddot_mps2", "psi_d_rad", "omega_hat_d_radps", "tau_d_Nm"};
    return fields;
}

inline std::string setpoint_key(std::size_t i, const std::string& field) {
    return "setpoint." + std::to_string(i) + "." + field;
}

}  // namespace detail

inline ScenarioConfig scenario_from_config(const ConfigMap& map) {
    const std::string name = map.get_string("scenario.name", "custom");
    const auto kind = scenario_kind_from_name(name);
    if (!kind) throw ConfigError("scenario.name", "unknown scenario '" + name + "'");
    ScenarioConfig cfg = make_scenario(*kind);

    cfg.duration = map.get_double("scenario.duration_s", cfg.duration);
    cfg.metrics_window = map.get_double("scenario.metrics_window_s", cfg.metrics_window);
    cfg.rates.physics_hz = map.get_double("rates.physics_hz", cfg.rates.physics_hz);
    cfg.rates.control_hz = map.get_double("rates.control_hz", cfg.rates.control_hz);
    cfg.rates.mocap_hz = map.get_double("rates.mocap_hz", cfg.rates.mocap_hz);

    if (const auto kind_text = map.get("robot.kind")) {
        if (*kind_text == "robobee")
            cfg.robot.kind = RobotKind::robobee;
        else if (*kind_text == "beeplus")
            cfg.robot.kind = RobotKind::beeplus;
        else
            throw ConfigError("robot.kind", "expected robobee or beeplus, got '" + *kind_text +
                                                "'");
    }
    cfg.robot.mass = map.get_double("robot.mass_kg", cfg.robot.mass);
    cfg.robot.inertia = Mat3::diagonal(map.get_vec3(
        "robot.inertia_kgm2", {cfg.robot.inertia(0, 0), cfg.robot.inertia(1, 1),
                               cfg.robot.inertia(2, 2)}));
    cfg.robot.gravity = map.get_double("robot.gravity_mps2", cfg.robot.gravity);
    cfg.robot.flap_freq = map.get_double("robot.flap_freq_hz", cfg.robot.flap_freq);
    cfg.robot.ripple_torque_amp = map.get_vec3("ripple.torque_amp_Nm", cfg.robot.ripple_torque_amp);
    cfg.robot.ripple_force_amp = map.get_double("ripple.force_amp_N", cfg.robot.ripple_force_amp);
    cfg.robot.ripple_ramp_s = map.get_double("ripple.ramp_s", cfg.robot.ripple_ramp_s);

    cfg.robot.robobee_mix.k_amp = map.get_double("mix.k_amp_N", cfg.robot.robobee_mix.k_amp);
    cfg.robot.robobee_mix.k_roll = map.get_double("mix.k_roll_Nm", cfg.robot.robobee_mix.k_roll);
    cfg.robot.robobee_mix.k_pitch =
        map.get_double("mix.k_pitch_Nm", cfg.robot.robobee_mix.k_pitch);
    cfg.robot.robobee_mix.k_yaw = map.get_double("mix.k_yaw_Nm", cfg.robot.robobee_mix.k_yaw);
    cfg.robot.beeplus_mix.k_f = map.get_double("mix.k_f_N", cfg.robot.beeplus_mix.k_f);
    cfg.robot.beeplus_mix.k_s = map.get_double("mix.k_s_N", cfg.robot.beeplus_mix.k_s);
    cfg.robot.beeplus_mix.d1 = map.get_double("mix.d1_m", cfg.robot.beeplus_mix.d1);
    cfg.robot.beeplus_mix.d2 = map.get_double("mix.d2_m", cfg.robot.beeplus_mix.d2);
    cfg.robot.beeplus_mix.d3 = map.get_double("mix.d3_m", cfg.robot.beeplus_mix.d3);

    cfg.robot.robobee_limits.theta_amp_max =
        map.get_double("limits.theta_amp_max", cfg.robot.robobee_limits.theta_amp_max);
    cfg.robot.robobee_limits.theta_roll_max =
        map.get_double("limits.theta_roll_max", cfg.robot.robobee_limits.theta_roll_max);
    cfg.robot.robobee_limits.theta_pitch_max =
        map.get_double("limits.theta_pitch_max", cfg.robot.robobee_limits.theta_pitch_max);
    cfg.robot.robobee_limits.theta_yaw_max =
        map.get_double("limits.theta_yaw_max", cfg.robot.robobee_limits.theta_yaw_max);
    cfg.robot.beeplus_limits.v_max = map.get_double("limits.v_max", cfg.robot.beeplus_limits.v_max);

    cfg.controller.attitude.K1 = map.get_vec3("gains.K1", cfg.controller.attitude.K1);
    cfg.controller.attitude.K2 = map.get_vec3("gains.K2", cfg.controller.attitude.K2);
    cfg.controller.position.Kp = map.get_vec3("gains.Kp", cfg.controller.position.Kp);
    cfg.controller.position.Kd = map.get_vec3("gains.Kd", cfg.controller.position.Kd);
    cfg.controller.position.Ki = map.get_vec3("gains.Ki", cfg.controller.position.Ki);
    cfg.controller.position.integral_limit =
        map.get_vec3("gains.integral_limit_N", cfg.controller.position.integral_limit);

    if (const auto mode = map.get("control.yaw_mode")) {
        if (*mode == "open_loop")
            cfg.controller.yaw_mode = YawMode::open_loop;
        else if (*mode == "regulated")
            cfg.controller.yaw_mode = YawMode::regulated;
        else
            throw ConfigError("control.yaw_mode",
                              "expected open_loop or regulated, got '" + *mode + "'");
    }
    if (const auto frame = map.get("control.omega_d_frame")) {
        if (*frame == "literal")
            cfg.controller.omega_d_frame = OmegaDFrame::literal;
        else if (*frame == "rotated")
            cfg.controller.omega_d_frame = OmegaDFrame::rotated;
        else
            throw ConfigError("control.omega_d_frame",
                              "expected literal or rotated, got '" + *frame + "'");
    }
    cfg.controller.altitude_only = map.get_bool("control.altitude_only",
                                                cfg.controller.altitude_only);
    cfg.controller.f_min_factor = map.get_double("control.f_min_factor",
                                                 cfg.controller.f_min_factor);
    cfg.controller.dt = 1.0 / cfg.rates.control_hz;

    cfg.estimator_lambda = map.get_double("estimator.lambda_radps", cfg.estimator_lambda);
    cfg.noise.pos_sigma = map.get_double("noise.pos_sigma_m", cfg.noise.pos_sigma);
    cfg.noise.angle_sigma = map.get_double("noise.angle_sigma_rad", cfg.noise.angle_sigma);
    cfg.noise.seed = map.get_uint("noise.seed", cfg.noise.seed);

    cfg.initial.r = map.get_vec3("initial.r_m", cfg.initial.r);
    cfg.initial.v = map.get_vec3("initial.v_mps", cfg.initial.v);
    {
        const EulerZYX current = euler_zyx(cfg.initial.q);
        const Vec3 fallback{rad_to_deg(current.roll), rad_to_deg(current.pitch),
                            rad_to_deg(current.yaw)};
        const Vec3 rpy_deg = map.get_vec3("initial.rpy_deg", fallback);
        cfg.initial.q = quat_from_euler_zyx(
            {deg_to_rad(rpy_deg.x), deg_to_rad(rpy_deg.y), deg_to_rad(rpy_deg.z)});
    }
    cfg.initial.omega = map.get_vec3("initial.omega_radps", cfg.initial.omega);

    cfg.safety.min_corner = map.get_vec3("safety.min_m", cfg.safety.min_corner);
    cfg.safety.max_corner = map.get_vec3("safety.max_m", cfg.safety.max_corner);

    // Setpoint schedule: entries added beyond the preset repeat the last one
    // until overridden, so a schedule extension only has to state what changed.
    const auto count = map.get_uint("setpoint.count", cfg.setpoints.size());
    if (count == 0) throw ConfigError("setpoint.count", "schedule needs at least one setpoint");
    while (cfg.setpoints.size() < count) cfg.setpoints.push_back(cfg.setpoints.back());
    cfg.setpoints.resize(count);
    for (std::size_t i = 0; i < cfg.setpoints.size(); ++i) {
        TimedSetpoint& ts = cfg.setpoints[i];
        ts.t = map.get_double(detail::setpoint_key(i, "t_s"), ts.t);
        ts.setpoint.r_d = map.get_vec3(detail::setpoint_key(i, "r_m"), ts.setpoint.r_d);
        ts.setpoint.rdot_d = map.get_vec3(detail::setpoint_key(i, "rdot_mps"), ts.setpoint.rdot_d);
        ts.setpoint.rddot_d =
            map.get_vec3(detail::setpoint_key(i, "rddot_mps2"), ts.setpoint.rddot_d);
        ts.setpoint.psi_d = map.get_double(detail::setpoint_key(i, "psi_d_rad"), ts.setpoint.psi_d);
        ts.setpoint.omega_hat_d =
            map.get_vec3(detail::setpoint_key(i, "omega_hat_d_radps"), ts.setpoint.omega_hat_d);
        ts.setpoint.tau_d = map.get_vec3(detail::setpoint_key(i, "tau_d_Nm"), ts.setpoint.tau_d);
    }

    // Reject unknown keys so a typo cannot silently fall back to defaults.
    for (const auto& [key, value] : map.values()) {
        if (detail::static_config_keys().count(key)) continue;
        bool known = false;
        for (std::size_t i = 0; i < cfg.setpoints.size() && !known; ++i) {
            for (const auto& field : detail::setpoint_field_names()) {
                if (key == detail::setpoint_key(i, field)) {
                    known = true;
                    break;
                }
            }
        }
        if (!known) throw ConfigError(key, "unknown configuration key");
    }

    cfg.validate();
    return cfg;
}

inline ConfigMap scenario_to_config(const ScenarioConfig& cfg) {
    ConfigMap map;
    map.set("scenario.name", scenario_name(cfg.scenario));
    map.set("scenario.duration_s", format_double(cfg.duration));
    map.set("scenario.metrics_window_s", format_double(cfg.metrics_window));
    map.set("rates.physics_hz", format_double(cfg.rates.physics_hz));
    map.set("rates.control_hz", format_double(cfg.rates.control_hz));
    map.set("rates.mocap_hz", format_double(cfg.rates.mocap_hz));

    map.set("robot.kind", cfg.robot.kind == RobotKind::robobee ? "robobee" : "beeplus");
    map.set("robot.mass_kg", format_double(cfg.robot.mass));
    map.set("robot.inertia_kgm2",
            format_vec3({cfg.robot.inertia(0, 0), cfg.robot.inertia(1, 1),
                         cfg.robot.inertia(2, 2)}));
    map.set("robot.gravity_mps2", format_double(cfg.robot.gravity));
    map.set("robot.flap_freq_hz", format_double(cfg.robot.flap_freq));
    map.set("ripple.torque_amp_Nm", format_vec3(cfg.robot.ripple_torque_amp));
    map.set("ripple.force_amp_N", format_double(cfg.robot.ripple_force_amp));
    map.set("ripple.ramp_s", format_double(cfg.robot.ripple_ramp_s));

    if (cfg.robot.kind == RobotKind::robobee) {
        map.set("mix.k_amp_N", format_double(cfg.robot.robobee_mix.k_amp));
        map.set("mix.k_roll_Nm", format_double(cfg.robot.robobee_mix.k_roll));
        map.set("mix.k_pitch_Nm", format_double(cfg.robot.robobee_mix.k_pitch));
        map.set("mix.k_yaw_Nm", format_double(cfg.robot.robobee_mix.k_yaw));
        map.set("limits.theta_amp_max", format_double(cfg.robot.robobee_limits.theta_amp_max));
        map.set("limits.theta_roll_max", format_double(cfg.robot.robobee_limits.theta_roll_max));
        map.set("limits.theta_pitch_max",
                format_double(cfg.robot.robobee_limits.theta_pitch_max));
        map.set("limits.theta_yaw_max", format_double(cfg.robot.robobee_limits.theta_yaw_max));
    } else {
        map.set("mix.k_f_N", format_double(cfg.robot.beeplus_mix.k_f));
        map.set("mix.k_s_N", format_double(cfg.robot.beeplus_mix.k_s));
        map.set("mix.d1_m", format_double(cfg.robot.beeplus_mix.d1));
        map.set("mix.d2_m", format_double(cfg.robot.beeplus_mix.d2));
        map.set("mix.d3_m", format_double(cfg.robot.beeplus_mix.d3));
        map.set("limits.v_max", format_double(cfg.robot.beeplus_limits.v_max));
    }

    map.set("gains.K1", format_vec3(cfg.controller.attitude.K1));
    map.set("gains.K2", format_vec3(cfg.controller.attitude.K2));
    map.set("gains.Kp", format_vec3(cfg.controller.position.Kp));
    map.set("gains.Kd", format_vec3(cfg.controller.position.Kd));
    map.set("gains.Ki", format_vec3(cfg.controller.position.Ki));
    map.set("gains.integral_limit_N", format_vec3(cfg.controller.position.integral_limit));
    map.set("control.yaw_mode",
            cfg.controller.yaw_mode == YawMode::open_loop ? "open_loop" : "regulated");
    map.set("control.omega_d_frame",
            cfg.controller.omega_d_frame == OmegaDFrame::literal ? "literal" : "rotated");
    map.set("control.altitude_only", cfg.controller.altitude_only ? "true" : "false");
    map.set("control.f_min_factor", format_double(cfg.controller.f_min_factor));

    map.set("estimator.lambda_radps", format_double(cfg.estimator_lambda));
    map.set("noise.pos_sigma_m", format_double(cfg.noise.pos_sigma));
    map.set("noise.angle_sigma_rad", format_double(cfg.noise.angle_sigma));
    map.set("noise.seed", std::to_string(cfg.noise.seed));

    map.set("initial.r_m", format_vec3(cfg.initial.r));
    map.set("initial.v_mps", format_vec3(cfg.initial.v));
    const EulerZYX rpy = euler_zyx(cfg.initial.q);
    map.set("initial.rpy_deg", format_vec3({rad_to_deg(rpy.roll), rad_to_deg(rpy.pitch),
                                            rad_to_deg(rpy.yaw)}));
    map.set("initial.omega_radps", format_vec3(cfg.initial.omega));
    map.set("safety.min_m", format_vec3(cfg.safety.min_corner));
    map.set("safety.max_m", format_vec3(cfg.safety.max_corner));

    map.set("setpoint.count", std::to_string(cfg.setpoints.size()));
    for (std::size_t i = 0; i < cfg.setpoints.size(); ++i) {
        const TimedSetpoint& ts = cfg.setpoints[i];
        map.set(detail::setpoint_key(i, "t_s"), format_double(ts.t));
        map.set(detail::setpoint_key(i, "r_m"), format_vec3(ts.setpoint.r_d));
        map.set(detail::setpoint_key(i, "rdot_mps"), format_vec3(ts.setpoint.rdot_d));
        map.set(detail::setpoint_key(i, "rddot_mps2"), format_vec3(ts.setpoint.rddot_d));
        map.set(detail::setpoint_key(i, "psi_d_rad"), format_double(ts.setpoint.psi_d));
        map.set(detail::setpoint_key(i, "omega_hat_d_radps"),
                format_vec3(ts.setpoint.omega_hat_d));
        map.set(detail::setpoint_key(i, "tau_d_Nm"), format_vec3(ts.setpoint.tau_d));
    }
    return map;
}

}  // namespace flapsim
