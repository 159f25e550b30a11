#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "flapsim/allocation.hpp"
#include "flapsim/control.hpp"
#include "flapsim/dynamics.hpp"
#include "flapsim/estimation.hpp"
#include "flapsim/log.hpp"
#include "flapsim/scenario.hpp"

namespace flapsim {

enum class RunStatus { completed, aborted_safety, aborted_blowup };

inline std::string run_status_name(RunStatus s) {
    switch (s) {
        case RunStatus::completed: return "completed";
        case RunStatus::aborted_safety: return "aborted_safety";
        case RunStatus::aborted_blowup: return "aborted_blowup";
    }
    return "unknown";
}

struct RunResult {
    std::vector<LogRecord> records;
    RunStatus status{RunStatus::completed};
    double end_time{0.0};
    std::string message;
};

// Multirate experimental loop. Physics integrates at physics_hz with the
// post-saturation wrench held between controller ticks (zero-order hold); the
// sensor samples at mocap_hz feeding the derivative filters; the controller
// runs at control_hz consuming the latest estimate. Per tick the commanded
// wrench passes through inverse mixing, saturation and forward mixing, so what
// the plant feels is exactly what the (possibly clipped) actuators produce.
// Samples run from t = 0 inclusive to t = duration exclusive, giving exactly
// control_hz * duration log records on a completed run.
inline RunResult run_scenario(const ScenarioConfig& cfg) {
    cfg.validate();
    const double dt = cfg.physics_dt();
    const long long n_steps = std::llround(cfg.duration * cfg.rates.physics_hz);
    const long long control_every = std::llround(cfg.rates.physics_hz / cfg.rates.control_hz);
    const long long mocap_every = std::llround(cfg.rates.physics_hz / cfg.rates.mocap_hz);

    RigidBodyState state = cfg.initial;

    MocapSensor sensor(cfg.noise);
    StateEstimator estimator(cfg.estimator_lambda, cfg.mocap_dt());
    Controller controller(cfg.controller, cfg.robot.mass, cfg.robot.gravity);

    RunResult result;
    result.records.reserve(static_cast<std::size_t>(n_steps / control_every) + 1);
    Wrench applied{};

    for (long long step = 0; step < n_steps; ++step) {
        const double t = static_cast<double>(step) * dt;

        if (step % mocap_every == 0) estimator.update(sensor.sample(state, t));

        if (step % control_every == 0) {
            const RigidBodyState est = estimator.estimate();
            const FlightSetpoint& sp = cfg.setpoint_at(t);
            const ControllerOutput out = controller.step(est, sp);

            LogRecord rec;
            rec.t = t;
            rec.r = state.r;
            rec.v = state.v;
            rec.q = state.q;
            rec.omega = state.omega;
            rec.r_est = est.r;
            rec.v_est = est.v;
            rec.q_est = est.q;
            rec.omega_est = est.omega;
            rec.r_d = sp.r_d;
            rec.psi_d = out.psi_d;
            rec.q_d = out.q_d;
            rec.wrench_cmd = out.wrench;

            if (cfg.robot.kind == RobotKind::robobee) {
                const auto sat =
                    saturate(robobee_inverse(out.wrench, cfg.robot.robobee_mix),
                             cfg.robot.robobee_limits);
                applied = robobee_forward(sat.command, cfg.robot.robobee_mix);
                rec.cmd = {sat.command.theta_amp, sat.command.theta_roll,
                           sat.command.theta_pitch, sat.command.theta_yaw};
                rec.sat = sat.clipped;
            } else {
                const auto sat = saturate(beeplus_inverse(out.wrench, cfg.robot.beeplus_mix),
                                          cfg.robot.beeplus_limits);
                applied = beeplus_forward(sat.command, cfg.robot.beeplus_mix);
                rec.cmd = {sat.command.v1, sat.command.v2, sat.command.v3, sat.command.v4};
                rec.sat = sat.clipped;
            }
            rec.wrench_app = applied;
            result.records.push_back(rec);

            if (!cfg.safety.contains(state.r)) {
                result.status = RunStatus::aborted_safety;
                result.end_time = t;
                result.message = "position left the safety volume at t = " + format_double(t) +
                                 " s; power off";
                return result;
            }
        }

        const Wrench total = applied + flap_ripple(t, cfg.robot);
        const auto next = step_rk4(state, total, cfg.robot, dt);
        if (!next) {
            result.status = RunStatus::aborted_blowup;
            result.end_time = t;
            result.message =
                "integration produced a non-finite state at t = " + format_double(t) + " s";
            return result;
        }
        state = *next;
    }

    result.status = RunStatus::completed;
    result.end_time = cfg.duration;
    return result;
}

}  // namespace flapsim
