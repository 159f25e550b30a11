// flapsim command line: run scenarios to CSV and summarize logs.
//
//   flapsim simulate --config <path> [--override key=value]... --out <path.csv>
//   flapsim metrics  --log <path.csv> [--window <seconds>]
//   flapsim scenarios
//
// Exit codes: 0 success, 2 configuration/input error, 3 aborted run.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flapsim/config_io.hpp"
#include "flapsim/metrics.hpp"
#include "flapsim/scenario.hpp"
#include "flapsim/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitAborted = 3;

int run_simulate(const std::string& config_path, const std::vector<std::string>& overrides,
                 const std::string& out_path) {
    flapsim::ScenarioConfig cfg;
    try {
        flapsim::ConfigMap map = flapsim::ConfigMap::parse_file(config_path);
        for (const auto& o : overrides) map.apply_override(o);
        cfg = flapsim::scenario_from_config(map);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }

    const flapsim::RunResult result = flapsim::run_scenario(cfg);
    try {
        flapsim::write_log_file(out_path, result.records);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }

    std::cout << "scenario " << flapsim::scenario_name(cfg.scenario) << ": "
              << flapsim::run_status_name(result.status) << " after "
              << flapsim::format_double(result.end_time) << " s, " << result.records.size()
              << " records -> " << out_path << "\n";
    if (result.status != flapsim::RunStatus::completed) {
        std::cerr << "aborted: " << result.message << "\n";
        return kExitAborted;
    }
    return kExitOk;
}

int run_metrics(const std::string& log_path, double window_start) {
    try {
        const flapsim::ParsedLog log = flapsim::read_log_file(log_path);
        const flapsim::MetricsSummary m = flapsim::compute_metrics(log, window_start);
        std::cout << flapsim::metrics_report(m);
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
}

int run_scenarios() {
    std::cout << "robobee_hover               20 s two-winged hover at a fixed point\n"
              << "beeplus_altitude_attitude    5 s four-winged altitude hold, level attitude\n"
              << "beeplus_position             2 s four-winged position control with a step\n"
              << "custom                      20 s two-winged base for fully hand-set configs\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic flight simulator for two insect-scale flapping-wing robots"};
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    auto* simulate = app.add_subcommand("simulate", "run a scenario and write a CSV log");
    simulate->add_option("--config", config_path, "scenario config file")->required();
    simulate->add_option("--override", overrides,
                         "config override as section.key=value (repeatable)");
    simulate->add_option("--out", out_path, "output CSV path")->required();

    std::string log_path;
    double window_start = 1.0;
    auto* metrics = app.add_subcommand("metrics", "summarize a CSV log");
    metrics->add_option("--log", log_path, "CSV log produced by simulate")->required();
    metrics->add_option("--window", window_start,
                        "metrics window start time in seconds (default 1.0)");

    auto* scenarios = app.add_subcommand("scenarios", "list built-in scenarios");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    if (simulate->parsed()) return run_simulate(config_path, overrides, out_path);
    if (metrics->parsed()) return run_metrics(log_path, window_start);
    if (scenarios->parsed()) return run_scenarios();
    return kExitConfigError;
}
