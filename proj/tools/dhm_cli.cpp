// Command-line front end: sweeps, single-trial traces and config validation.

#include "dhm/config.hpp"
#include "dhm/harness.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;

namespace {

dhm::ExperimentConfig config_or_default(const std::string& path) {
    return path.empty() ? dhm::ExperimentConfig{} : dhm::load_config(path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deep hybrid active inference tool-use simulator"};
    app.require_subcommand(1);

    std::string condition = "static", config_path, out_dir = "out";
    int trials = 150;
    double speed_min = 0.0, speed_max = dhm::kMaxSpeed, speed = 0.0;
    std::uint64_t seed = 1;
    int frame_every = 100;

    auto* run = app.add_subcommand("run", "run a seeded velocity sweep for one condition");
    run->add_option("--condition", condition, "static | tool | ball | both")->capture_default_str();
    run->add_option("--trials", trials, "number of trials")->capture_default_str()->check(CLI::NonNegativeNumber);
    run->add_option("--speed-min", speed_min, "lowest object speed, px/step")->capture_default_str();
    run->add_option("--speed-max", speed_max, "highest object speed, px/step")->capture_default_str();
    run->add_option("--seed", seed, "seed of the first trial; trial i uses seed + i")->capture_default_str();
    run->add_option("--config", config_path, "experiment config file")->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory")->capture_default_str();

    auto* trace = app.add_subcommand("trace", "run one trial and write per-step traces");
    trace->add_option("--condition", condition, "static | tool | ball | both")->capture_default_str();
    trace->add_option("--speed", speed, "object speed, px/step")->capture_default_str();
    trace->add_option("--seed", seed, "trial seed")->capture_default_str();
    trace->add_option("--config", config_path, "experiment config file")->check(CLI::ExistingFile);
    trace->add_option("--frame-every", frame_every, "steps between SVG frames, 0 disables")->capture_default_str();
    trace->add_option("--out", out_dir, "output directory")->capture_default_str();

    std::string validate_path;
    auto* validate = app.add_subcommand("validate-config", "check a config file against the schema");
    validate->add_option("path", validate_path, "config file")->required();

    app.add_subcommand("print-config", "print the default config with every key");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("print-config")) {
            std::cout << dhm::default_config_text();
            return 0;
        }
        if (*validate) {
            dhm::load_config(validate_path);
            std::cout << validate_path << ": ok\n";
            return 0;
        }

        const auto cfg = config_or_default(config_path);
        dhm::SweepSpec sweep;
        sweep.condition = dhm::parse_condition(condition);
        fs::create_directories(out_dir);

        if (*run) {
            if (speed_min < 0.0 || speed_max > dhm::kMaxSpeed || speed_min > speed_max)
                throw std::invalid_argument("speeds must satisfy 0 <= speed-min <= speed-max <= 8");
            sweep.trials = trials;
            sweep.speed_min = speed_min;
            sweep.speed_max = speed_max;
            sweep.seed = seed;
            const auto t0 = std::chrono::steady_clock::now();
            const auto results = dhm::run_experiment(sweep, cfg);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            const auto rows = dhm::aggregate(results);
            dhm::write_trials_csv(fs::path(out_dir) / "trials.csv", results);
            dhm::write_aggregate_csv(fs::path(out_dir) / "aggregate.csv", rows);
            if (!rows.empty()) dhm::write_aggregate_charts(fs::path(out_dir) / "charts", rows);
            int ok = 0;
            for (const auto& r : results) ok += r.success ? 1 : 0;
            std::cout << condition << ": " << ok << "/" << results.size() << " successful trials in " << secs
                      << " s; results in " << out_dir << "\n";
            return 0;
        }

        dhm::TrialSpec spec;
        spec.condition = sweep.condition;
        spec.speed = speed;
        spec.seed = seed;
        spec.max_steps = cfg.max_steps;
        const auto r = dhm::trace_trial(spec, cfg, out_dir, {frame_every});
        std::cout << (r.success ? "success" : "failure") << ", grasp at "
                  << (r.grasp_time ? std::to_string(*r.grasp_time) : "-") << ", completed at "
                  << (r.completion_time ? std::to_string(*r.completion_time) : "-") << ", final error "
                  << r.final_error << " px";
        if (!r.diagnostic.empty()) std::cout << " (" << r.diagnostic << ")";
        std::cout << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
