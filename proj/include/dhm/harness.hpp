#pragma once

// Experiment driver: single trials, seeded sweeps over object speed, metric
// aggregation per speed bin, CSV output and per-step traces.

#include "dhm/agent.hpp"
#include "dhm/arm_env.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dhm {

struct ExperimentConfig {
    AgentConfig agent;
    EnvConfig env;
    int max_steps = 3000;
    int final_window = 300;          // steps averaged into the final error
    double success_distance = 100.0; // pixels, ball to tool tip

    void validate() const;
};

struct TrialResult {
    bool success = false;
    std::optional<int> completion_time;  // first step with the tool held and the ball within success_distance
    double final_error = 0.0;            // mean ball to tool-tip distance over the final window, pixels
    std::optional<int> grasp_time;
    std::uint64_t seed = 0;
    Condition condition = Condition::static_scene;
    double speed = 0.0;
    double max_reach_ball_before_grasp = 0.0;  // peak end-effector reach_ball cause while the tool is not felt
    std::string diagnostic;                    // set when the trial aborted

    bool operator==(const TrialResult&) const = default;
};

/// Called once with the initial state (step 0) and after every agent/world step.
using TrialObserver = std::function<void(int step, const Agent& agent, const WorldState& world)>;

TrialResult run_trial(const TrialSpec& spec, const ExperimentConfig& cfg, const TrialObserver& observer = {});

struct SweepSpec {
    Condition condition = Condition::static_scene;
    int trials = 150;
    double speed_min = 0.0;
    double speed_max = kMaxSpeed;
    std::uint64_t seed = 1;
};

/// Trial i of a sweep: speeds evenly spaced over [speed_min, speed_max], seed + i.
TrialSpec sweep_trial(const SweepSpec& sweep, int i, int max_steps);

/// Trials run in parallel; results are ordered by trial index.
std::vector<TrialResult> run_experiment(const SweepSpec& sweep, const ExperimentConfig& cfg);
/// Serial reference of run_experiment.
std::vector<TrialResult> run_experiment_serial(const SweepSpec& sweep, const ExperimentConfig& cfg);

inline constexpr int kSpeedBins = 9;

/// Nine equal-width bins over [0, 8] labelled 0..8.
int speed_bin(double speed);

struct AggregateRow {
    Condition condition = Condition::static_scene;
    int speed_bin = 0;
    int trials = 0;
    double accuracy = 0.0;
    double time_mean = 0.0;  // over trials that completed; NaN if none did
    double time_ci = 0.0;    // 95% half-width, normal approximation
    double error_mean = 0.0;
    double error_ci = 0.0;
};

/// One row per (condition, speed bin) present, sorted; independent of input order.
std::vector<AggregateRow> aggregate(const std::vector<TrialResult>& results);

void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialResult>& results);
void write_aggregate_csv(const std::filesystem::path& path, const std::vector<AggregateRow>& rows);
/// Accuracy, time and error against speed bin, one SVG chart each.
void write_aggregate_charts(const std::filesystem::path& dir, const std::vector<AggregateRow>& rows);

struct TraceOptions {
    int frame_every = 100;  // 0 disables SVG frames
};

/// Runs one trial and writes causes.csv, dynamics.csv, forces.csv,
/// beliefs.csv, scene.csv and SVG frames into `out_dir`.
TrialResult trace_trial(const TrialSpec& spec, const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                        const TraceOptions& options = {});

} // namespace dhm
