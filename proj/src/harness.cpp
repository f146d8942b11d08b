#include "dhm/harness.hpp"

#include "dhm/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <stdexcept>

namespace dhm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::uint64_t kNoiseStream = 0x9e3779b97f4a7c15ULL;

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f.imbue(std::locale::classic());
    f << std::setprecision(17);
    return f;
}

std::string opt(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

struct MeanCi {
    double mean = kNaN;
    double ci = kNaN;
};

MeanCi mean_ci(const std::vector<double>& xs) {
    MeanCi r;
    if (xs.empty()) return r;
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double n = static_cast<double>(xs.size());
    r.mean = sum / n;
    if (xs.size() < 2) {
        r.ci = 0.0;
        return r;
    }
    double ss = 0.0;
    for (double x : xs) ss += (x - r.mean) * (x - r.mean);
    r.ci = 1.96 * std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    return r;
}

} // namespace

void ExperimentConfig::validate() const {
    agent.validate();
    env.validate();
    if (max_steps <= 0) throw std::invalid_argument("experiment: max_steps must be positive");
    if (final_window <= 0) throw std::invalid_argument("experiment: final_window must be positive");
    if (!(success_distance > 0.0)) throw std::invalid_argument("experiment: success_distance must be positive");
}

TrialResult run_trial(const TrialSpec& spec, const ExperimentConfig& cfg, const TrialObserver& observer) {
    cfg.validate();
    TrialResult r;
    r.seed = spec.seed;
    r.condition = spec.condition;
    r.speed = spec.speed;

    std::mt19937_64 rng(spec.seed);
    std::mt19937_64 noise(spec.seed ^ kNoiseStream);
    WorldState world = sample_trial(spec, cfg.env, rng);
    Agent agent(cfg.agent, cfg.env);
    Observation obs = observe(world, cfg.env, &noise);
    agent.initialize_beliefs(obs);
    if (observer) observer(0, agent, world);

    const int window_start = std::max(0, spec.max_steps - cfg.final_window);
    double window_sum = 0.0;
    int window_n = 0;
    double distance = (world.ball_pos - tool_tip(cfg.env, world)).norm();
    try {
        for (int t = 1; t <= spec.max_steps; ++t) {
            const bool felt = obs.tactile[1] > obs.tactile[0];
            const Vec& a = agent.step(obs);
            if (!felt)
                r.max_reach_ball_before_grasp =
                    std::max(r.max_reach_ball_before_grasp, agent.end_effector_causes().causes().posterior[2]);
            world = env_step(world, a, cfg.env);
            obs = observe(world, cfg.env, &noise);

            distance = (world.ball_pos - tool_tip(cfg.env, world)).norm();
            if (world.grasped && !r.grasp_time) r.grasp_time = t;
            if (world.grasped && distance < cfg.success_distance && !r.completion_time) r.completion_time = t;
            if (t > window_start) {
                window_sum += distance;
                ++window_n;
            }
            if (observer) observer(t, agent, world);
        }
        r.final_error = window_sum / std::max(window_n, 1);
    } catch (const NumericalError& e) {
        r.diagnostic = e.what();
        r.final_error = std::isfinite(distance) ? distance : kNaN;
        r.success = false;
        return r;
    }
    r.success = world.grasped && r.final_error < cfg.success_distance;
    return r;
}

TrialSpec sweep_trial(const SweepSpec& sweep, int i, int max_steps) {
    TrialSpec s;
    s.condition = sweep.condition;
    s.speed = sweep.trials <= 1 ? sweep.speed_min
                                : sweep.speed_min + (sweep.speed_max - sweep.speed_min) * i / (sweep.trials - 1);
    s.seed = sweep.seed + static_cast<std::uint64_t>(i);
    s.max_steps = max_steps;
    return s;
}

std::vector<TrialResult> run_experiment(const SweepSpec& sweep, const ExperimentConfig& cfg) {
    cfg.validate();
    const int n = std::max(sweep.trials, 0);
    std::vector<TrialResult> out(static_cast<std::size_t>(n));
    std::vector<std::string> errors(static_cast<std::size_t>(n));
#pragma omp parallel for schedule(dynamic, 1)
    for (int i = 0; i < n; ++i) {
        try {
            out[static_cast<std::size_t>(i)] = run_trial(sweep_trial(sweep, i, cfg.max_steps), cfg);
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
        }
    }
    for (const auto& e : errors)
        if (!e.empty()) throw std::runtime_error(e);
    return out;
}

std::vector<TrialResult> run_experiment_serial(const SweepSpec& sweep, const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<TrialResult> out;
    for (int i = 0; i < sweep.trials; ++i) out.push_back(run_trial(sweep_trial(sweep, i, cfg.max_steps), cfg));
    return out;
}

int speed_bin(double speed) {
    const int b = static_cast<int>(std::floor(speed * kSpeedBins / kMaxSpeed));
    return std::clamp(b, 0, kSpeedBins - 1);
}

std::vector<AggregateRow> aggregate(const std::vector<TrialResult>& results) {
    struct Acc {
        int trials = 0, successes = 0;
        std::vector<double> times, errors;
    };
    std::map<std::pair<int, int>, Acc> groups;
    for (const auto& r : results) {
        auto& g = groups[{static_cast<int>(r.condition), speed_bin(r.speed)}];
        ++g.trials;
        if (r.success) ++g.successes;
        if (r.completion_time) g.times.push_back(*r.completion_time);
        if (std::isfinite(r.final_error)) g.errors.push_back(r.final_error);
    }
    std::vector<AggregateRow> rows;
    for (auto& [key, g] : groups) {
        // Sorting makes the floating-point sums independent of trial order.
        std::sort(g.times.begin(), g.times.end());
        std::sort(g.errors.begin(), g.errors.end());
        AggregateRow row;
        row.condition = static_cast<Condition>(key.first);
        row.speed_bin = key.second;
        row.trials = g.trials;
        row.accuracy = static_cast<double>(g.successes) / g.trials;
        const MeanCi t = mean_ci(g.times), e = mean_ci(g.errors);
        row.time_mean = t.mean;
        row.time_ci = t.ci;
        row.error_mean = e.mean;
        row.error_ci = e.ci;
        rows.push_back(row);
    }
    return rows;
}

void write_trials_csv(const std::filesystem::path& path, const std::vector<TrialResult>& results) {
    auto f = open_csv(path);
    f << "seed,condition,speed,speed_bin,success,completion_time,grasp_time,final_error,diagnostic\n";
    for (const auto& r : results)
        f << r.seed << ',' << condition_name(r.condition) << ',' << r.speed << ',' << speed_bin(r.speed) << ','
          << (r.success ? 1 : 0) << ',' << opt(r.completion_time) << ',' << opt(r.grasp_time) << ',' << r.final_error
          << ",\"" << r.diagnostic << "\"\n";
}

void write_aggregate_csv(const std::filesystem::path& path, const std::vector<AggregateRow>& rows) {
    auto f = open_csv(path);
    f << "condition,speed_bin,accuracy,time_mean,time_ci,error_mean,error_ci\n";
    for (const auto& r : rows)
        f << condition_name(r.condition) << ',' << r.speed_bin << ',' << r.accuracy << ',' << r.time_mean << ','
          << r.time_ci << ',' << r.error_mean << ',' << r.error_ci << '\n';
}

void write_aggregate_charts(const std::filesystem::path& dir, const std::vector<AggregateRow>& rows) {
    std::filesystem::create_directories(dir);
    static const char* colors[] = {"#1f77b4", "#2ca02c", "#d62728", "#9467bd"};
    std::vector<svg::Series> acc, time, err;
    for (int c = 0; c < 4; ++c) {
        svg::Series a{condition_name(static_cast<Condition>(c)), {}, {}, colors[c]};
        svg::Series t = a, e = a;
        for (const auto& r : rows) {
            if (static_cast<int>(r.condition) != c) continue;
            a.x.push_back(r.speed_bin);
            a.y.push_back(r.accuracy);
            t.x.push_back(r.speed_bin);
            t.y.push_back(r.time_mean);
            e.x.push_back(r.speed_bin);
            e.y.push_back(r.error_mean);
        }
        if (a.x.empty()) continue;
        acc.push_back(a);
        time.push_back(t);
        err.push_back(e);
    }
    svg::line_chart("Accuracy", "speed bin", "accuracy", acc).save(dir / "accuracy.svg");
    svg::line_chart("Completion time", "speed bin", "steps", time).save(dir / "time.svg");
    svg::line_chart("Final error", "speed bin", "pixels", err).save(dir / "error.svg");
}

namespace {

void render_frame(const std::filesystem::path& path, const Agent& agent, const WorldState& world,
                  const EnvConfig& env, int step) {
    svg::Document d(env.arena, env.arena);
    d.rect(0, 0, env.arena, env.arena, "white", "black");
    const auto& h = agent.hierarchy();
    static const char* belief_colors[] = {"#6baed6", "#a1d99b", "#fc9272"};
    // Beliefs of every pathway, virtual level drawn fainter.
    for (int s = 0; s < 3; ++s) {
        Vec2 prev = env.base;
        for (std::size_t i = 0; i < h.size(); ++i) {
            const int slot = h.level(i).slot(static_cast<Entity>(s));
            if (slot < 0) continue;
            const Vec2 p = agent.to_world(h.level(i).pose(slot).head<2>());
            d.line(prev.x(), prev.y(), p.x(), p.y(), belief_colors[s], 6, i == kVirtualLevel ? 0.35 : 0.7);
            prev = p;
        }
    }
    const ArmPose arm = arm_forward_kinematics(env, world.joint_angles);
    Vec2 prev = env.base;
    for (const auto& j : arm.joints) {
        d.line(prev.x(), prev.y(), j.x(), j.y(), "#08306b", 8);
        d.circle(j.x(), j.y(), 5, "#08306b");
        prev = j;
    }
    const Vec2 tip = tool_tip(env, world);
    d.line(world.tool_origin.x(), world.tool_origin.y(), tip.x(), tip.y(), "#006d2c", 6);
    d.circle(world.ball_pos.x(), world.ball_pos.y(), 14, "#a50f15");
    d.text(20, env.arena - 20, "t = " + std::to_string(step), 28);
    d.save(path);
}

} // namespace

TrialResult trace_trial(const TrialSpec& spec, const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                        const TraceOptions& options) {
    std::filesystem::create_directories(out_dir);
    if (options.frame_every > 0) std::filesystem::create_directories(out_dir / "frames");

    auto causes = open_csv(out_dir / "causes.csv");
    causes << "step,replanned,l4_stay,l4_reach_tool,l4_reach_ball,l5_stay,l5_reach_ball,"
              "v4_stay,v4_reach_tool,v4_reach_ball,v5_stay,v5_reach_ball";
    for (int s = 0; s < task::kNumStates; ++s) causes << ",s_" << task::state_name(s);
    causes << '\n';

    auto dyn = open_csv(out_dir / "dynamics.csv");
    dyn << "step,f4_stay,f4_reach_tool,f4_reach_ball,mu4_prime,f5_stay,f5_reach_ball,mu5_prime\n";

    auto forces = open_csv(out_dir / "forces.csv");
    forces << "step,level,entity,component,velocity,own_error,child_errors,visual,dynamics,total,mu_dot\n";

    auto beliefs = open_csv(out_dir / "beliefs.csv");
    beliefs << "step,level,entity,theta,length,x,y,phi\n";

    auto scene = open_csv(out_dir / "scene.csv");
    scene << "step";
    for (int j = 0; j < cfg.env.dof(); ++j) scene << ",q" << j + 1;
    for (int j = 0; j < cfg.env.dof(); ++j) scene << ",limb" << j + 1 << "_x,limb" << j + 1 << "_y";
    scene << ",tool_origin_x,tool_origin_y,tool_tip_x,tool_tip_y,ball_x,ball_y,grasped,tip_ball_distance\n";

    std::vector<Vec> previous_mu;
    auto observer = [&](int step, const Agent& agent, const WorldState& world) {
        const auto& h = agent.hierarchy();
        const auto& ee = agent.end_effector_causes();
        const auto& vt = agent.virtual_causes();

        causes << step << ',' << (step > 0 && agent.replanned_last_step() ? 1 : 0);
        for (double x : ee.causes().log_evidence) causes << ',' << x;
        for (double x : vt.causes().log_evidence) causes << ',' << x;
        for (double x : ee.causes().posterior) causes << ',' << x;
        for (double x : vt.causes().posterior) causes << ',' << x;
        for (double x : agent.model().s) causes << ',' << x;
        causes << '\n';

        dyn << step;
        for (const auto& f : ee.trajectory_predictions()) dyn << ',' << f.norm();
        dyn << ',' << ee.belief().mu_prime.norm();
        for (const auto& f : vt.trajectory_predictions()) dyn << ',' << f.norm();
        dyn << ',' << vt.belief().mu_prime.norm() << '\n';

        if (step > 0) {
            static const char* comp[] = {"x", "y", "phi"};
            for (std::size_t i : {kEndEffectorLevel, kVirtualLevel}) {
                const auto& f = agent.last_sweep().extrinsic[i];
                const Vec mu_dot = (h.level(i).extrinsic().belief().mu - previous_mu[i]) / cfg.agent.dt;
                const Vec total = f.total();
                for (int s = 0; s < h.level(i).num_entities(); ++s)
                    for (int c = 0; c < kExtrinsicDim; ++c) {
                        const auto k = static_cast<Eigen::Index>(kExtrinsicDim * s + c);
                        forces << step << ',' << i + 1 << ',' << entity_name(h.level(i).topology().entities[s]) << ','
                               << comp[c] << ',' << f.velocity[k] << ',' << f.own_error[k] << ','
                               << f.child_errors[k] << ',' << f.visual[k] << ',' << f.dynamics[k] << ',' << total[k]
                               << ',' << mu_dot[k] << '\n';
                    }
            }
        }
        previous_mu.resize(h.size());
        for (std::size_t i = 0; i < h.size(); ++i) previous_mu[i] = h.level(i).extrinsic().belief().mu;

        for (std::size_t i = 0; i < h.size(); ++i) {
            const auto& l = h.level(i);
            for (int s = 0; s < l.num_entities(); ++s) {
                const Vec2 p = agent.to_world(l.pose(s).head<2>());
                beliefs << step << ',' << i + 1 << ',' << entity_name(l.topology().entities[s]) << ','
                        << l.joint(s)[0] << ',' << l.joint(s)[1] * cfg.agent.length_scale << ',' << p.x() << ','
                        << p.y() << ',' << l.pose(s)[2] << '\n';
            }
        }

        const ArmPose arm = arm_forward_kinematics(cfg.env, world.joint_angles);
        const Vec2 tip = tool_tip(cfg.env, world);
        scene << step;
        for (double q : world.joint_angles) scene << ',' << q;
        for (const auto& j : arm.joints) scene << ',' << j.x() << ',' << j.y();
        scene << ',' << world.tool_origin.x() << ',' << world.tool_origin.y() << ',' << tip.x() << ',' << tip.y()
              << ',' << world.ball_pos.x() << ',' << world.ball_pos.y() << ',' << (world.grasped ? 1 : 0) << ','
              << (world.ball_pos - tip).norm() << '\n';

        if (options.frame_every > 0 && step % options.frame_every == 0) {
            std::ostringstream name;
            name << "frame_" << std::setw(5) << std::setfill('0') << step << ".svg";
            render_frame(out_dir / "frames" / name.str(), agent, world, cfg.env, step);
        }
    };
    return run_trial(spec, cfg, observer);
}

} // namespace dhm
