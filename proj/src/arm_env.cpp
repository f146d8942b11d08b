#include "dhm/arm_env.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dhm {

namespace {

constexpr double kTwoPi = 6.283185307179586476925;

void reflect(Vec2& pos, Vec2& vel, double arena) {
    for (int k = 0; k < 2; ++k) {
        if (pos[k] < 0.0) {
            pos[k] = -pos[k];
            vel[k] = -vel[k];
        } else if (pos[k] > arena) {
            pos[k] = 2.0 * arena - pos[k];
            vel[k] = -vel[k];
        }
    }
}

Vec2 sample_position(std::mt19937_64& rng, const EnvConfig& cfg, double max_radius) {
    std::uniform_real_distribution<double> u(0.0, cfg.arena);
    for (;;) {
        const Vec2 p{u(rng), u(rng)};
        const double r = (p - cfg.base).norm();
        if (r >= cfg.spawn_clearance && r <= max_radius) return p;
    }
}

} // namespace

const char* condition_name(Condition c) {
    switch (c) {
    case Condition::static_scene: return "static";
    case Condition::moving_tool: return "tool";
    case Condition::moving_ball: return "ball";
    case Condition::both: return "both";
    }
    return "?";
}

Condition parse_condition(const std::string& s) {
    if (s == "static" || s == "static_scene") return Condition::static_scene;
    if (s == "tool" || s == "moving_tool") return Condition::moving_tool;
    if (s == "ball" || s == "moving_ball") return Condition::moving_ball;
    if (s == "both") return Condition::both;
    throw std::invalid_argument("unknown condition '" + s + "' (expected static|tool|ball|both)");
}

double EnvConfig::arm_reach() const { return std::accumulate(limb_lengths.begin(), limb_lengths.end(), 0.0); }

void EnvConfig::validate() const {
    if (arena <= 0.0) throw std::invalid_argument("env: arena must be positive");
    if (limb_lengths.empty()) throw std::invalid_argument("env: at least one limb required");
    for (double l : limb_lengths)
        if (!(l > 0.0)) throw std::invalid_argument("env: limb lengths must be positive");
    if (initial_angles.size() != limb_lengths.size())
        throw std::invalid_argument("env: initial_angles must have one entry per limb");
    if (!(tool_length > 0.0)) throw std::invalid_argument("env: tool length must be positive");
    if (!(grasp_threshold > 0.0)) throw std::invalid_argument("env: grasp threshold must be positive");
    if (!(joint_limit > 0.0)) throw std::invalid_argument("env: joint limit must be positive");
    if (visual_noise < 0.0) throw std::invalid_argument("env: visual noise must be >= 0");
    if (spawn_clearance >= arm_reach() - reach_margin)
        throw std::invalid_argument("env: spawn clearance leaves no reachable spawn region");
}

void TrialSpec::validate() const {
    if (!(speed >= 0.0 && speed <= kMaxSpeed)) throw std::invalid_argument("trial: speed must lie in [0, 8]");
    if (max_steps <= 0) throw std::invalid_argument("trial: max_steps must be positive");
}

ArmPose arm_forward_kinematics(const EnvConfig& cfg, const std::vector<double>& angles) {
    ArmPose out;
    out.joints.reserve(angles.size());
    Vec2 p = cfg.base;
    double phi = 0.0;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        phi += angles[i];
        p += cfg.limb_lengths[i] * Vec2(std::cos(phi), std::sin(phi));
        out.joints.push_back(p);
    }
    out.end_orientation = phi;
    return out;
}

Vec2 tool_tip(const EnvConfig& cfg, const WorldState& w) {
    return w.tool_origin + cfg.tool_length * Vec2(std::cos(w.tool_angle), std::sin(w.tool_angle));
}

WorldState env_step(const WorldState& world, const Eigen::VectorXd& action, const EnvConfig& cfg) {
    if (action.size() != static_cast<Eigen::Index>(world.joint_angles.size()))
        throw std::invalid_argument("env_step: action size differs from the number of joints");
    if (!action.allFinite()) throw std::invalid_argument("env_step: non-finite action");

    WorldState w = world;
    for (std::size_t i = 0; i < w.joint_angles.size(); ++i)
        w.joint_angles[i] =
            std::clamp(w.joint_angles[i] + action[static_cast<Eigen::Index>(i)], -cfg.joint_limit, cfg.joint_limit);

    if (!w.grasped) {
        w.tool_origin += w.tool_velocity;
        reflect(w.tool_origin, w.tool_velocity, cfg.arena);
    }
    w.ball_pos += w.ball_velocity;
    reflect(w.ball_pos, w.ball_velocity, cfg.arena);

    const ArmPose arm = arm_forward_kinematics(cfg, w.joint_angles);
    if (!w.grasped && (arm.end_effector() - w.tool_origin).norm() < cfg.grasp_threshold) {
        w.grasped = true;
        w.grasp_offset = cfg.align_tool_on_grasp ? 0.0 : w.tool_angle - arm.end_orientation;
        w.tool_velocity.setZero();
    }
    if (w.grasped) {
        w.tool_origin = arm.end_effector();
        w.tool_angle = arm.end_orientation + w.grasp_offset;
    }
    ++w.step_count;
    return w;
}

Observation observe(const WorldState& world, const EnvConfig& cfg, std::mt19937_64* rng) {
    Observation o;
    o.proprio = world.joint_angles;
    o.limbs = arm_forward_kinematics(cfg, world.joint_angles).joints;
    o.tool_origin = world.tool_origin;
    o.tool_tip = tool_tip(cfg, world);
    o.ball = world.ball_pos;
    o.tactile = world.grasped ? Eigen::Vector2d(0.0, 1.0) : Eigen::Vector2d(1.0, 0.0);
    if (cfg.visual_noise > 0.0 && rng) {
        std::normal_distribution<double> n(0.0, cfg.visual_noise);
        auto jitter = [&](Vec2& p) { p += Vec2(n(*rng), n(*rng)); };
        for (auto& p : o.limbs) jitter(p);
        jitter(o.tool_origin);
        jitter(o.tool_tip);
        jitter(o.ball);
    }
    return o;
}

WorldState sample_trial(const TrialSpec& spec, const EnvConfig& cfg, std::mt19937_64& rng) {
    spec.validate();
    const bool tool_moves = spec.condition == Condition::moving_tool || spec.condition == Condition::both;
    const bool ball_moves = spec.condition == Condition::moving_ball || spec.condition == Condition::both;
    const double unbounded = std::numeric_limits<double>::infinity();
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);

    WorldState w;
    w.joint_angles = cfg.initial_angles;
    w.tool_origin = sample_position(rng, cfg, tool_moves && !cfg.spawn_moving_in_reach ? unbounded : cfg.arm_reach() - cfg.reach_margin);
    w.tool_angle = angle(rng);
    const double tool_dir = angle(rng);
    w.ball_pos = sample_position(rng, cfg,
                                 ball_moves && !cfg.spawn_moving_in_reach ? unbounded : cfg.arm_reach() + cfg.tool_length - cfg.reach_margin);
    const double ball_dir = angle(rng);
    if (tool_moves) w.tool_velocity = spec.speed * Vec2(std::cos(tool_dir), std::sin(tool_dir));
    if (ball_moves) w.ball_velocity = spec.speed * Vec2(std::cos(ball_dir), std::sin(ball_dir));
    return w;
}

} // namespace dhm
