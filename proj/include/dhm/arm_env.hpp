#pragma once

// Ground-truth 2D world for the tool-use task: a planar serial arm anchored at
// the arena centre, a tool segment and a ball moving in straight lines with
// reflection at the arena walls, and a sticky grasp.

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace dhm {

using Vec2 = Eigen::Vector2d;

enum class Condition { static_scene, moving_tool, moving_ball, both };

const char* condition_name(Condition c);
/// Accepts "static", "tool", "ball", "both" (and the long forms).
Condition parse_condition(const std::string& s);

struct EnvConfig {
    double arena = 1300.0;
    Vec2 base{650.0, 650.0};
    std::vector<double> limb_lengths{150.0, 130.0, 120.0, 100.0};
    double tool_length = 150.0;
    double grasp_threshold = 15.0;
    double joint_limit = std::numeric_limits<double>::infinity();  // |θ| bound per joint, rad
    std::vector<double> initial_angles{0.6, 0.5, 0.4, 0.3};
    double spawn_clearance = 100.0;  // minimum distance of spawned objects from the base
    double reach_margin = 50.0;      // objects spawned in reach start this far inside the reachable radius
    bool spawn_moving_in_reach = true; // moving objects also start in reach; otherwise anywhere in the arena
    double visual_noise = 0.0;       // σ of additive Gaussian noise on positions, pixels
    bool align_tool_on_grasp = true; // a held tool extends the last limb; otherwise it keeps its angle at contact

    int dof() const { return static_cast<int>(limb_lengths.size()); }
    double arm_reach() const;
    void validate() const;
};

struct WorldState {
    std::vector<double> joint_angles;
    Vec2 tool_origin = Vec2::Zero();
    Vec2 tool_velocity = Vec2::Zero();
    double tool_angle = 0.0;
    Vec2 ball_pos = Vec2::Zero();
    Vec2 ball_velocity = Vec2::Zero();
    bool grasped = false;
    double grasp_offset = 0.0;  // tool angle relative to the end-effector orientation once held
    int step_count = 0;
};

struct TrialSpec {
    Condition condition = Condition::static_scene;
    double speed = 0.0;  // pixels per step, within [0, 8]
    std::uint64_t seed = 0;
    int max_steps = 3000;

    void validate() const;
};

inline constexpr double kMaxSpeed = 8.0;

struct Observation {
    std::vector<double> proprio;  // joint angles
    std::vector<Vec2> limbs;      // extremity of every link
    Vec2 tool_origin = Vec2::Zero();
    Vec2 tool_tip = Vec2::Zero();
    Vec2 ball = Vec2::Zero();
    Eigen::Vector2d tactile{1.0, 0.0};  // one-hot [ungrasped, grasped]
};

/// Link extremity positions and the end-effector orientation.
struct ArmPose {
    std::vector<Vec2> joints;
    double end_orientation = 0.0;
    Vec2 end_effector() const { return joints.back(); }
};

ArmPose arm_forward_kinematics(const EnvConfig& cfg, const std::vector<double>& angles);
Vec2 tool_tip(const EnvConfig& cfg, const WorldState& w);

/// Advances the world by one step under joint-velocity `action`.
WorldState env_step(const WorldState& world, const Eigen::VectorXd& action, const EnvConfig& cfg);

/// Synthesises observations; noise is drawn from `rng` only when cfg.visual_noise > 0.
Observation observe(const WorldState& world, const EnvConfig& cfg, std::mt19937_64* rng = nullptr);

/// Initial world for a trial. Static objects spawn within reach; moving ones
/// too unless cfg.spawn_moving_in_reach is off, then anywhere in the arena.
WorldState sample_trial(const TrialSpec& spec, const EnvConfig& cfg, std::mt19937_64& rng);

} // namespace dhm
