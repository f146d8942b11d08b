#pragma once

// Deep hybrid model for the tool-use task: four arm IE levels and a virtual
// tool level, each carrying an actual / tool / ball pathway (the virtual level
// only tool and ball), driven by the discrete planner through the hidden
// causes of the end-effector and virtual levels.
//
// The continuous model works in body units: positions are expressed relative
// to the arm base and divided by `length_scale`, angles in radians.

#include "dhm/arm_env.hpp"
#include "dhm/discrete.hpp"
#include "dhm/ie_level.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dhm {

enum class BeliefInit { actual, neutral };

const char* belief_init_name(BeliefInit b);
BeliefInit parse_belief_init(const std::string& s);

/// Optional replacements for the planner's default matrices.
struct PlannerOverrides {
    std::optional<Mat> a_e4;
    std::optional<Mat> a_e5;
    std::optional<Mat> a_t;
    std::optional<Vec> c;
    std::optional<Vec> d;
};

struct AgentConfig {
    double dt = 0.3;
    double pi_proprio = 1.0;
    double pi_visual_arm = 0.02;
    double pi_visual_object = 1.0;
    double pi_extrinsic = 0.5;
    double pi_dynamics = 0.2;            // extrinsic units
    double pi_dynamics_intrinsic = 0.2;  // intrinsic units
    double pi_length_prior = 2.0;        // arm limb lengths are known to the agent
    double pi_virtual_coupling = 1.0;    // ball-pathway virtual joint held to the tool-pathway one
    int replan_period = 10;
    double length_scale = 100.0;         // pixels per body unit
    double action_clamp = 0.05;          // rad per step
    double intention_gain = 0.5;         // f = k·(i(x) − x)
    bool intrinsic_intentions = false;
    bool arm_intentions = false;         // intentions at every arm level, not only the end effector
    double min_length = 0.2;             // body units
    BeliefInit belief_init = BeliefInit::actual;
    PlannerConfig planner;
    PlannerOverrides overrides;

    void validate() const;
};

/// i(x) = M·x over a unit's stacked entity states; the potential dynamics is
/// f(x) = k·(i(x) − x).
struct Intention {
    std::string id;
    Mat target_map;

    PotentialTrajectory trajectory(double gain) const;
};

inline constexpr std::size_t kEndEffectorLevel = 3;
inline constexpr std::size_t kVirtualLevel = 4;
inline constexpr int kNumLevels = 5;

/// Extrinsic intentions of the end-effector level: stay, reach_tool, reach_ball.
std::vector<Intention> end_effector_intentions();
/// Extrinsic intentions of the virtual level: stay, reach_ball.
std::vector<Intention> virtual_intentions();
/// θ-only counterparts used when intrinsic intentions are enabled.
std::vector<Intention> intrinsic_arm_intentions();
std::vector<Intention> intrinsic_virtual_intentions();

class Agent {
public:
    Agent(AgentConfig cfg, EnvConfig body);

    const AgentConfig& config() const { return cfg_; }
    const EnvConfig& body() const { return body_; }
    KinematicHierarchy& hierarchy() { return hierarchy_; }
    const KinematicHierarchy& hierarchy() const { return hierarchy_; }
    DiscreteModel& model() { return model_; }
    const DiscreteModel& model() const { return model_; }

    /// Beliefs start at the arm configuration read from `obs`; the tool and
    /// ball pathways copy it and the virtual link starts at the last limb length.
    void initialize_beliefs(const Observation& obs);

    /// One perception / dynamic inference / dynamic planning / action cycle.
    const Vec& step(const Observation& obs);

    /// ∂y_p/∂a, the identity: actions are joint velocities.
    Mat inverse_proprio_map() const;

    const Vec& action() const { return action_; }
    int step_count() const { return step_; }
    bool replanned_last_step() const { return replanned_; }
    const KinematicHierarchy::SweepResult& last_sweep() const { return last_sweep_; }

    std::vector<LevelObservation> level_observations(const Observation& obs) const;

    Vec2 to_body(const Vec2& world) const { return (world - body_.base) / cfg_.length_scale; }
    Vec2 to_world(const Vec2& body) const { return body * cfg_.length_scale + body_.base; }

    const HybridUnit& end_effector_causes() const { return hierarchy_.level(kEndEffectorLevel).extrinsic(); }
    const HybridUnit& virtual_causes() const { return hierarchy_.level(kVirtualLevel).extrinsic(); }

private:
    void replan(const Vec& tactile);
    void mirror_causes();
    void couple_virtual_joint();

    AgentConfig cfg_;
    EnvConfig body_;
    KinematicHierarchy hierarchy_;
    DiscreteModel model_;
    KinematicHierarchy::SweepResult last_sweep_;
    Vec action_;
    int step_ = 0;
    bool replanned_ = false;
};

/// Assembles the five-level model with its intentions and planner.
Agent build_task_model(const AgentConfig& cfg, const EnvConfig& body);

} // namespace dhm
