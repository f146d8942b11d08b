#pragma once

// High-level categorical model of the tool-use task. Hidden states combine an
// arm position factor {start, at-tool, at-ball} with a grasp flag. The
// continuous hidden causes of the end-effector and virtual levels act as
// observations, alongside a tactile outcome; policies are scored by expected
// free energy against state preferences.

#include "dhm/belief.hpp"

#include <vector>

namespace dhm {

namespace task {

enum Position : int { start = 0, at_tool = 1, at_ball = 2 };
enum Action : int { stay = 0, reach_tool = 1, reach_ball = 2, grasp = 3 };

inline constexpr int kNumPositions = 3;
inline constexpr int kNumStates = 6;
inline constexpr int kNumActions = 4;

/// States are ordered position-fastest: index = position + 3·grasped.
constexpr int state_index(Position p, bool grasped) { return static_cast<int>(p) + kNumPositions * (grasped ? 1 : 0); }
constexpr Position state_position(int s) { return static_cast<Position>(s % kNumPositions); }
constexpr bool state_grasped(int s) { return s >= kNumPositions; }

const char* state_name(int s);
const char* action_name(int a);

} // namespace task

using Policy = std::vector<int>;

struct DiscreteModel {
    Mat a_e4;              // causes of the end-effector level | state
    Mat a_e5;              // causes of the virtual level | state
    Mat a_t;               // tactile outcome | state
    std::vector<Mat> b;    // one column-stochastic transition per action
    Vec c;                 // preferred states
    Vec d;                 // prior / one-step prediction
    Vec s;                 // state posterior
    std::vector<Policy> policies;
    Vec g;                 // expected free energy per policy (last planning call)
    Vec pi;                // policy posterior σ(−G)

    /// Checks column sums, probability vectors and policy actions.
    void validate() const;
};

struct PlannerConfig {
    int policy_length = 4;
    double likelihood_softening = 0.01;  // weight of the uniform mixed into A_e4 / A_e5
    double tactile_reliability = 0.99;
    double goal_preference = 0.9;
};

/// Every action sequence of the given length.
std::vector<Policy> all_policies(int num_actions, int length);

/// Default task model: identity-like cause likelihoods, grasp-gated transitions,
/// preference on (at-ball, grasped), prior on (start, ungrasped).
DiscreteModel make_task_model(const PlannerConfig& cfg = {});

/// G_π = Σ_τ s_{π,τ}·(ln s_{π,τ} − ln C), rolling model.s through each policy.
Vec expected_free_energy(const DiscreteModel& model);

/// s = σ(ln D + ln A_e4ᵀv4 + ln A_e5ᵀv5 + ln A_tᵀo_t); stored in model.s.
const Vec& infer_states(DiscreteModel& model, const Vec& v4, const Vec& v5, const Vec& tactile);

struct CausePriors {
    Vec v4;
    Vec v5;
};

/// Computes G and π = σ(−G), sets D = Σ_π π_π B_{π,0} s, and returns A_e4·D, A_e5·D.
CausePriors plan_and_predict(DiscreteModel& model);

} // namespace dhm
