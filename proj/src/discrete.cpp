#include "dhm/discrete.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dhm {

namespace task {

const char* state_name(int s) {
    static const char* names[kNumStates] = {"start",         "at_tool",         "at_ball",
                                            "start_grasped", "at_tool_grasped", "at_ball_grasped"};
    return (s >= 0 && s < kNumStates) ? names[s] : "?";
}

const char* action_name(int a) {
    static const char* names[kNumActions] = {"stay", "reach_tool", "reach_ball", "grasp"};
    return (a >= 0 && a < kNumActions) ? names[a] : "?";
}

} // namespace task

namespace {

constexpr double kTol = 1e-10;

void check_columns(const Mat& m, const std::string& what) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        if ((m.col(j).array() < 0.0).any()) throw std::invalid_argument(what + ": negative entry");
        if (std::abs(m.col(j).sum() - 1.0) > kTol) throw std::invalid_argument(what + ": column does not sum to 1");
    }
}

void check_probability(const Vec& v, const std::string& what) {
    if ((v.array() < 0.0).any() || std::abs(v.sum() - 1.0) > kTol)
        throw std::invalid_argument(what + ": not a probability vector");
}

Mat soften(const Mat& m, double w) {
    return (1.0 - w) * m + Mat::Constant(m.rows(), m.cols(), w / static_cast<double>(m.rows()));
}

} // namespace

void DiscreteModel::validate() const {
    const auto n = s.size();
    if (a_e4.cols() != n || a_e5.cols() != n || a_t.cols() != n || c.size() != n || d.size() != n)
        throw DimensionError("DiscreteModel: inconsistent state dimension");
    check_columns(a_e4, "A_e4");
    check_columns(a_e5, "A_e5");
    check_columns(a_t, "A_t");
    if (b.empty()) throw std::invalid_argument("DiscreteModel: no transition matrices");
    for (std::size_t k = 0; k < b.size(); ++k) {
        if (b[k].rows() != n || b[k].cols() != n) throw DimensionError("DiscreteModel: B has wrong shape");
        check_columns(b[k], "B[" + std::to_string(k) + "]");
    }
    check_probability(s, "s");
    check_probability(d, "D");
    if ((c.array() < 0.0).any()) throw std::invalid_argument("C: negative entry");
    for (const auto& p : policies) {
        if (p.empty()) throw std::invalid_argument("DiscreteModel: empty policy");
        for (int a : p)
            if (a < 0 || a >= static_cast<int>(b.size())) throw std::invalid_argument("DiscreteModel: unknown action");
    }
}

std::vector<Policy> all_policies(int num_actions, int length) {
    if (num_actions <= 0 || length <= 0) throw std::invalid_argument("all_policies: nonpositive size");
    std::vector<Policy> out;
    Policy p(static_cast<std::size_t>(length), 0);
    while (true) {
        out.push_back(p);
        int i = length - 1;
        while (i >= 0 && ++p[static_cast<std::size_t>(i)] == num_actions) p[static_cast<std::size_t>(i--)] = 0;
        if (i < 0) break;
    }
    return out;
}

DiscreteModel make_task_model(const PlannerConfig& cfg) {
    using namespace task;
    DiscreteModel m;

    Mat a4 = Mat::Zero(3, kNumStates);
    Mat a5 = Mat::Zero(2, kNumStates);
    Mat at = Mat::Zero(2, kNumStates);
    for (int s = 0; s < kNumStates; ++s) {
        a4(state_position(s), s) = 1.0;
        a5(state_position(s) == at_ball ? 1 : 0, s) = 1.0;
        at(state_grasped(s) ? 1 : 0, s) = cfg.tactile_reliability;
        at(state_grasped(s) ? 0 : 1, s) = 1.0 - cfg.tactile_reliability;
    }
    m.a_e4 = soften(a4, cfg.likelihood_softening);
    m.a_e5 = soften(a5, cfg.likelihood_softening);
    m.a_t = at;

    m.b.assign(kNumActions, Mat::Zero(kNumStates, kNumStates));
    for (int s = 0; s < kNumStates; ++s) {
        const Position p = state_position(s);
        const bool g = state_grasped(s);
        m.b[stay](s, s) = 1.0;
        m.b[reach_tool](state_index(at_tool, g), s) = 1.0;
        // The ball can only be reached once the tool is held.
        m.b[reach_ball](g ? state_index(at_ball, true) : s, s) = 1.0;
        m.b[grasp](p == at_tool ? state_index(at_tool, true) : s, s) = 1.0;
    }

    const double rest = (1.0 - cfg.goal_preference) / static_cast<double>(kNumStates - 1);
    m.c = Vec::Constant(kNumStates, rest);
    m.c[state_index(at_ball, true)] = cfg.goal_preference;

    m.d = Vec::Zero(kNumStates);
    m.d[state_index(start, false)] = 1.0;
    m.s = m.d;
    m.policies = all_policies(kNumActions, cfg.policy_length);
    m.g = Vec::Zero(static_cast<Eigen::Index>(m.policies.size()));
    m.pi = Vec::Constant(m.g.size(), 1.0 / static_cast<double>(m.g.size()));
    m.validate();
    return m;
}

Vec expected_free_energy(const DiscreteModel& model) {
    const Vec log_c = log_floored(model.c);
    Vec g = Vec::Zero(static_cast<Eigen::Index>(model.policies.size()));
    for (std::size_t k = 0; k < model.policies.size(); ++k) {
        Vec s = model.s;
        for (int a : model.policies[k]) {
            s = model.b[static_cast<std::size_t>(a)] * s;
            g[static_cast<Eigen::Index>(k)] += s.dot(log_floored(s) - log_c);
        }
    }
    return g;
}

const Vec& infer_states(DiscreteModel& model, const Vec& v4, const Vec& v5, const Vec& tactile) {
    if (v4.size() != model.a_e4.rows() || v5.size() != model.a_e5.rows() || tactile.size() != model.a_t.rows())
        throw DimensionError("infer_states: message size mismatch");
    const Vec logits = log_floored(model.d) + log_floored(model.a_e4.transpose() * v4) +
                       log_floored(model.a_e5.transpose() * v5) + log_floored(model.a_t.transpose() * tactile);
    model.s = softmax(logits);
    return model.s;
}

CausePriors plan_and_predict(DiscreteModel& model) {
    model.g = expected_free_energy(model);
    model.pi = softmax(-model.g);
    Vec d = Vec::Zero(model.s.size());
    for (std::size_t k = 0; k < model.policies.size(); ++k)
        d += model.pi[static_cast<Eigen::Index>(k)] * (model.b[static_cast<std::size_t>(model.policies[k].front())] * model.s);
    model.d = d;
    return {model.a_e4 * d, model.a_e5 * d};
}

} // namespace dhm
