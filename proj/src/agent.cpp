#include "dhm/agent.hpp"

#include <algorithm>
#include <stdexcept>

namespace dhm {

namespace {

constexpr int kActual = 0;
constexpr int kTool = 1;
constexpr int kBall = 2;

// Entity k of the intentional state takes the pose of entity src[k]. With
// position_only it keeps its own orientation.
Mat pose_map(const std::vector<int>& src, bool position_only) {
    const auto n = static_cast<Eigen::Index>(src.size()) * kExtrinsicDim;
    const Eigen::Index b = position_only ? 2 : kExtrinsicDim;
    Mat m = Mat::Identity(n, n);
    for (std::size_t k = 0; k < src.size(); ++k) {
        const auto row = static_cast<Eigen::Index>(k) * kExtrinsicDim;
        m.block(row, row, b, b).setZero();
        m.block(row, src[k] * kExtrinsicDim, b, b).setIdentity();
    }
    return m;
}

// As pose_map, but only the joint angle is redirected; lengths keep their own value.
Mat angle_map(const std::vector<int>& src) {
    const auto n = static_cast<Eigen::Index>(src.size()) * kIntrinsicDim;
    Mat m = Mat::Identity(n, n);
    for (std::size_t k = 0; k < src.size(); ++k) {
        const auto row = static_cast<Eigen::Index>(k) * kIntrinsicDim;
        m(row, row) = 0.0;
        m(row, src[k] * kIntrinsicDim) = 1.0;
    }
    return m;
}

std::vector<PotentialTrajectory> stay_trajectories(const std::vector<Intention>& like, Eigen::Index dim) {
    std::vector<PotentialTrajectory> out;
    for (const auto& i : like) out.push_back(PotentialTrajectory::stay(i.id, dim));
    return out;
}

std::vector<PotentialTrajectory> to_trajectories(const std::vector<Intention>& intentions, double gain) {
    std::vector<PotentialTrajectory> out;
    for (const auto& i : intentions) out.push_back(i.trajectory(gain));
    return out;
}

void check_nonneg(double v, const char* what) {
    if (!(v >= 0.0)) throw std::invalid_argument(std::string("agent: ") + what + " must be >= 0");
}

} // namespace

const char* belief_init_name(BeliefInit b) { return b == BeliefInit::actual ? "actual" : "neutral"; }

BeliefInit parse_belief_init(const std::string& s) {
    if (s == "actual") return BeliefInit::actual;
    if (s == "neutral") return BeliefInit::neutral;
    throw std::invalid_argument("unknown belief_init '" + s + "' (expected actual|neutral)");
}

void AgentConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("agent: dt must be positive");
    check_nonneg(pi_proprio, "pi_proprio");
    check_nonneg(pi_visual_arm, "pi_visual_arm");
    check_nonneg(pi_visual_object, "pi_visual_object");
    check_nonneg(pi_extrinsic, "pi_extrinsic");
    check_nonneg(pi_dynamics, "pi_dynamics");
    check_nonneg(pi_dynamics_intrinsic, "pi_dynamics_intrinsic");
    check_nonneg(pi_length_prior, "pi_length_prior");
    check_nonneg(pi_virtual_coupling, "pi_virtual_coupling");
    check_nonneg(intention_gain, "intention_gain");
    if (replan_period < 1) throw std::invalid_argument("agent: replan_period must be >= 1");
    if (!(length_scale > 0.0)) throw std::invalid_argument("agent: length_scale must be positive");
    if (!(action_clamp > 0.0)) throw std::invalid_argument("agent: action_clamp must be positive");
    if (!(min_length > 0.0)) throw std::invalid_argument("agent: min_length must be positive");
    if (planner.policy_length < 1) throw std::invalid_argument("agent: policy_length must be >= 1");
    if (!(planner.likelihood_softening >= 0.0 && planner.likelihood_softening <= 1.0))
        throw std::invalid_argument("agent: likelihood_softening must lie in [0, 1]");
    if (!(planner.tactile_reliability >= 0.0 && planner.tactile_reliability <= 1.0))
        throw std::invalid_argument("agent: tactile_reliability must lie in [0, 1]");
    if (!(planner.goal_preference > 0.0 && planner.goal_preference < 1.0))
        throw std::invalid_argument("agent: goal_preference must lie in (0, 1)");
}

PotentialTrajectory Intention::trajectory(double gain) const {
    const auto n = target_map.rows();
    return PotentialTrajectory::linear(id, gain * (target_map - Mat::Identity(n, n)));
}

std::vector<Intention> end_effector_intentions() {
    return {{"stay", pose_map({kActual, kTool, kBall}, false)},
            {"reach_tool", pose_map({kTool, kTool, kBall}, true)},
            {"reach_ball", pose_map({kBall, kBall, kBall}, false)}};
}

std::vector<Intention> virtual_intentions() {
    // Virtual level slots: 0 = tool, 1 = ball.
    return {{"stay", pose_map({0, 1}, false)}, {"reach_ball", pose_map({1, 1}, false)}};
}

std::vector<Intention> intrinsic_arm_intentions() {
    return {{"stay", angle_map({kActual, kTool, kBall})},
            {"reach_tool", angle_map({kTool, kTool, kBall})},
            {"reach_ball", angle_map({kBall, kBall, kBall})}};
}

std::vector<Intention> intrinsic_virtual_intentions() {
    return {{"stay", angle_map({0, 1})}, {"reach_ball", angle_map({1, 1})}};
}

Agent::Agent(AgentConfig cfg, EnvConfig body) : cfg_(std::move(cfg)), body_(std::move(body)) {
    cfg_.validate();
    body_.validate();
    if (body_.dof() != 4) throw std::invalid_argument("agent: the task model expects a 4-DoF arm");

    model_ = make_task_model(cfg_.planner);
    const auto& o = cfg_.overrides;
    if (o.a_e4) model_.a_e4 = *o.a_e4;
    if (o.a_e5) model_.a_e5 = *o.a_e5;
    if (o.a_t) model_.a_t = *o.a_t;
    if (o.c) model_.c = *o.c;
    if (o.d) model_.d = *o.d;
    model_.s = model_.d;
    model_.validate();
    if (model_.a_e4.rows() != 3 || model_.a_e5.rows() != 2 || model_.a_t.rows() != 2)
        throw DimensionError("agent: planner matrices do not match the task's cause and tactile sizes");

    const auto ee = end_effector_intentions();
    const auto virt = virtual_intentions();
    const auto ee_i = intrinsic_arm_intentions();
    const auto virt_i = intrinsic_virtual_intentions();
    const double k = cfg_.intention_gain;

    std::vector<IELevel> levels;
    for (int i = 0; i < kNumLevels; ++i) {
        const bool is_virtual = i == static_cast<int>(kVirtualLevel);
        LevelTopology topo;
        topo.index = i + 1;
        topo.parent = i - 1;
        topo.entities = is_virtual ? std::vector<Entity>{Entity::tool, Entity::ball}
                                   : std::vector<Entity>{Entity::actual, Entity::tool, Entity::ball};
        const auto e = static_cast<Eigen::Index>(topo.entities.size());
        const std::string label = "L" + std::to_string(i + 1);

        LevelPrecisions prec;
        prec.extrinsic = cfg_.pi_extrinsic;
        prec.joint_prior = Vec::Zero(kIntrinsicDim * e);
        prec.joint_targets = Vec::Zero(kIntrinsicDim * e);
        if (is_virtual) {
            prec.visual = Vec::Constant(e, cfg_.pi_visual_object);
            prec.joint_prior.segment<kIntrinsicDim>(kIntrinsicDim).setConstant(cfg_.pi_virtual_coupling);
        } else {
            prec.proprio = cfg_.pi_proprio;
            prec.visual = Vec::Zero(e);
            prec.visual[kActual] = cfg_.pi_visual_arm;
            if (i == static_cast<int>(kEndEffectorLevel)) prec.visual[kTool] = cfg_.pi_visual_object;
            const double len = body_.limb_lengths[static_cast<std::size_t>(i)] / cfg_.length_scale;
            for (Eigen::Index s = 0; s < e; ++s) {
                prec.joint_prior[kIntrinsicDim * s + 1] = cfg_.pi_length_prior;
                prec.joint_targets[kIntrinsicDim * s + 1] = len;
            }
        }

        const auto& ext_set = is_virtual ? virt : ee;
        const auto& int_set = is_virtual ? virt_i : ee_i;
        const Eigen::Index di = kIntrinsicDim * e;
        const Eigen::Index de = kExtrinsicDim * e;
        const bool drives_ext = is_virtual || i == static_cast<int>(kEndEffectorLevel) || cfg_.arm_intentions;

        HybridUnit intrinsic(label + ".intrinsic", GeneralizedBelief(di),
                             cfg_.intrinsic_intentions ? to_trajectories(int_set, k) : stay_trajectories(int_set, di),
                             Precision::scalar(cfg_.pi_dynamics_intrinsic, di));
        HybridUnit extrinsic(label + ".extrinsic", GeneralizedBelief(de),
                             drives_ext ? to_trajectories(ext_set, k) : stay_trajectories(ext_set, de),
                             Precision::scalar(cfg_.pi_dynamics, de));
        levels.emplace_back(std::move(topo), std::move(intrinsic), std::move(extrinsic), std::move(prec),
                            cfg_.min_length);
    }
    hierarchy_ = KinematicHierarchy(Pose::Zero(), std::move(levels));

    action_ = Vec::Zero(body_.dof());
    const Vec v4 = model_.a_e4 * model_.d;
    const Vec v5 = model_.a_e5 * model_.d;
    for (std::size_t i = 0; i < hierarchy_.size(); ++i) {
        const Vec& v = i == kVirtualLevel ? v5 : v4;
        hierarchy_.level(i).intrinsic().set_prior(v);
        hierarchy_.level(i).extrinsic().set_prior(v);
    }
}

Agent build_task_model(const AgentConfig& cfg, const EnvConfig& body) { return Agent(cfg, body); }

void Agent::initialize_beliefs(const Observation& obs) {
    if (static_cast<int>(obs.proprio.size()) != body_.dof())
        throw DimensionError("initialize_beliefs: proprioceptive observation has the wrong size");
    for (std::size_t i = 0; i < kEndEffectorLevel + 1; ++i) {
        const double theta = cfg_.belief_init == BeliefInit::actual ? obs.proprio[i] : 0.0;
        const double len = body_.limb_lengths[i] / cfg_.length_scale;
        auto& b = hierarchy_.level(i).intrinsic().belief();
        for (int s = 0; s < 3; ++s) b.mu.segment<kIntrinsicDim>(kIntrinsicDim * s) = Joint(theta, len);
        b.mu_prime.setZero();
    }
    auto& v = hierarchy_.level(kVirtualLevel).intrinsic().belief();
    const double last = body_.limb_lengths.back() / cfg_.length_scale;
    for (int s = 0; s < 2; ++s) v.mu.segment<kIntrinsicDim>(kIntrinsicDim * s) = Joint(0.0, last);
    v.mu_prime.setZero();

    const auto ext = hierarchy_.predicted_extrinsics();
    for (std::size_t i = 0; i < hierarchy_.size(); ++i) {
        auto& b = hierarchy_.level(i).extrinsic().belief();
        b.mu = ext[i];
        b.mu_prime.setZero();
    }
    action_.setZero();
    step_ = 0;
}

std::vector<LevelObservation> Agent::level_observations(const Observation& obs) const {
    if (static_cast<int>(obs.proprio.size()) != body_.dof() || static_cast<int>(obs.limbs.size()) != body_.dof())
        throw DimensionError("agent: observation does not match the arm");
    std::vector<LevelObservation> out(hierarchy_.size());
    for (std::size_t i = 0; i <= kEndEffectorLevel; ++i) {
        out[i].proprio = obs.proprio[i];
        out[i].visual = Vec::Zero(2 * 3);
        out[i].visual.segment<2>(2 * kActual) = to_body(obs.limbs[i]);
        if (i == kEndEffectorLevel) out[i].visual.segment<2>(2 * kTool) = to_body(obs.tool_origin);
    }
    out[kVirtualLevel].visual = Vec(4);
    out[kVirtualLevel].visual << to_body(obs.tool_tip), to_body(obs.ball);
    return out;
}

Mat Agent::inverse_proprio_map() const { return Mat::Identity(body_.dof(), body_.dof()); }

void Agent::replan(const Vec& tactile) {
    infer_states(model_, end_effector_causes().causes().posterior, virtual_causes().causes().posterior, tactile);
    const CausePriors p = plan_and_predict(model_);
    for (std::size_t i = 0; i < hierarchy_.size(); ++i) {
        const Vec& v = i == kVirtualLevel ? p.v5 : p.v4;
        hierarchy_.level(i).intrinsic().set_prior(v);
        hierarchy_.level(i).extrinsic().set_prior(v);
    }
}

void Agent::mirror_causes() {
    const Vec v4 = end_effector_causes().causes().posterior;
    const Vec v5 = virtual_causes().causes().posterior;
    for (std::size_t i = 0; i < hierarchy_.size(); ++i) {
        const bool virt = i == kVirtualLevel;
        hierarchy_.level(i).intrinsic().causes().posterior = virt ? v5 : v4;
        if (i != kEndEffectorLevel && !virt) hierarchy_.level(i).extrinsic().causes().posterior = v4;
    }
}

void Agent::couple_virtual_joint() {
    auto& virt = hierarchy_.level(kVirtualLevel);
    virt.precisions().joint_targets.segment<kIntrinsicDim>(kIntrinsicDim) = virt.joint(0);
}

const Vec& Agent::step(const Observation& obs) {
    if (obs.tactile.size() != model_.a_t.rows()) throw DimensionError("agent: tactile observation has the wrong size");
    const auto lobs = level_observations(obs);

    replanned_ = step_ % cfg_.replan_period == 0;
    if (replanned_) replan(obs.tactile);

    couple_virtual_joint();
    last_sweep_ = hierarchy_.sweep(lobs, cfg_.dt);
    hierarchy_.level(kEndEffectorLevel).extrinsic().refresh_posterior();
    hierarchy_.level(kVirtualLevel).extrinsic().refresh_posterior();
    mirror_causes();

    // ȧ = −∂_a y_pᵀ Π_p ε_p with ∂_a y_p = I.
    for (Eigen::Index j = 0; j < action_.size(); ++j) {
        const auto& r = last_sweep_.intrinsic[static_cast<std::size_t>(j)];
        if (r.proprio.value.size() == 0) continue;
        action_[j] -= cfg_.dt * r.proprio.weighted()[0];
        action_[j] = std::clamp(action_[j], -cfg_.action_clamp, cfg_.action_clamp);
    }
    ++step_;
    return action_;
}

} // namespace dhm
