#include "dhm/ie_level.hpp"

#include <algorithm>
#include <stdexcept>

namespace dhm {

const char* entity_name(Entity e) {
    switch (e) {
    case Entity::actual: return "actual";
    case Entity::tool: return "tool";
    case Entity::ball: return "ball";
    }
    return "?";
}

IELevel::IELevel(LevelTopology topology, HybridUnit intrinsic, HybridUnit extrinsic, LevelPrecisions precisions,
                 double min_length)
    : topology_(std::move(topology)),
      intrinsic_(std::move(intrinsic)),
      extrinsic_(std::move(extrinsic)),
      precisions_(std::move(precisions)),
      min_length_(min_length) {
    const auto e = static_cast<Eigen::Index>(topology_.entities.size());
    if (e == 0) throw std::invalid_argument("IELevel: a level needs at least one entity");
    if (intrinsic_.dim() != kIntrinsicDim * e || extrinsic_.dim() != kExtrinsicDim * e)
        throw DimensionError("IELevel: unit dimensions do not match the entity count");
    if (precisions_.visual.size() == 0) precisions_.visual = Vec::Zero(e);
    if (precisions_.joint_prior.size() == 0) precisions_.joint_prior = Vec::Zero(kIntrinsicDim * e);
    if (precisions_.joint_targets.size() == 0) precisions_.joint_targets = Vec::Zero(kIntrinsicDim * e);
    if (precisions_.visual.size() != e || precisions_.joint_prior.size() != kIntrinsicDim * e ||
        precisions_.joint_targets.size() != kIntrinsicDim * e)
        throw DimensionError("IELevel: per-entity precision vectors have the wrong size");
    if ((precisions_.visual.array() < 0.0).any() || (precisions_.joint_prior.array() < 0.0).any())
        throw std::invalid_argument("IELevel: precisions must be nonnegative");
}

int IELevel::slot(Entity e) const {
    const auto it = std::find(topology_.entities.begin(), topology_.entities.end(), e);
    return it == topology_.entities.end() ? -1 : static_cast<int>(it - topology_.entities.begin());
}

Joint IELevel::joint(int k) const { return intrinsic_.belief().mu.segment<kIntrinsicDim>(kIntrinsicDim * k); }

Pose IELevel::pose(int k) const { return extrinsic_.belief().mu.segment<kExtrinsicDim>(kExtrinsicDim * k); }

Vec IELevel::extrinsic_likelihood(const Vec& parent_poses) const {
    const int n = num_entities();
    if (parent_poses.size() != kExtrinsicDim * n) throw DimensionError("extrinsic_likelihood: parent pose size");
    Vec out(kExtrinsicDim * n);
    for (int k = 0; k < n; ++k)
        out.segment<kExtrinsicDim>(kExtrinsicDim * k) =
            roto_translate(joint(k), parent_poses.segment<kExtrinsicDim>(kExtrinsicDim * k));
    return out;
}

double IELevel::proprio_likelihood() const {
    const int a = slot(Entity::actual);
    if (a < 0) throw std::logic_error("proprio_likelihood: level has no actual entity");
    return intrinsic_.belief().mu[kIntrinsicDim * a];
}

Eigen::Matrix2Xd IELevel::visual_likelihood() const {
    const int n = num_entities();
    Eigen::Matrix2Xd out(2, n);
    for (int k = 0; k < n; ++k) out.col(k) = pose(k).head<2>();
    return out;
}

PredictionError IELevel::visual_error(const LevelObservation& obs) const {
    const int n = num_entities();
    Vec predicted = visual_likelihood().reshaped();
    Vec prec(2 * n);
    for (int k = 0; k < n; ++k) prec.segment<2>(2 * k).setConstant(precisions_.visual[k]);
    if (obs.visual.size() == 0) return {Vec::Zero(2 * n), Precision(prec)};
    return weighted_error(obs.visual, predicted, Precision(prec));
}

IntrinsicResult IELevel::update_intrinsic(const LevelObservation& obs, const Vec& parent_poses,
                                          const std::vector<int>& parent_slots, int parent_entities, double dt) {
    const int n = num_entities();
    const double pi_e = precisions_.extrinsic;

    IntrinsicResult r;
    r.extrinsic = {extrinsic_.belief().mu - extrinsic_likelihood(parent_poses),
                   Precision::scalar(pi_e, kExtrinsicDim * n)};
    r.parent_force = Vec::Zero(kExtrinsicDim * parent_entities);

    const auto& b = intrinsic_.belief();
    Vec dmu = b.mu_prime + intrinsic_.backward_dynamics_force();
    const Vec weighted_e = r.extrinsic.weighted();

    for (int k = 0; k < n; ++k) {
        const Joint j = joint(k);
        const Pose parent = parent_poses.segment<kExtrinsicDim>(kExtrinsicDim * k);
        const auto jj = roto_translate_joint_jacobian(j, parent);
        const Eigen::Vector3d we = weighted_e.segment<kExtrinsicDim>(kExtrinsicDim * k);
        dmu.segment<kIntrinsicDim>(kIntrinsicDim * k) += jj.transpose() * we;

        if (!parent_slots.empty() && parent_slots[k] >= 0) {
            const auto jp = roto_translate_parent_jacobian(j, parent);
            const int ps = parent_slots[k];
            r.parent_force.segment<kExtrinsicDim>(kExtrinsicDim * ps) += jp.transpose() * we;
        }
    }
    dmu -= precisions_.joint_prior.cwiseProduct(intrinsic_.belief().mu - precisions_.joint_targets);

    if (has_proprio()) {
        const int a = slot(Entity::actual);
        r.proprio = {Vec::Constant(1, obs.proprio - proprio_likelihood()), Precision::scalar(precisions_.proprio, 1)};
        dmu[kIntrinsicDim * a] += r.proprio.weighted()[0];
    } else {
        r.proprio = {Vec(0), Precision(Vec(0))};
    }

    // No observation acts on the first-order belief, so its posterior precision is Π_x.
    intrinsic_.accumulate(intrinsic_.dynamics_precision(), dt);
    const Vec dmu_prime = -intrinsic_.dynamics_error().weighted();
    intrinsic_.integrate(dmu, dmu_prime, dt);

    auto& mu = intrinsic_.belief().mu;
    for (int k = 0; k < n; ++k) mu[kIntrinsicDim * k + 1] = std::max(mu[kIntrinsicDim * k + 1], min_length_);
    return r;
}

ExtrinsicForces IELevel::update_extrinsic(const LevelObservation& obs, const IntrinsicResult& own,
                                          std::span<const IntrinsicResult* const> children, double dt) {
    const int n = num_entities();
    const auto dim = kExtrinsicDim * n;

    ExtrinsicForces f;
    f.velocity = extrinsic_.belief().mu_prime;
    f.own_error = -own.extrinsic.weighted();
    f.child_errors = Vec::Zero(dim);
    for (const IntrinsicResult* c : children) f.child_errors += c->parent_force;

    const PredictionError ev = visual_error(obs);
    const Vec wv = ev.weighted();
    f.visual = Vec::Zero(dim);
    for (int k = 0; k < n; ++k) f.visual.segment<2>(kExtrinsicDim * k) = wv.segment<2>(2 * k);
    f.dynamics = extrinsic_.backward_dynamics_force();

    extrinsic_.accumulate(extrinsic_.dynamics_precision(), dt);
    const Vec dmu_prime = -extrinsic_.dynamics_error().weighted();
    extrinsic_.integrate(f.total(), dmu_prime, dt);
    return f;
}

KinematicHierarchy::KinematicHierarchy(Pose root, std::vector<IELevel> levels)
    : root_(std::move(root)), levels_(std::move(levels)) {
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        const int p = levels_[i].topology().parent;
        if (p >= static_cast<int>(i)) throw std::invalid_argument("KinematicHierarchy: parents must precede children");
        if (p >= 0) {
            for (Entity e : levels_[i].topology().entities)
                if (levels_[static_cast<std::size_t>(p)].slot(e) < 0)
                    throw std::invalid_argument("KinematicHierarchy: entity missing from parent level");
        }
    }
    // Children lists are derived from the parent links.
    for (auto& l : levels_) l.topology().children.clear();
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        const int p = levels_[i].topology().parent;
        if (p >= 0) levels_[static_cast<std::size_t>(p)].topology().children.push_back(static_cast<int>(i));
    }
}

Vec KinematicHierarchy::parent_poses(std::size_t i) const {
    const auto& l = levels_[i];
    const int n = l.num_entities();
    Vec out(kExtrinsicDim * n);
    const int p = l.topology().parent;
    for (int k = 0; k < n; ++k) {
        out.segment<kExtrinsicDim>(kExtrinsicDim * k) =
            p < 0 ? root_ : levels_[static_cast<std::size_t>(p)].pose(levels_[static_cast<std::size_t>(p)].slot(l.topology().entities[static_cast<std::size_t>(k)]));
    }
    return out;
}

std::vector<int> KinematicHierarchy::parent_slots(std::size_t i) const {
    const auto& l = levels_[i];
    const int p = l.topology().parent;
    if (p < 0) return {};
    std::vector<int> out;
    for (Entity e : l.topology().entities) out.push_back(levels_[static_cast<std::size_t>(p)].slot(e));
    return out;
}

KinematicHierarchy::SweepResult KinematicHierarchy::sweep(std::span<const LevelObservation> obs, double dt) {
    if (obs.size() != levels_.size()) throw DimensionError("sweep: one observation per level required");
    SweepResult r;
    r.intrinsic.reserve(levels_.size());
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        const int p = levels_[i].topology().parent;
        const int pe = p < 0 ? 0 : levels_[static_cast<std::size_t>(p)].num_entities();
        r.intrinsic.push_back(levels_[i].update_intrinsic(obs[i], parent_poses(i), parent_slots(i), pe, dt));
    }
    r.extrinsic.reserve(levels_.size());
    std::vector<const IntrinsicResult*> children;
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        children.clear();
        for (int c : levels_[i].topology().children) children.push_back(&r.intrinsic[static_cast<std::size_t>(c)]);
        r.extrinsic.push_back(levels_[i].update_extrinsic(obs[i], r.intrinsic[i], children, dt));
    }
    return r;
}

std::vector<Vec> KinematicHierarchy::predicted_extrinsics() const {
    std::vector<Vec> out(levels_.size());
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        const auto& l = levels_[i];
        const int p = l.topology().parent;
        Vec parents(kExtrinsicDim * l.num_entities());
        for (int k = 0; k < l.num_entities(); ++k) {
            parents.segment<kExtrinsicDim>(kExtrinsicDim * k) =
                p < 0 ? Vec(root_)
                      : Vec(out[static_cast<std::size_t>(p)].segment<kExtrinsicDim>(
                            kExtrinsicDim * levels_[static_cast<std::size_t>(p)].slot(l.topology().entities[static_cast<std::size_t>(k)])));
        }
        out[i] = l.extrinsic_likelihood(parents);
    }
    return out;
}

} // namespace dhm
