#pragma once

// Intrinsic-Extrinsic kinematic levels. Each level pairs an intrinsic unit
// ([θ, l] per entity) with an extrinsic unit ([p_x, p_y, φ] per entity). Levels
// are chained by roto-translation likelihoods, one independent pathway per
// entity, and updated with a synchronous sweep: every prediction error is
// computed from the previous step's beliefs before any belief moves.

#include "dhm/belief.hpp"
#include "dhm/hybrid_unit.hpp"
#include "dhm/kinematics.hpp"

#include <span>
#include <string>
#include <vector>

namespace dhm {

enum class Entity : int { actual = 0, tool = 1, ball = 2 };

const char* entity_name(Entity e);

inline constexpr int kIntrinsicDim = 2;
inline constexpr int kExtrinsicDim = 3;

struct LevelTopology {
    int index = 0;             // 1-based level number, used for labels
    int parent = -1;           // position of the parent level in the hierarchy; -1 = fixed root
    std::vector<int> children; // positions of child levels
    std::vector<Entity> entities;
};

struct LevelPrecisions {
    double proprio = 0.0;      // on θ of the actual entity; 0 disables the proprioceptive pathway
    Vec visual;                // one entry per entity; 0 = entity not observed at this level
    double extrinsic = 1.0;    // Π_e of this level's kinematic-consistency error
    Vec joint_prior;           // 2 per entity, precision pulling [θ, l] toward `joint_targets`
    Vec joint_targets;         // 2 per entity
};

struct LevelObservation {
    double proprio = 0.0;      // observed θ of the actual entity
    Vec visual;                // 2 per entity, entity-major [x, y, x, y, ...]
};

/// Output of the intrinsic half of a level update; everything the extrinsic
/// half of this level and of its parent needs.
struct IntrinsicResult {
    PredictionError proprio;   // size 1 if the level has a proprioceptive pathway, else 0
    PredictionError extrinsic; // ε_e = μ_e − g_e(μ_i, μ_e^parent), size 3E
    Vec parent_force;          // ∂g_e/∂parentᵀ Π_e ε_e in the parent's entity layout
};

/// The five terms that move a 0th-order extrinsic belief.
struct ExtrinsicForces {
    Vec velocity;     // μ_e'
    Vec own_error;    // −Π_e ε_e
    Vec child_errors; // Σ children ∂g_eᵀ Π_e ε_e^(child)
    Vec visual;       // ∂g_vᵀ Π_v ε_v
    Vec dynamics;     // ∂η'ᵀ Π_x ε_x

    Vec total() const { return velocity + own_error + child_errors + visual + dynamics; }
};

class IELevel {
public:
    IELevel(LevelTopology topology, HybridUnit intrinsic, HybridUnit extrinsic, LevelPrecisions precisions,
            double min_length);

    const LevelTopology& topology() const { return topology_; }
    LevelTopology& topology() { return topology_; }
    int num_entities() const { return static_cast<int>(topology_.entities.size()); }
    /// Slot of `e` in this level, or -1.
    int slot(Entity e) const;
    bool has_proprio() const { return precisions_.proprio > 0.0 && slot(Entity::actual) >= 0; }

    HybridUnit& intrinsic() { return intrinsic_; }
    const HybridUnit& intrinsic() const { return intrinsic_; }
    HybridUnit& extrinsic() { return extrinsic_; }
    const HybridUnit& extrinsic() const { return extrinsic_; }
    const LevelPrecisions& precisions() const { return precisions_; }
    LevelPrecisions& precisions() { return precisions_; }

    Joint joint(int slot) const;
    Pose pose(int slot) const;

    /// g_e: roto-translation per entity; `parent_poses` holds one pose per entity of this level.
    Vec extrinsic_likelihood(const Vec& parent_poses) const;
    /// g_p: θ of the actual entity.
    double proprio_likelihood() const;
    /// g_v: 2×E matrix of entity positions.
    Eigen::Matrix2Xd visual_likelihood() const;

    /// Errors, evidence and integration of the intrinsic unit.
    IntrinsicResult update_intrinsic(const LevelObservation& obs, const Vec& parent_poses,
                                     const std::vector<int>& parent_slots, int parent_entities, double dt);

    /// Evidence and integration of the extrinsic unit. `own` is this level's
    /// intrinsic result; `children` those of its child levels.
    ExtrinsicForces update_extrinsic(const LevelObservation& obs, const IntrinsicResult& own,
                                     std::span<const IntrinsicResult* const> children, double dt);

    /// Visual prediction error, precision-gated per entity.
    PredictionError visual_error(const LevelObservation& obs) const;

private:
    LevelTopology topology_;
    HybridUnit intrinsic_;
    HybridUnit extrinsic_;
    LevelPrecisions precisions_;
    double min_length_;
};

/// Tree of IE levels under a fixed root pose.
class KinematicHierarchy {
public:
    KinematicHierarchy() = default;
    KinematicHierarchy(Pose root, std::vector<IELevel> levels);

    const Pose& root() const { return root_; }
    std::size_t size() const { return levels_.size(); }
    IELevel& level(std::size_t i) { return levels_[i]; }
    const IELevel& level(std::size_t i) const { return levels_[i]; }

    /// Parent poses aligned with level i's entities (the root for top levels).
    Vec parent_poses(std::size_t i) const;
    /// For each entity of level i, its slot in the parent level.
    std::vector<int> parent_slots(std::size_t i) const;

    struct SweepResult {
        std::vector<IntrinsicResult> intrinsic;
        std::vector<ExtrinsicForces> extrinsic;
    };

    /// One synchronous continuous step over every level.
    SweepResult sweep(std::span<const LevelObservation> obs, double dt);

    /// Composition of extrinsic likelihoods from the root using the current
    /// intrinsic beliefs, per level and entity slot.
    std::vector<Vec> predicted_extrinsics() const;

private:
    Pose root_ = Pose::Zero();
    std::vector<IELevel> levels_;
};

} // namespace dhm
