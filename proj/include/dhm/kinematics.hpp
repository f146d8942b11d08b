#pragma once

// Planar roto-translation between an intrinsic joint state [θ, l] and an
// extrinsic pose [p_x, p_y, φ], with its analytic Jacobians.

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace dhm {

using Joint = Eigen::Vector2d;  // [theta, length]
using Pose = Eigen::Vector3d;   // [p_x, p_y, phi]

/// [p_x + l·cos(θ+φ), p_y + l·sin(θ+φ), φ + θ]
Pose roto_translate(const Joint& joint, const Pose& parent);

/// ∂T/∂[θ, l]
Eigen::Matrix<double, 3, 2> roto_translate_joint_jacobian(const Joint& joint, const Pose& parent);

/// ∂T/∂[p_x, p_y, φ] of the parent pose
Eigen::Matrix3d roto_translate_parent_jacobian(const Joint& joint, const Pose& parent);

/// Poses of every link extremity of a serial chain rooted at `base`.
std::vector<Pose> forward_kinematics(const Pose& base, std::span<const Joint> joints);

} // namespace dhm
