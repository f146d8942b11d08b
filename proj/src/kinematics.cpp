#include "dhm/kinematics.hpp"

#include <cmath>

namespace dhm {

Pose roto_translate(const Joint& joint, const Pose& parent) {
    const double angle = joint[0] + parent[2];
    return {parent[0] + joint[1] * std::cos(angle), parent[1] + joint[1] * std::sin(angle), angle};
}

Eigen::Matrix<double, 3, 2> roto_translate_joint_jacobian(const Joint& joint, const Pose& parent) {
    const double angle = joint[0] + parent[2];
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Eigen::Matrix<double, 3, 2> j;
    j << -joint[1] * s, c,
          joint[1] * c, s,
          1.0,          0.0;
    return j;
}

Eigen::Matrix3d roto_translate_parent_jacobian(const Joint& joint, const Pose& parent) {
    const double angle = joint[0] + parent[2];
    Eigen::Matrix3d j;
    j << 1.0, 0.0, -joint[1] * std::sin(angle),
         0.0, 1.0,  joint[1] * std::cos(angle),
         0.0, 0.0,  1.0;
    return j;
}

std::vector<Pose> forward_kinematics(const Pose& base, std::span<const Joint> joints) {
    std::vector<Pose> out;
    out.reserve(joints.size());
    Pose current = base;
    for (const auto& joint : joints) {
        current = roto_translate(joint, current);
        out.push_back(current);
    }
    return out;
}

} // namespace dhm
