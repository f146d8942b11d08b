#include "support.hpp"

#include "dhm/arm_env.hpp"
#include "dhm/kinematics.hpp"

#include <doctest.h>

#include <numbers>

using namespace dhm;

TEST_CASE("roto-translation of a unit link") {
    const Pose p = roto_translate(Joint(std::numbers::pi / 2, 2.0), Pose(1.0, 1.0, 0.0));
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[1] == doctest::Approx(3.0));
    CHECK(p[2] == doctest::Approx(std::numbers::pi / 2));
}

TEST_CASE("forward kinematics agrees with homogeneous transforms") {
    test::Gen g(6);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<Joint> joints;
        for (int i = g.integer(1, 6); i > 0; --i) joints.push_back(g.joint());
        const Pose base = g.pose();
        const auto a = forward_kinematics(base, joints);
        const auto b = test::homogeneous_chain(base, joints);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK((a[i].head<2>() - b[i].head<2>()).norm() < 1e-9);
            CHECK(std::abs(test::angle_diff(a[i][2], b[i][2])) < 1e-9);
        }
    }
}

TEST_CASE("roto-translation Jacobians match central differences") {
    test::Gen g(7);
    for (int trial = 0; trial < 100; ++trial) {
        const Joint j = g.joint();
        const Pose p = g.pose();
        const Mat fj = test::finite_difference_jacobian([&](const Vec& x) -> Vec { return roto_translate(x, p); }, j);
        const Mat fp = test::finite_difference_jacobian([&](const Vec& x) -> Vec { return roto_translate(j, x); }, p);
        CHECK(test::relative_error(roto_translate_joint_jacobian(j, p), fj) < 1e-5);
        CHECK(test::relative_error(roto_translate_parent_jacobian(j, p), fp) < 1e-5);
    }
}

TEST_CASE("environment arm matches the chain model in pixels") {
    test::Gen g(8);
    const EnvConfig env;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> q;
        std::vector<Joint> joints;
        for (double l : env.limb_lengths) {
            q.push_back(g.uniform(-3, 3));
            joints.emplace_back(q.back(), l);
        }
        const auto arm = arm_forward_kinematics(env, q);
        const auto chain = forward_kinematics(Pose(env.base.x(), env.base.y(), 0.0), joints);
        for (std::size_t i = 0; i < chain.size(); ++i) CHECK((arm.joints[i] - chain[i].head<2>()).norm() < 1e-9);
        CHECK(std::abs(test::angle_diff(arm.end_orientation, chain.back()[2])) < 1e-12);
    }
}
