#include "support.hpp"

#include "dhm/arm_env.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace dhm;

namespace {

// Pearson statistic of `counts` against a uniform expectation.
double chi_square(const std::vector<int>& counts) {
    double total = 0.0;
    for (int c : counts) total += c;
    const double expected = total / static_cast<double>(counts.size());
    double x2 = 0.0;
    for (int c : counts) x2 += (c - expected) * (c - expected) / expected;
    return x2;
}

// Upper 0.1% point of χ² with 11 degrees of freedom.
constexpr double kChi2Df11 = 31.26;

} // namespace

TEST_CASE("zero action and zero velocities leave the world unchanged") {
    const EnvConfig env;
    std::mt19937_64 rng(1);
    const WorldState w = sample_trial({}, env, rng);
    const WorldState n = env_step(w, Vec::Zero(4), env);
    CHECK(n.joint_angles == w.joint_angles);
    CHECK(n.tool_origin == w.tool_origin);
    CHECK(n.ball_pos == w.ball_pos);
    CHECK(n.grasped == w.grasped);
    CHECK(n.step_count == w.step_count + 1);
}

TEST_CASE("objects reflect at the walls") {
    const EnvConfig env;
    WorldState w;
    w.joint_angles = env.initial_angles;
    w.ball_pos = Vec2(env.arena - 1.0, 300.0);
    w.ball_velocity = Vec2(3.0, 2.0);
    w.tool_origin = Vec2(1.0, 2.0);
    w.tool_velocity = Vec2(-2.0, -4.0);
    const WorldState n = env_step(w, Vec::Zero(4), env);
    CHECK(n.ball_pos.x() == doctest::Approx(env.arena - 2.0));
    CHECK(n.ball_velocity.x() == doctest::Approx(-3.0));
    CHECK(n.ball_velocity.y() == doctest::Approx(2.0));
    CHECK(n.tool_origin.x() == doctest::Approx(1.0));
    CHECK(n.tool_origin.y() == doctest::Approx(2.0));
    CHECK(n.tool_velocity == Vec2(2.0, 4.0));
}

TEST_CASE("joint angles integrate the action and respect a finite limit") {
    EnvConfig env;
    WorldState w;
    w.joint_angles = {0.0, 0.0, 0.0, 0.0};
    Vec a(4);
    a << 0.1, -0.2, 0.0, 0.05;
    WorldState n = env_step(w, a, env);
    CHECK(n.joint_angles[0] == doctest::Approx(0.1));
    CHECK(n.joint_angles[1] == doctest::Approx(-0.2));
    env.joint_limit = 0.15;
    for (int i = 0; i < 5; ++i) n = env_step(n, a, env);
    CHECK(n.joint_angles[0] == doctest::Approx(0.15));
    CHECK(n.joint_angles[1] == doctest::Approx(-0.15));
    CHECK_THROWS_AS(env_step(w, Vec::Zero(3), env), std::invalid_argument);
}

TEST_CASE("scripted reach grasps the tool, which then follows the hand") {
    const EnvConfig env;
    WorldState w;
    w.joint_angles = env.initial_angles;
    // Tool placed where the hand will be after rotating the base joint by 0.3 rad in 10 steps.
    std::vector<double> goal = env.initial_angles;
    goal[0] += 0.3;
    w.tool_origin = arm_forward_kinematics(env, goal).end_effector();
    w.tool_angle = 1.0;
    w.ball_pos = Vec2(100.0, 100.0);
    Vec a = Vec::Zero(4);
    a[0] = 0.03;
    int grasped_at = -1;
    for (int t = 1; t <= 12 && grasped_at < 0; ++t) {
        w = env_step(w, a, env);
        if (w.grasped) grasped_at = t;
    }
    REQUIRE(grasped_at > 0);
    CHECK(observe(w, env).tactile == Eigen::Vector2d(0.0, 1.0));

    for (int t = 0; t < 20; ++t) w = env_step(w, -a, env);
    const ArmPose arm = arm_forward_kinematics(env, w.joint_angles);
    CHECK(w.grasped);
    CHECK((w.tool_origin - arm.end_effector()).norm() < 1e-9);
    CHECK(w.tool_angle == doctest::Approx(arm.end_orientation));
    const Vec2 tip = tool_tip(env, w);
    CHECK((tip - w.tool_origin).norm() == doctest::Approx(env.tool_length));
}

TEST_CASE("the grasp can keep the tool angle at contact") {
    EnvConfig env;
    env.align_tool_on_grasp = false;
    WorldState w;
    w.joint_angles = env.initial_angles;
    w.tool_origin = arm_forward_kinematics(env, w.joint_angles).end_effector();
    w.tool_angle = 2.0;
    w = env_step(w, Vec::Zero(4), env);
    REQUIRE(w.grasped);
    CHECK(w.tool_angle == doctest::Approx(2.0));
}

TEST_CASE("spawned directions are uniform on the circle") {
    const EnvConfig env;
    std::mt19937_64 rng(2024);
    std::vector<int> tool(12, 0), ball(12, 0);
    TrialSpec spec;
    spec.condition = Condition::both;
    spec.speed = 4.0;
    auto bin = [](const Vec2& v) {
        const double a = std::atan2(v.y(), v.x()) + std::numbers::pi;
        return std::min(11, static_cast<int>(a / (2.0 * std::numbers::pi) * 12.0));
    };
    for (int i = 0; i < 6000; ++i) {
        const WorldState w = sample_trial(spec, env, rng);
        CHECK(w.tool_velocity.norm() == doctest::Approx(4.0));
        ++tool[static_cast<std::size_t>(bin(w.tool_velocity))];
        ++ball[static_cast<std::size_t>(bin(w.ball_velocity))];
    }
    CHECK(chi_square(tool) < kChi2Df11);
    CHECK(chi_square(ball) < kChi2Df11);
}

TEST_CASE("spawn regions") {
    EnvConfig env;
    std::mt19937_64 rng(5);
    TrialSpec still;
    for (int i = 0; i < 500; ++i) {
        const WorldState w = sample_trial(still, env, rng);
        const double rt = (w.tool_origin - env.base).norm(), rb = (w.ball_pos - env.base).norm();
        CHECK(rt >= env.spawn_clearance);
        CHECK(rt <= env.arm_reach() - env.reach_margin);
        CHECK(rb <= env.arm_reach() + env.tool_length - env.reach_margin);
        CHECK(w.tool_velocity.isZero());
        CHECK(w.ball_velocity.isZero());
    }
    env.spawn_moving_in_reach = false;
    TrialSpec moving;
    moving.condition = Condition::moving_ball;
    moving.speed = 1.0;
    int far = 0;
    for (int i = 0; i < 500; ++i) {
        const WorldState w = sample_trial(moving, env, rng);
        CHECK(w.ball_pos.x() >= 0.0);
        CHECK(w.ball_pos.x() <= env.arena);
        far += (w.ball_pos - env.base).norm() > env.arm_reach() + env.tool_length ? 1 : 0;
    }
    CHECK(far > 0);
}

TEST_CASE("observations are noise free by default and deterministic under a seed") {
    EnvConfig env;
    std::mt19937_64 rng(3);
    const WorldState w = sample_trial({}, env, rng);
    const Observation o = observe(w, env);
    CHECK(o.ball == w.ball_pos);
    env.visual_noise = 2.0;
    std::mt19937_64 a(9), b(9);
    const Observation na = observe(w, env, &a), nb = observe(w, env, &b);
    CHECK(na.ball == nb.ball);
    CHECK(na.ball != w.ball_pos);
}

TEST_CASE("condition names round-trip") {
    for (Condition c : {Condition::static_scene, Condition::moving_tool, Condition::moving_ball, Condition::both})
        CHECK(parse_condition(condition_name(c)) == c);
    CHECK_THROWS_AS(parse_condition("fast"), std::invalid_argument);
}
