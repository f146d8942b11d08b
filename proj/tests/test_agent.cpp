#include "support.hpp"

#include "dhm/agent.hpp"
#include "dhm/harness.hpp"

#include <doctest.h>

using namespace dhm;

namespace {

// Stacked extrinsic state of three entities from their positions; orientations random.
Vec stacked(test::Gen& g, const std::vector<Eigen::Vector2d>& pos) {
    Vec x(3 * static_cast<Eigen::Index>(pos.size()));
    for (std::size_t k = 0; k < pos.size(); ++k) x.segment<3>(3 * static_cast<Eigen::Index>(k)) << pos[k], g.uniform(-3, 3);
    return x;
}

} // namespace

TEST_CASE("end-effector intentions have the printed component structure") {
    test::Gen g(12);
    const double k = 0.7;
    const auto ints = end_effector_intentions();
    REQUIRE(ints.size() == 3);
    CHECK(ints[0].id == "stay");
    CHECK(ints[1].id == "reach_tool");
    CHECK(ints[2].id == "reach_ball");
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Vector2d hand = g.vec(2, -3, 3), tool = g.vec(2, -3, 3), ball = g.vec(2, -3, 3);
        const Vec x = stacked(g, {hand, tool, ball});
        CHECK(ints[0].trajectory(k).dynamics(x).isZero());

        const Vec ft = ints[1].trajectory(k).dynamics(x);
        CHECK((ft.segment<2>(0) - k * (tool - hand)).norm() < 1e-12);
        CHECK(ft.segment<6>(3).isZero());

        const Vec fb = ints[2].trajectory(k).dynamics(x);
        CHECK((fb.segment<2>(0) - k * (ball - hand)).norm() < 1e-12);
        CHECK((fb.segment<2>(3) - k * (ball - tool)).norm() < 1e-12);
        CHECK(fb.segment<3>(6).isZero());
    }
}

TEST_CASE("virtual reach_ball pulls the tool extremity to the ball") {
    test::Gen g(13);
    const auto ints = virtual_intentions();
    REQUIRE(ints.size() == 2);
    const Eigen::Vector2d tip = g.vec(2, -3, 3), ball = g.vec(2, -3, 3);
    const Vec x = stacked(g, {tip, ball});
    const Vec f = ints[1].trajectory(1.0).dynamics(x);
    CHECK((f.segment<2>(0) - (ball - tip)).norm() < 1e-12);
    CHECK(f.segment<3>(3).isZero());
}

TEST_CASE("reach_tool is at rest once the hand sits on the tool") {
    test::Gen g(14);
    const Eigen::Vector2d p = g.vec(2, -3, 3);
    const Vec x = stacked(g, {p, p, g.vec(2, -3, 3)});
    CHECK(end_effector_intentions()[1].trajectory(1.0).dynamics(x).norm() < 1e-12);
}

TEST_CASE("the hierarchy has five levels with the expected pathways") {
    const ExperimentConfig cfg;
    const Agent a(cfg.agent, cfg.env);
    const auto& h = a.hierarchy();
    REQUIRE(h.size() == 5);
    for (std::size_t i = 0; i < 4; ++i) CHECK(h.level(i).num_entities() == 3);
    CHECK(h.level(kVirtualLevel).num_entities() == 2);
    CHECK(h.level(kVirtualLevel).slot(Entity::actual) == -1);
    CHECK(a.end_effector_causes().num_causes() == 3);
    CHECK(a.virtual_causes().num_causes() == 2);
    CHECK(a.inverse_proprio_map().isIdentity());
}

TEST_CASE("the first plan of a trial asks for the tool; actions are clamped") {
    ExperimentConfig cfg;
    std::mt19937_64 rng(4);
    const WorldState w = sample_trial({}, cfg.env, rng);
    Agent a(cfg.agent, cfg.env);
    const Observation o = observe(w, cfg.env);
    a.initialize_beliefs(o);
    const Vec& act = a.step(o);
    CHECK(a.replanned_last_step());
    Eigen::Index best = 0;
    a.end_effector_causes().causes().prior.maxCoeff(&best);
    CHECK(best == task::reach_tool);
    CHECK(act.cwiseAbs().maxCoeff() <= cfg.agent.action_clamp);
    for (int t = 0; t < 50; ++t) CHECK(a.step(o).cwiseAbs().maxCoeff() <= cfg.agent.action_clamp + 1e-15);
    CHECK(a.step_count() == 51);
}

TEST_CASE("the tool is reached before the ball in the default trial") {
    const ExperimentConfig cfg;
    TrialSpec spec;
    spec.seed = 1;
    spec.max_steps = 1200;
    int tool_peak = -1, ball_peak = -1;
    double tool_best = 0.0, ball_best = 0.0;
    const auto r = run_trial(spec, cfg, [&](int t, const Agent& a, const WorldState&) {
        const Vec& v = a.end_effector_causes().causes().posterior;
        if (v[1] > tool_best) tool_best = v[1], tool_peak = t;
        if (v[2] > ball_best) ball_best = v[2], ball_peak = t;
    });
    CHECK(r.grasp_time);
    CHECK(r.completion_time);
    CHECK(tool_peak < ball_peak);
    CHECK(r.max_reach_ball_before_grasp < 0.5);
}

TEST_CASE("without proprioception the agent does not act") {
    ExperimentConfig cfg;
    cfg.agent.pi_proprio = 0.0;
    std::mt19937_64 rng(6);
    const WorldState w = sample_trial({}, cfg.env, rng);
    Agent a(cfg.agent, cfg.env);
    const Observation o = observe(w, cfg.env);
    a.initialize_beliefs(o);
    for (int t = 0; t < 20; ++t) CHECK(a.step(o).isZero());
}

TEST_CASE("planner overrides are checked against the task sizes") {
    ExperimentConfig cfg;
    cfg.agent.overrides.a_e5 = Mat::Constant(3, task::kNumStates, 1.0 / 3.0);
    CHECK_THROWS_AS(Agent(cfg.agent, cfg.env), DimensionError);
}
