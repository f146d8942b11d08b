#include "dhm/config.hpp"

#include <doctest.h>

#include <cmath>

using namespace dhm;

TEST_CASE("an empty file gives the defaults") {
    const ExperimentConfig c = parse_config("");
    const ExperimentConfig d;
    CHECK(c.max_steps == d.max_steps);
    CHECK(c.agent.dt == d.agent.dt);
    CHECK(c.env.limb_lengths == d.env.limb_lengths);
    CHECK(c.agent.planner.policy_length == d.agent.planner.policy_length);
}

TEST_CASE("the printed defaults parse back to the defaults") {
    const ExperimentConfig c = parse_config(default_config_text());
    const ExperimentConfig d;
    CHECK(c.agent.pi_extrinsic == d.agent.pi_extrinsic);
    CHECK(c.agent.intention_gain == d.agent.intention_gain);
    CHECK(c.agent.belief_init == d.agent.belief_init);
    CHECK(c.env.base == d.env.base);
    CHECK(c.env.initial_angles == d.env.initial_angles);
    CHECK(std::isinf(c.env.joint_limit));
    CHECK(c.env.align_tool_on_grasp == d.env.align_tool_on_grasp);
    CHECK(c.env.spawn_moving_in_reach == d.env.spawn_moving_in_reach);
    CHECK(c.agent.planner.likelihood_softening == d.agent.planner.likelihood_softening);
}

TEST_CASE("values are read per section") {
    const ExperimentConfig c = parse_config(
        "[experiment]\nmax_steps = 500\n"
        "[agent]\ndt = 0.1\nintrinsic_intentions = true\nbelief_init = neutral\n"
        "[planner]\npolicy_length = 3\nc = 0.1 0.1 0.1 0.1 0.1 0.5\n"
        "[env]\nlimb_lengths = 100, 100, 100, 100\njoint_limit = 3.0\nalign_tool_on_grasp = false\n");
    CHECK(c.max_steps == 500);
    CHECK(c.agent.dt == 0.1);
    CHECK(c.agent.intrinsic_intentions);
    CHECK(c.agent.belief_init == BeliefInit::neutral);
    CHECK(c.agent.planner.policy_length == 3);
    REQUIRE(c.agent.overrides.c);
    CHECK((*c.agent.overrides.c)[5] == 0.5);
    CHECK(c.env.limb_lengths == std::vector<double>{100, 100, 100, 100});
    CHECK(c.env.joint_limit == 3.0);
    CHECK_FALSE(c.env.align_tool_on_grasp);
    CHECK(std::isinf(parse_config("[env]\njoint_limit = inf\n").env.joint_limit));
}

TEST_CASE("matrices are rows separated by semicolons") {
    const Mat m = parse_matrix("1 0; 0 1; 0.5 0.5");
    CHECK(m.rows() == 3);
    CHECK(m.cols() == 2);
    CHECK(m(2, 1) == 0.5);
    CHECK_THROWS_AS(parse_matrix("1 2; 3"), ConfigError);
}

TEST_CASE("bad files are rejected with a reason") {
    CHECK_THROWS_AS(parse_config("[agent]\nunknown_key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[nowhere]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[agent]\ndt = fast\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[agent]\ndt = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[agent]\nreplan_period = 2.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[env]\nalign_tool_on_grasp = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[env]\nlimb_lengths = 100 100 100\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[planner]\na_t = 1 1 1 1 1 1\n"), ConfigError);
    try {
        parse_config("[agent]\nunknown_key = 1\n");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("unknown_key") != std::string::npos);
    }
}
