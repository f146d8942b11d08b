// Parallel sweep against its serial reference, plus the cost of one agent step.

#include "dhm/harness.hpp"

#include <benchmark/benchmark.h>

namespace {

dhm::ExperimentConfig short_trials() {
    dhm::ExperimentConfig cfg;
    cfg.max_steps = 500;
    return cfg;
}

dhm::SweepSpec sweep(int trials) {
    dhm::SweepSpec s;
    s.condition = dhm::Condition::both;
    s.trials = trials;
    s.seed = 7;
    return s;
}

void BM_SweepSerial(benchmark::State& state) {
    const auto cfg = short_trials();
    const auto s = sweep(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(dhm::run_experiment_serial(s, cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SweepParallel(benchmark::State& state) {
    const auto cfg = short_trials();
    const auto s = sweep(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(dhm::run_experiment(s, cfg));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_AgentStep(benchmark::State& state) {
    const dhm::ExperimentConfig cfg;
    std::mt19937_64 rng(3);
    dhm::TrialSpec spec;
    const auto world = dhm::sample_trial(spec, cfg.env, rng);
    const auto obs = dhm::observe(world, cfg.env);
    dhm::Agent agent(cfg.agent, cfg.env);
    agent.initialize_beliefs(obs);
    for (auto _ : state) benchmark::DoNotOptimize(agent.step(obs));
}

} // namespace

BENCHMARK(BM_SweepSerial)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SweepParallel)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_AgentStep)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
