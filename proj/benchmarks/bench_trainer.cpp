#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "stride/dsl/parser.hpp"
#include "stride/trainer/rollout.hpp"

namespace {

std::vector<double> random_weights(std::size_t n)
{
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d(0.0, 0.3);
  std::vector<double> w(n);
  for (auto& x : w) x = d(rng);
  return w;
}

void BM_policy_forward(benchmark::State& state)
{
  const auto arch = stride::trainer::policy_architecture(stride::sim::PhysicsConfig{});
  stride::trainer::PolicyEvaluator eval(arch);
  const auto w = random_weights(arch.parameter_count());
  std::vector<double> in(arch.inputs, 0.2), out(arch.outputs);
  for (auto _ : state) {
    eval.forward(w, in, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_policy_forward);

void BM_rollout(benchmark::State& state)
{
  const stride::sim::EnvConfig env;
  const stride::sim::Simulator sim(env);
  const auto program = *stride::dsl::parse("component speed = vel_x\ntotal = speed\n").program;
  const auto reward = stride::dsl::CompiledProgram::compile(program, stride::sim::observation_names());
  const auto arch = stride::trainer::policy_architecture(env.physics);
  stride::trainer::RolloutWorker worker(sim, reward, arch);
  const auto w = random_weights(arch.parameter_count());
  const int horizon = static_cast<int>(state.range(0));
  std::int64_t steps = 0;
  for (auto _ : state) {
    const auto r = worker.run(w, horizon, 7);
    steps += r.episode.steps;
  }
  state.counters["steps/s"] = benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_rollout)->Arg(480)->Arg(2400)->Unit(benchmark::kMillisecond);

}  // namespace
