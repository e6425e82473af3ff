#include <benchmark/benchmark.h>

#include <array>

#include "stride/sim/world.hpp"

namespace {

stride::sim::EnvConfig env_for(stride::sim::TerrainKind kind)
{
  stride::sim::EnvConfig env;
  env.terrain.kind = kind;
  return env;
}

void BM_step(benchmark::State& state)
{
  const stride::sim::Simulator sim(env_for(static_cast<stride::sim::TerrainKind>(state.range(0))));
  auto s = sim.reset(1);
  const std::array<double, stride::sim::kJointCount> torques{5.0, -3.0, 1.0, -5.0, 3.0, -1.0};
  for (auto _ : state) {
    sim.step(s, torques);
    if (sim.fallen(s)) s = sim.reset(1);
  }
  benchmark::DoNotOptimize(s);
}
BENCHMARK(BM_step)->Arg(0)->Arg(1)->Arg(2);

void BM_observe(benchmark::State& state)
{
  const stride::sim::Simulator sim(env_for(stride::sim::TerrainKind::flat));
  const auto s = sim.reset(1);
  std::array<double, stride::sim::kObservationCount> obs{};
  for (auto _ : state) {
    sim.observe(s, obs);
    benchmark::DoNotOptimize(obs);
  }
}
BENCHMARK(BM_observe);

}  // namespace
