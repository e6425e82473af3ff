#include <benchmark/benchmark.h>

#include <map>
#include <vector>

#include "stride/dsl/evaluator.hpp"
#include "stride/dsl/parser.hpp"
#include "stride/sim/world.hpp"

namespace {

constexpr const char* kReward =
    "let upright = exp(-abs(torso_pitch) / 0.3)\n"
    "component speed = clip(vel_x, -1.0, 3.0) * upright\n"
    "component height = -abs(height_above_terrain - 0.86)\n"
    "component effort = -0.002 * (abs(hip_L_vel) + abs(hip_R_vel) + abs(knee_L_vel) + abs(knee_R_vel))\n"
    "total = speed + 2.0 * height + effort\n";

void BM_parse(benchmark::State& state)
{
  for (auto _ : state) {
    auto r = stride::dsl::parse(kReward);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_parse);

void BM_compiled_eval(benchmark::State& state)
{
  const auto& names = stride::sim::observation_names();
  const auto program = *stride::dsl::parse(kReward).program;
  const auto compiled = stride::dsl::CompiledProgram::compile(program, names);
  auto scratch = compiled.make_scratch();
  std::vector<double> inputs(names.size(), 0.1);
  std::vector<double> components(compiled.component_names().size());
  double total = 0.0;
  for (auto _ : state) {
    inputs[0] += 1e-9;
    benchmark::DoNotOptimize(compiled.run(inputs, scratch, components, total));
    benchmark::DoNotOptimize(total);
  }
}
BENCHMARK(BM_compiled_eval);

// the map-based entry point, for comparison with the compiled path
void BM_tree_eval(benchmark::State& state)
{
  const auto program = *stride::dsl::parse(kReward).program;
  std::map<std::string, double> bindings;
  for (const auto& n : stride::sim::observation_names()) bindings[n] = 0.1;
  for (auto _ : state) {
    auto v = stride::dsl::evaluate(program, bindings);
    benchmark::DoNotOptimize(v);
  }
}
BENCHMARK(BM_tree_eval);

}  // namespace
