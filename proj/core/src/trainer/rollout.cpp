#include "stride/trainer/rollout.hpp"

namespace stride::trainer {

namespace {

// Fixed input conditioning: the policy ignores absolute x (the task is
// translation invariant) and sees rates at a fifth of their size.
std::array<double, sim::kObservationCount> input_scales()
{
  std::array<double, sim::kObservationCount> s{};
  s.fill(1.0);
  s[0] = 0.0;
  for (std::size_t i : {3, 4, 5}) s[i] = 0.2;
  for (std::size_t i = 12; i < 18; ++i) s[i] = 0.2;
  return s;
}

const std::array<double, sim::kObservationCount> kInputScales = input_scales();

}  // namespace

MlpArchitecture policy_architecture(const sim::PhysicsConfig& physics)
{
  MlpArchitecture a;
  a.inputs = sim::kObservationCount;
  a.hidden = {32, 32};
  a.outputs = sim::kJointCount;
  a.output_scale = physics.torque_limit;
  return a;
}

RolloutWorker::RolloutWorker(const sim::Simulator& sim, const dsl::CompiledProgram& reward, const MlpArchitecture& arch)
    : sim_(sim),
      reward_(reward),
      policy_(arch),
      scratch_(reward.make_scratch()),
      components_(reward.component_names().size()),
      sums_(reward.component_names().size())
{
  if (reward.input_count() != sim::kObservationCount) {
    throw std::invalid_argument("reward program was not compiled against the observation variables");
  }
  if (arch.inputs != sim::kObservationCount || arch.outputs != sim::kJointCount) {
    throw std::invalid_argument("policy dimensions do not match the simulator");
  }
}

RolloutResult RolloutWorker::run(std::span<const double> weights, int horizon, std::uint64_t seed)
{
  RolloutResult out;
  std::fill(sums_.begin(), sums_.end(), 0.0);

  sim::WorldState state = sim_.reset(seed);
  const double x0 = state.x();
  sim_.observe(state, obs_);

  for (int t = 0; t < horizon; ++t) {
    for (std::size_t i = 0; i < obs_.size(); ++i) input_[i] = obs_[i] * kInputScales[i];
    policy_.forward(weights, input_, torques_);
    const sim::WorldState before = state;
    try {
      sim_.step(state, torques_);
    } catch (const sim::SimulationDiverged&) {
      state = before;
      out.episode.diverged = true;
      break;
    }
    sim_.observe(state, obs_);

    double total = 0.0;
    if (auto err = reward_.run(obs_, scratch_, components_, total)) {
      out.error = std::move(*err);
      break;
    }
    for (std::size_t i = 0; i < sums_.size(); ++i) sums_[i] += components_[i];
    out.total_reward += total;
    ++out.episode.steps;

    if (sim_.fallen(state)) {
      out.episode.fell = true;
      break;
    }
  }

  out.episode.distance = state.x() - x0;
  out.episode.fitness = sim::fitness(out.episode.distance, sim_.physics());
  const auto& names = reward_.component_names();
  for (std::size_t i = 0; i < names.size(); ++i) out.episode.component_sums.emplace(names[i], sums_[i]);
  return out;
}

RolloutResult rollout(const PolicyParams& policy, const dsl::RewardProgram& reward, const sim::EnvConfig& env,
                      int horizon, std::uint64_t seed)
{
  policy.check();
  const sim::Simulator sim(env);
  const auto compiled = dsl::CompiledProgram::compile(reward, sim::observation_names());
  RolloutWorker worker(sim, compiled, policy.architecture);
  return worker.run(policy.weights, horizon, seed);
}

}  // namespace stride::trainer
