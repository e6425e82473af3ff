#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stride/dsl/evaluator.hpp"
#include "stride/sim/world.hpp"
#include "stride/trainer/policy.hpp"

namespace stride::trainer {

struct RolloutResult
{
  sim::EpisodeResult episode;
  double total_reward = 0.0;
  std::optional<dsl::EvalError> error;  // set when the reward failed mid-episode

  bool failed() const { return error.has_value(); }
};

/// Policy architecture matching the simulator: one input per observation,
/// one tanh output per joint scaled to the torque limit.
MlpArchitecture policy_architecture(const sim::PhysicsConfig& physics);

/// Runs episodes of one (simulator, reward) pair. Holds per-thread buffers;
/// create one per thread.
class RolloutWorker
{
public:
  RolloutWorker(const sim::Simulator& sim, const dsl::CompiledProgram& reward, const MlpArchitecture& arch);

  /// Steps until `horizon` steps, a fall or divergence. The reward program is
  /// evaluated on the observation after every step; its component values
  /// are summed per episode. A reward error ends the episode as failed.
  RolloutResult run(std::span<const double> weights, int horizon, std::uint64_t seed);

private:
  const sim::Simulator& sim_;
  const dsl::CompiledProgram& reward_;
  PolicyEvaluator policy_;
  dsl::EvalScratch scratch_;
  std::array<double, sim::kObservationCount> obs_{};
  std::array<double, sim::kObservationCount> input_{};
  std::array<double, sim::kJointCount> torques_{};
  std::vector<double> components_;
  std::vector<double> sums_;
};

/// One-off rollout. The reward must be valid against the observation names.
RolloutResult rollout(const PolicyParams& policy, const dsl::RewardProgram& reward, const sim::EnvConfig& env,
                      int horizon, std::uint64_t seed);

}  // namespace stride::trainer
