#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "stride/dsl/ast.hpp"
#include "stride/sim/config.hpp"
#include "stride/trainer/policy.hpp"

namespace stride::trainer {

struct TrainConfig
{
  int population = 32;
  double elite_fraction = 0.25;
  int generations = 40;
  int horizon = 2400;         // steps per training rollout
  int episodes = 3;           // rollouts per population member
  int epoch_freq = 5;         // generations per statistics window
  double init_std = 0.3;
  double min_std = 0.02;
  int eval_episodes = 5;      // episodes of the final fitness evaluation
  std::uint64_t seed = 0;
  unsigned workers = 1;       // threads for population rollouts; 0 = hardware concurrency

  /// Throws ConfigError with the offending key.
  void check() const;
};

nlohmann::json to_json(const TrainConfig& c);
TrainConfig train_config_from_json(const nlohmann::json& j, const std::string& path);

struct ComponentStats
{
  double max = 0.0;
  double mean = 0.0;
  double min = 0.0;

  bool operator==(const ComponentStats&) const = default;
};

/// Statistics over every successful training episode of generations
/// [first_generation, last_generation].
struct EpochStats
{
  int window = 0;
  int first_generation = 0;
  int last_generation = 0;
  std::map<std::string, ComponentStats> components;  // per-episode component sums
  double mean_fitness = 0.0;
  double max_fitness = 0.0;
  double mean_episode_length = 0.0;
  double fall_rate = 0.0;
  int episodes = 0;
  int failed_episodes = 0;

  bool operator==(const EpochStats&) const = default;
};

enum class Termination
{
  completed,
  defective_reward,  // too many rollouts hit reward evaluation errors
};

std::string_view to_string(Termination t);
Termination termination_from_string(std::string_view s);

struct TrainReport
{
  std::vector<EpochStats> windows;
  double best_fitness = 0.0;
  std::vector<double> best_fitness_history;  // running best after each generation
  PolicyParams best_policy;
  int generations_completed = 0;
  int total_rollouts = 0;
  int failed_rollouts = 0;
  Termination termination = Termination::completed;
  std::string error;  // first reward error, when any rollout failed
  double wall_clock_seconds = 0.0;

  bool operator==(const TrainReport&) const = default;
};

nlohmann::json to_json(const TrainReport& r, bool include_policy);
TrainReport train_report_from_json(const nlohmann::json& j);

/// Trains a policy for `reward` with the cross-entropy method.
///
/// Members are scored by their mean total reward over `episodes` rollouts
/// (members with a failed rollout score -infinity). Episode seeds are shared
/// within a generation. The fitness of each member is tracked alongside but
/// never enters the update; the report returns the highest-fitness policy
/// seen. Training stops early with defective_reward when at least half of a
/// generation's rollouts fail.
///
/// Precondition: `reward` validates against sim::observation_names().
TrainReport train(const dsl::RewardProgram& reward, const sim::EnvConfig& env, const TrainConfig& config);

struct FitnessStats
{
  double max = 0.0;
  double mean = 0.0;
  std::vector<double> episodes;
  int failed = 0;
};

/// Runs the policy for the environment horizon once per seed and scores
/// each episode with the fitness function; failed episodes score 0.
FitnessStats evaluate_policy(const PolicyParams& policy, const dsl::RewardProgram& reward, const sim::EnvConfig& env,
                             const std::vector<std::uint64_t>& seeds);

/// `n` evaluation seeds derived from `seed`.
std::vector<std::uint64_t> evaluation_seeds(std::uint64_t seed, int n);

}  // namespace stride::trainer
