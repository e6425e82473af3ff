#include "stride/trainer/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

#include "stride/common/json_reader.hpp"
#include "stride/common/parallel.hpp"
#include "stride/common/seed.hpp"
#include "stride/dsl/evaluator.hpp"
#include "stride/sim/world.hpp"
#include "stride/trainer/cem.hpp"
#include "stride/trainer/rollout.hpp"

namespace stride::trainer {

void TrainConfig::check() const
{
  CemSettings cem{population, elite_fraction, init_std, min_std};
  try {
    cem.check();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("trainer.population: ") + e.what());
  }
  if (generations < 1) throw ConfigError("trainer.generations: must be >= 1");
  if (horizon < 1) throw ConfigError("trainer.horizon: must be >= 1");
  if (episodes < 1) throw ConfigError("trainer.episodes: must be >= 1");
  if (epoch_freq < 1) throw ConfigError("trainer.epoch_freq: must be >= 1");
  if (eval_episodes < 1) throw ConfigError("trainer.eval_episodes: must be >= 1");
}

nlohmann::json to_json(const TrainConfig& c)
{
  return {
      {"population", c.population}, {"elite_fraction", c.elite_fraction},
      {"generations", c.generations}, {"horizon", c.horizon},
      {"episodes", c.episodes}, {"epoch_freq", c.epoch_freq},
      {"init_std", c.init_std}, {"min_std", c.min_std},
      {"eval_episodes", c.eval_episodes}, {"seed", c.seed},
      {"workers", c.workers},
  };
}

TrainConfig train_config_from_json(const nlohmann::json& j, const std::string& path)
{
  TrainConfig c;
  ObjectReader r(j, path);
  r.get("population", c.population);
  r.get("elite_fraction", c.elite_fraction);
  r.get("generations", c.generations);
  r.get("horizon", c.horizon);
  r.get("episodes", c.episodes);
  r.get("epoch_freq", c.epoch_freq);
  r.get("init_std", c.init_std);
  r.get("min_std", c.min_std);
  r.get("eval_episodes", c.eval_episodes);
  r.get("seed", c.seed);
  r.get("workers", c.workers);
  r.finish();
  c.check();
  return c;
}

std::string_view to_string(Termination t)
{
  return t == Termination::completed ? "completed" : "defective_reward";
}

Termination termination_from_string(std::string_view s)
{
  if (s == "completed") return Termination::completed;
  if (s == "defective_reward") return Termination::defective_reward;
  throw std::invalid_argument("unknown termination '" + std::string(s) + "'");
}

namespace {

/// Accumulates one statistics window.
class WindowAccumulator
{
public:
  WindowAccumulator(int window, int first_generation, const std::vector<std::string>& components)
  {
    stats_.window = window;
    stats_.first_generation = first_generation;
    stats_.last_generation = first_generation;
    for (const auto& c : components) {
      stats_.components[c] = ComponentStats{-std::numeric_limits<double>::infinity(), 0.0,
                                            std::numeric_limits<double>::infinity()};
    }
  }

  void add(const RolloutResult& r, int generation)
  {
    stats_.last_generation = generation;
    if (r.failed()) {
      ++stats_.failed_episodes;
      return;
    }
    ++stats_.episodes;
    for (auto& [name, s] : stats_.components) {
      const double v = r.episode.component_sums.at(name);
      s.max = std::max(s.max, v);
      s.min = std::min(s.min, v);
      s.mean += v;
    }
    stats_.mean_fitness += r.episode.fitness;
    stats_.max_fitness = std::max(stats_.max_fitness, r.episode.fitness);
    stats_.mean_episode_length += r.episode.steps;
    stats_.fall_rate += r.episode.fell ? 1.0 : 0.0;
  }

  EpochStats finish() const
  {
    EpochStats s = stats_;
    if (s.episodes == 0) {
      for (auto& [name, c] : s.components) c = ComponentStats{};
      return s;
    }
    const double n = s.episodes;
    for (auto& [name, c] : s.components) {
      c.mean /= n;
      // Keep min <= mean <= max exact under rounding of the running sum.
      c.mean = std::clamp(c.mean, c.min, c.max);
    }
    s.mean_fitness /= n;
    s.mean_episode_length /= n;
    s.fall_rate /= n;
    return s;
  }

private:
  EpochStats stats_;
};

}  // namespace

TrainReport train(const dsl::RewardProgram& reward, const sim::EnvConfig& env, const TrainConfig& config)
{
  config.check();
  const auto started = std::chrono::steady_clock::now();

  const sim::Simulator simulator(env);
  const auto compiled = dsl::CompiledProgram::compile(reward, sim::observation_names());
  const MlpArchitecture arch = policy_architecture(env.physics);
  const std::size_t dim = arch.parameter_count();

  CrossEntropySearch cem(std::vector<double>(dim, 0.0),
                         CemSettings{config.population, config.elite_fraction, config.init_std, config.min_std});

  TrainReport report;
  report.best_policy = PolicyParams::zeros(arch);
  double best = -1.0;

  const auto pop = static_cast<std::size_t>(config.population);
  const auto episodes = static_cast<std::size_t>(config.episodes);
  const unsigned workers = resolve_workers(config.workers);
  std::vector<RolloutResult> results(pop * episodes);
  std::vector<double> scores(pop);

  std::optional<WindowAccumulator> window;
  for (int g = 0; g < config.generations; ++g) {
    if (g % config.epoch_freq == 0) {
      if (window) report.windows.push_back(window->finish());
      window.emplace(g / config.epoch_freq, g, compiled.component_names());
    }

    const std::vector<double> members = cem.sample(derive_seed(config.seed, "cem/" + std::to_string(g)));
    std::vector<std::uint64_t> episode_seeds(episodes);
    for (std::size_t e = 0; e < episodes; ++e) {
      episode_seeds[e] = derive_seed(config.seed, "episode/" + std::to_string(g) + "/" + std::to_string(e));
    }

    parallel_for(pop, workers, [&](std::size_t i) {
      RolloutWorker worker(simulator, compiled, arch);
      const std::span<const double> w(members.data() + i * dim, dim);
      for (std::size_t e = 0; e < episodes; ++e) results[i * episodes + e] = worker.run(w, config.horizon, episode_seeds[e]);
    });

    int failed = 0;
    for (std::size_t i = 0; i < pop; ++i) {
      double reward_sum = 0.0;
      bool member_failed = false;
      for (std::size_t e = 0; e < episodes; ++e) {
        const RolloutResult& r = results[i * episodes + e];
        window->add(r, g);
        if (r.failed()) {
          ++failed;
          member_failed = true;
          if (report.error.empty()) report.error = r.error->describe();
          continue;
        }
        reward_sum += r.total_reward;
      }
      scores[i] = member_failed ? -std::numeric_limits<double>::infinity() : reward_sum / config.episodes;
    }

    report.total_rollouts += static_cast<int>(pop * episodes);
    report.failed_rollouts += failed;
    report.generations_completed = g + 1;

    if (2 * static_cast<std::size_t>(failed) >= pop * episodes) {
      report.termination = Termination::defective_reward;
      report.best_fitness = std::max(best, 0.0);
      report.best_fitness_history.push_back(report.best_fitness);
      break;
    }
    cem.update(members, scores);

    // The refitted mean is the policy this generation hands over; its
    // fitness is measured on the same episodes and never fed back.
    RolloutWorker worker(simulator, compiled, arch);
    double fitness_sum = 0.0;
    for (std::size_t e = 0; e < episodes; ++e) {
      const RolloutResult r = worker.run(cem.mean(), config.horizon, episode_seeds[e]);
      if (!r.failed()) fitness_sum += r.episode.fitness;
    }
    const double mean_fitness = fitness_sum / config.episodes;
    if (mean_fitness > best) {
      best = mean_fitness;
      report.best_policy.weights = cem.mean();
    }
    report.best_fitness = std::max(best, 0.0);
    report.best_fitness_history.push_back(report.best_fitness);
  }
  if (window) report.windows.push_back(window->finish());

  report.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

std::vector<std::uint64_t> evaluation_seeds(std::uint64_t seed, int n)
{
  std::vector<std::uint64_t> out;
  for (int i = 0; i < n; ++i) out.push_back(derive_seed(seed, "eval/" + std::to_string(i)));
  return out;
}

FitnessStats evaluate_policy(const PolicyParams& policy, const dsl::RewardProgram& reward, const sim::EnvConfig& env,
                             const std::vector<std::uint64_t>& seeds)
{
  if (seeds.empty()) throw std::invalid_argument("evaluate_policy: need at least one episode");
  policy.check();
  const sim::Simulator simulator(env);
  const auto compiled = dsl::CompiledProgram::compile(reward, sim::observation_names());
  RolloutWorker worker(simulator, compiled, policy.architecture);

  FitnessStats out;
  for (std::uint64_t s : seeds) {
    const RolloutResult r = worker.run(policy.weights, env.physics.horizon_steps, s);
    const double f = r.failed() ? 0.0 : r.episode.fitness;
    if (r.failed()) ++out.failed;
    out.episodes.push_back(f);
  }
  out.max = *std::max_element(out.episodes.begin(), out.episodes.end());
  double sum = 0.0;
  for (double f : out.episodes) sum += f;
  out.mean = std::min(out.max, sum / static_cast<double>(out.episodes.size()));
  return out;
}

namespace {

nlohmann::json to_json(const EpochStats& s)
{
  nlohmann::json comps = nlohmann::json::object();
  for (const auto& [name, c] : s.components) comps[name] = {{"max", c.max}, {"mean", c.mean}, {"min", c.min}};
  return {
      {"window", s.window},
      {"first_generation", s.first_generation},
      {"last_generation", s.last_generation},
      {"components", comps},
      {"mean_fitness", s.mean_fitness},
      {"max_fitness", s.max_fitness},
      {"mean_episode_length", s.mean_episode_length},
      {"fall_rate", s.fall_rate},
      {"episodes", s.episodes},
      {"failed_episodes", s.failed_episodes},
  };
}

EpochStats epoch_stats_from_json(const nlohmann::json& j)
{
  EpochStats s;
  s.window = j.at("window").get<int>();
  s.first_generation = j.at("first_generation").get<int>();
  s.last_generation = j.at("last_generation").get<int>();
  for (const auto& [name, c] : j.at("components").items()) {
    s.components[name] = ComponentStats{c.at("max").get<double>(), c.at("mean").get<double>(), c.at("min").get<double>()};
  }
  s.mean_fitness = j.at("mean_fitness").get<double>();
  s.max_fitness = j.at("max_fitness").get<double>();
  s.mean_episode_length = j.at("mean_episode_length").get<double>();
  s.fall_rate = j.at("fall_rate").get<double>();
  s.episodes = j.at("episodes").get<int>();
  s.failed_episodes = j.at("failed_episodes").get<int>();
  return s;
}

}  // namespace

nlohmann::json to_json(const TrainReport& r, bool include_policy)
{
  nlohmann::json windows = nlohmann::json::array();
  for (const auto& w : r.windows) windows.push_back(to_json(w));
  nlohmann::json j = {
      {"windows", windows},
      {"best_fitness", r.best_fitness},
      {"best_fitness_history", r.best_fitness_history},
      {"generations_completed", r.generations_completed},
      {"total_rollouts", r.total_rollouts},
      {"failed_rollouts", r.failed_rollouts},
      {"termination", std::string(to_string(r.termination))},
      {"error", r.error},
      {"wall_clock_seconds", r.wall_clock_seconds},
  };
  if (include_policy) j["best_policy"] = to_json(r.best_policy);
  return j;
}

TrainReport train_report_from_json(const nlohmann::json& j)
{
  TrainReport r;
  for (const auto& w : j.at("windows")) r.windows.push_back(epoch_stats_from_json(w));
  r.best_fitness = j.at("best_fitness").get<double>();
  r.best_fitness_history = j.at("best_fitness_history").get<std::vector<double>>();
  r.generations_completed = j.at("generations_completed").get<int>();
  r.total_rollouts = j.at("total_rollouts").get<int>();
  r.failed_rollouts = j.at("failed_rollouts").get<int>();
  r.termination = termination_from_string(j.at("termination").get<std::string>());
  r.error = j.at("error").get<std::string>();
  r.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
  if (j.contains("best_policy")) r.best_policy = policy_from_json(j.at("best_policy"));
  return r;
}

}  // namespace stride::trainer
