#include "fixtures.hpp"

namespace stride::testkit {

trainer::TrainReport synthetic_report()
{
  trainer::TrainReport r;
  for (int w = 0; w < 3; ++w) {
    trainer::EpochStats s;
    s.window = w;
    s.first_generation = 5 * w;
    s.last_generation = 5 * w + 4;
    s.components["speed"] = {12.5 + w, 3.25 + w, -0.5};
    s.components["posture"] = {100.0, 100.0, 100.0};
    s.mean_fitness = 0.05 * (w + 1);
    s.max_fitness = 0.1 * (w + 1);
    s.mean_episode_length = 400.0 + 10.0 * w;
    s.fall_rate = 0.5 - 0.125 * w;
    s.episodes = 96;
    s.failed_episodes = w == 2 ? 1 : 0;
    r.windows.push_back(s);
  }
  r.best_fitness = 0.3;
  r.best_fitness_history = std::vector<double>(15, 0.3);
  r.generations_completed = 15;
  r.total_rollouts = 288;
  r.failed_rollouts = 1;
  return r;
}

search::RunConfig tiny_config(std::uint64_t seed)
{
  search::RunConfig c;
  c.env.physics.horizon_steps = 60;
  c.trainer.population = 4;
  c.trainer.elite_fraction = 0.5;
  c.trainer.generations = 2;
  c.trainer.horizon = 60;
  c.trainer.episodes = 1;
  c.trainer.epoch_freq = 1;
  c.trainer.eval_episodes = 1;
  c.loop.iterations = 3;
  c.loop.samples = 4;
  c.loop.seed = seed;
  return c;
}

std::vector<llm::GenerationResult> FixedBackend::generate(const llm::PromptBundle& prompt, int k)
{
  prompts.push_back(prompt);
  std::vector<llm::GenerationResult> out;
  for (int i = 0; i < k; ++i) {
    out.push_back(llm::GenerationResult::extracted(responses_[static_cast<std::size_t>(i) % responses_.size()],
                                                   dsl::Origin::llm, 0.0));
  }
  return out;
}

std::string fenced(const std::string& program)
{
  return "Here is the reward.\n\n```rwd\n" + program + "\n```\n";
}

}  // namespace stride::testkit
