#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "stride/common/seed.hpp"
#include "stride/dsl/parser.hpp"
#include "stride/trainer/cem.hpp"
#include "stride/trainer/rollout.hpp"
#include "stride/trainer/train.hpp"

using namespace stride;
using namespace stride::trainer;

namespace {

double norm(const std::vector<double>& v)
{
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

dsl::RewardProgram program(std::string_view text)
{
  return *dsl::parse(text).program;
}

TrainConfig small_config()
{
  TrainConfig c;
  c.population = 8;
  c.generations = 6;
  c.horizon = 120;
  c.episodes = 1;
  c.epoch_freq = 4;
  c.eval_episodes = 2;
  c.seed = 5;
  return c;
}

sim::EnvConfig short_env(int horizon = 120)
{
  sim::EnvConfig env;
  env.physics.horizon_steps = horizon;
  return env;
}

}  // namespace

TEST(Cem, SettingsChecks)
{
  EXPECT_EQ((CemSettings{32, 0.25, 0.1, 0.02}).elites(), 8);
  EXPECT_EQ((CemSettings{3, 0.01, 0.1, 0.02}).elites(), 1);
  EXPECT_THROW((CemSettings{1, 0.5, 0.1, 0.02}).check(), std::invalid_argument);
  EXPECT_THROW((CemSettings{8, 0.9, 0.1, 0.02}).check(), std::invalid_argument);
  EXPECT_THROW((CemSettings{8, 0.25, 0.0, 0.02}).check(), std::invalid_argument);
}

TEST(Cem, SamplingIsSeeded)
{
  const CrossEntropySearch cem(std::vector<double>(5, 1.0), CemSettings{6, 0.5, 0.2, 0.01});
  EXPECT_EQ(cem.sample(3), cem.sample(3));
  EXPECT_NE(cem.sample(3), cem.sample(4));
  EXPECT_EQ(cem.sample(3).size(), 30u);
}

TEST(Cem, UpdateMovesTowardElitesAndFloorsStd)
{
  CrossEntropySearch cem({0.0}, CemSettings{4, 0.5, 1.0, 0.05});
  const std::vector<double> members = {1.0, 2.0, -5.0, 2.0};
  const std::vector<double> scores = {10.0, 9.0, -1.0, 9.0};
  cem.update(members, scores);
  // elites are the members scoring 10 and 9 (the first 2.0 wins the tie by index)
  EXPECT_DOUBLE_EQ(cem.mean()[0], 1.5);
  EXPECT_GE(cem.std_dev()[0], 0.05);

  CrossEntropySearch flat({0.0}, CemSettings{4, 0.5, 1.0, 0.05});
  flat.update(std::vector<double>{0.0, 0.0, 0.0, 0.0}, std::vector<double>{1.0, 1.0, 1.0, 1.0});
  EXPECT_EQ(flat.std_dev()[0], 0.05);
}

TEST(Cem, TiesPreferSmallerNorm)
{
  CrossEntropySearch cem({0.0, 0.0}, CemSettings{4, 0.25, 1.0, 0.01});
  const std::vector<double> members = {3.0, 3.0, 0.1, -0.1, -2.0, 2.0, 0.5, 0.5};
  cem.update(members, std::vector<double>(4, 0.0));
  EXPECT_DOUBLE_EQ(cem.mean()[0], 0.1);
  EXPECT_DOUBLE_EQ(cem.mean()[1], -0.1);
}

TEST(Cem, FailedMembersNeverBecomeElites)
{
  CrossEntropySearch cem({0.0}, CemSettings{4, 0.25, 1.0, 0.01});
  const double ninf = -std::numeric_limits<double>::infinity();
  cem.update(std::vector<double>{9.0, 1.0, 8.0, 7.0}, std::vector<double>{ninf, -3.0, ninf, ninf});
  EXPECT_DOUBLE_EQ(cem.mean()[0], 1.0);
}

// Quadratic bowl with its optimum at the origin.
TEST(Cem, QuadraticSurrogateConverges)
{
  constexpr std::size_t kDim = 10;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<double> start(kDim);
    for (auto& x : start) x = n(rng);
    CrossEntropySearch cem(start, CemSettings{32, 0.25, 0.3, 1e-9});
    for (int g = 0; g < 30; ++g) {
      const auto members = cem.sample(derive_seed(seed, "gen/" + std::to_string(g)));
      std::vector<double> scores(32);
      for (std::size_t i = 0; i < 32; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < kDim; ++k) s += members[i * kDim + k] * members[i * kDim + k];
        scores[i] = -s;
      }
      cem.update(members, scores);
    }
    EXPECT_LT(norm(cem.mean()), 0.1 * norm(start)) << "seed " << seed;
  }
}

TEST(Policy, ArchitectureAndZeros)
{
  const auto arch = policy_architecture(sim::PhysicsConfig{});
  EXPECT_EQ(arch.inputs, sim::kObservationCount);
  EXPECT_EQ(arch.outputs, sim::kJointCount);
  EXPECT_EQ(arch.parameter_count(), (21u * 32 + 32) + (32u * 32 + 32) + (32u * 6 + 6));
  const auto zeros = PolicyParams::zeros(arch);
  EXPECT_EQ(zeros.weights.size(), arch.parameter_count());
  PolicyEvaluator eval(arch);
  std::vector<double> in(arch.inputs, 0.7), out(arch.outputs, 1.0);
  eval.forward(zeros.weights, in, out);
  for (double o : out) EXPECT_EQ(o, 0.0);
}

TEST(Policy, ForwardOracle)
{
  MlpArchitecture arch;
  arch.inputs = 2;
  arch.hidden = {3};
  arch.outputs = 1;
  arch.output_scale = 2.0;
  std::vector<double> w(arch.parameter_count());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 0.1 * static_cast<double>(i) - 0.5;
  const std::vector<double> x = {0.3, -1.2};
  // hidden: W1 (3x2) row-major then b1 (3); output: W2 (1x3) then b2
  double h[3];
  for (int r = 0; r < 3; ++r) h[r] = std::tanh(w[r * 2] * x[0] + w[r * 2 + 1] * x[1] + w[6 + r]);
  const double expect = 2.0 * std::tanh(w[9] * h[0] + w[10] * h[1] + w[11] * h[2] + w[12]);
  PolicyEvaluator eval(arch);
  std::vector<double> out(1);
  eval.forward(w, x, out);
  EXPECT_NEAR(out[0], expect, 1e-15);
}

TEST(Policy, JsonRoundTripAndCheck)
{
  auto p = PolicyParams::zeros(policy_architecture(sim::PhysicsConfig{}));
  p.weights[3] = 0.25;
  EXPECT_EQ(policy_from_json(to_json(p)), p);
  p.weights.pop_back();
  EXPECT_THROW(p.check(), std::invalid_argument);
}

TEST(TrainConfig, Checks)
{
  TrainConfig c;
  EXPECT_NO_THROW(c.check());
  c.epoch_freq = 0;
  EXPECT_THROW(c.check(), std::exception);
  c = {};
  c.population = 2;
  c.elite_fraction = 0.9;
  EXPECT_THROW(c.check(), std::exception);
}

TEST(Train, WindowsAndInvariants)
{
  const auto reward = program("component s = vel_x\ncomponent u = -abs(torso_pitch)\ntotal = s + 0.5 * u");
  TrainConfig c = small_config();
  c.generations = 10;
  c.epoch_freq = 4;
  const auto r = train(reward, short_env(), c);
  EXPECT_EQ(r.termination, Termination::completed);
  ASSERT_EQ(r.windows.size(), 3u);  // ceil(10 / 4)
  for (std::size_t i = 0; i < r.windows.size(); ++i) {
    const auto& w = r.windows[i];
    EXPECT_EQ(w.window, static_cast<int>(i));
    EXPECT_EQ(w.first_generation, static_cast<int>(i) * 4);
    if (i > 0) EXPECT_EQ(w.first_generation, r.windows[i - 1].last_generation + 1);
    ASSERT_EQ(w.components.size(), 2u);
    for (const auto& [name, s] : w.components) {
      EXPECT_LE(s.min, s.mean) << name;
      EXPECT_LE(s.mean, s.max) << name;
    }
  }
  EXPECT_EQ(r.windows.back().last_generation, 9);
  ASSERT_EQ(r.best_fitness_history.size(), 10u);
  for (std::size_t g = 1; g < r.best_fitness_history.size(); ++g) {
    EXPECT_GE(r.best_fitness_history[g], r.best_fitness_history[g - 1]);
  }
  EXPECT_EQ(r.best_fitness, r.best_fitness_history.back());
  EXPECT_NO_THROW(r.best_policy.check());
}

TEST(Train, Deterministic)
{
  const auto reward = program("component s = vel_x\ntotal = s");
  auto a = train(reward, short_env(), small_config());
  auto b = train(reward, short_env(), small_config());
  a.wall_clock_seconds = b.wall_clock_seconds = 0.0;
  EXPECT_EQ(a, b);
  auto c = small_config();
  c.workers = 3;
  auto d = train(reward, short_env(), c);
  d.wall_clock_seconds = 0.0;
  EXPECT_EQ(a, d);
}

TEST(Train, DefectiveRewardStopsEarly)
{
  const auto reward = program("component s = log(vel_x - 1000.0)\ntotal = s");
  const auto r = train(reward, short_env(), small_config());
  EXPECT_EQ(r.termination, Termination::defective_reward);
  EXPECT_EQ(r.generations_completed, 1);
  EXPECT_FALSE(r.error.empty());
}

TEST(Train, ReportJsonRoundTrip)
{
  const auto reward = program("component s = vel_x\ntotal = s");
  const auto r = train(reward, short_env(), small_config());
  EXPECT_EQ(train_report_from_json(to_json(r, true)), r);
  const auto without = train_report_from_json(to_json(r, false));
  EXPECT_EQ(without.windows, r.windows);
  EXPECT_TRUE(without.best_policy.weights.empty());
}

TEST(Train, VelocityRewardImprovesOverFirstGeneration)
{
  const auto reward = program("component f = vel_x\ntotal = f");
  TrainConfig c;
  c.population = 32;
  c.generations = 40;
  c.horizon = 480;
  c.episodes = 1;
  c.seed = 7;
  const auto r = train(reward, short_env(480), c);
  ASSERT_EQ(r.best_fitness_history.size(), 40u);
  EXPECT_GT(r.best_fitness, r.best_fitness_history.front());
}

TEST(EvaluatePolicy, ZeroPolicyAndDeterminism)
{
  const auto env = short_env(240);
  const auto reward = program("component f = vel_x\ntotal = f");
  const auto zero = PolicyParams::zeros(policy_architecture(env.physics));
  const auto seeds = evaluation_seeds(3, 5);
  ASSERT_EQ(seeds.size(), 5u);
  const auto z = evaluate_policy(zero, reward, env, seeds);
  EXPECT_EQ(z.max, 0.0);
  EXPECT_EQ(z.mean, 0.0);

  auto p = zero;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 0.3);
  for (auto& w : p.weights) w = n(rng);
  const auto one = evaluate_policy(p, reward, env, {seeds[0]});
  EXPECT_EQ(one.max, one.mean);
  const auto a = evaluate_policy(p, reward, env, seeds);
  const auto b = evaluate_policy(p, reward, env, seeds);
  EXPECT_EQ(a.max, b.max);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_LE(a.mean, a.max);
}
