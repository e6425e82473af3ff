#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

#include "golden.hpp"
#include "stride/dsl/parser.hpp"
#include "stride/sim/descriptor.hpp"
#include "stride/sim/world.hpp"
#include "stride/trainer/rollout.hpp"

using namespace stride;
using namespace stride::sim;

namespace {

EnvConfig env_with(TerrainKind kind)
{
  EnvConfig env;
  env.terrain.kind = kind;
  return env;
}

const std::array<double, kJointCount> kZeroTorque{};

}  // namespace

TEST(Terrain, FlatIsZeroEverywhere)
{
  const auto t = Terrain::make(TerrainKind::flat, {}, 123);
  for (double x = -50.0; x <= 100.0; x += 0.37) EXPECT_EQ(t.height_at(x), 0.0);
}

TEST(Terrain, WaveClosedForm)
{
  TerrainParams p;
  p.amplitude = 0.1;
  p.wavelength = 2.0;
  const auto t = Terrain::make(TerrainKind::wave, p, 0);
  EXPECT_NEAR(t.height_at(0.5), 0.1, 1e-12);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-20.0, 80.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    const double expect = 0.1 * std::sin(2.0 * std::numbers::pi * x / 2.0);
    ASSERT_NEAR(t.height_at(x), expect, 1e-12 * std::max(1.0, std::fabs(expect)));
  }
}

TEST(Terrain, RandomUniformIsSeededAndPiecewiseConstant)
{
  TerrainParams p;
  p.height_range = 0.05;
  const auto a = Terrain::make(TerrainKind::random_uniform, p, 42);
  const auto b = Terrain::make(TerrainKind::random_uniform, p, 42);
  const auto c = Terrain::make(TerrainKind::random_uniform, p, 43);
  ASSERT_FALSE(a.cell_heights().empty());
  EXPECT_EQ(a.cell_heights(), b.cell_heights());
  EXPECT_NE(a.cell_heights(), c.cell_heights());
  for (std::size_t k = 0; k < a.cell_heights().size(); ++k) {
    const double h = a.cell_heights()[k];
    EXPECT_LE(std::fabs(h), 0.05);
    const double x0 = (static_cast<double>(a.first_cell()) + static_cast<double>(k)) * p.cell_width;
    EXPECT_EQ(a.height_at(x0 + 0.01), h);
    EXPECT_EQ(a.height_at(x0 + p.cell_width * 0.99), h);
  }
}

TEST(Terrain, RejectsBadParameters)
{
  TerrainParams p;
  p.wavelength = 0.0;
  EXPECT_THROW(Terrain::make(TerrainKind::wave, p, 0), std::invalid_argument);
  p = {};
  p.height_range = -1.0;
  EXPECT_THROW(Terrain::make(TerrainKind::random_uniform, p, 0), std::invalid_argument);
}

TEST(Simulator, FreeFallMatchesBallisticDrop)
{
  const Simulator sim(env_with(TerrainKind::flat));
  WorldState s = sim.reset(0);
  s.q[1] = 2.0;
  const double z0 = s.z();
  const double g = sim.physics().gravity;
  const int steps = 96;  // 0.4 s, feet still well above the ground
  for (int i = 1; i <= steps; ++i) {
    sim.step(s, kZeroTorque);
    ASSERT_FALSE(s.contact[0] || s.contact[1]);
    const double t = i * sim.physics().dt;
    const double expect = 0.5 * g * t * t;
    ASSERT_NEAR(z0 - s.z(), expect, 1e-6 * expect) << "step " << i;
  }
}

TEST(Simulator, StepIsDeterministic)
{
  const Simulator sim(env_with(TerrainKind::wave));
  const std::array<double, kJointCount> torques{10.0, -4.0, 2.0, -10.0, 4.0, -2.0};
  WorldState a = sim.reset(9);
  for (int i = 0; i < 200; ++i) sim.step(a, torques);
  WorldState b = a;
  WorldState c = a;
  sim.step(b, torques);
  sim.step(c, torques);
  EXPECT_EQ(b.q, c.q);
  EXPECT_EQ(b.qd, c.qd);
}

TEST(Simulator, ZeroTorqueStandingSettles)
{
  const Simulator sim(env_with(TerrainKind::flat));
  WorldState s = sim.reset(0);
  const double z0 = s.z();
  const int steps = static_cast<int>(std::round(1.0 / sim.physics().dt));
  for (int i = 0; i < steps; ++i) {
    sim.step(s, kZeroTorque);
    ASSERT_TRUE(s.finite());
  }
  EXPECT_LT(std::fabs(s.z() - z0), 0.05);
  EXPECT_FALSE(sim.fallen(s));
}

TEST(Simulator, JointAnglesStayWithinLimits)
{
  const Simulator sim(env_with(TerrainKind::random_uniform));
  WorldState s = sim.reset(3);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  for (int i = 0; i < 600 && !sim.fallen(s); ++i) {
    std::array<double, kJointCount> t{};
    for (auto& x : t) x = u(rng);
    sim.step(s, t);
    ASSERT_TRUE(s.finite());
    for (std::size_t j = 0; j < kJointCount; ++j) {
      ASSERT_GE(s.joint(j), kJointLimits[j].lower - 1e-9);
      ASSERT_LE(s.joint(j), kJointLimits[j].upper + 1e-9);
    }
  }
}

TEST(Observe, ResetHasZeroForwardVelocity)
{
  const Simulator sim(env_with(TerrainKind::flat));
  EXPECT_EQ(sim.observe(sim.reset(0)).at("vel_x"), 0.0);
}

TEST(Observe, KeysMatchDescriptorForRandomStates)
{
  const Simulator sim(env_with(TerrainKind::wave));
  const auto d = describe(sim.config());
  const auto names = d.variable_names();
  const std::set<std::string> expected(names.begin(), names.end());
  EXPECT_EQ(names, observation_names());
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 0.5);
  for (int i = 0; i < 100; ++i) {
    WorldState s = sim.reset(static_cast<std::uint64_t>(i));
    for (auto& v : s.qd) v = n(rng);
    s.q[0] += 5.0 * n(rng);
    std::set<std::string> got;
    for (const auto& [k, v] : sim.observe(s)) got.insert(k);
    ASSERT_EQ(got, expected);
  }
}

TEST(Observe, HeightAboveTerrainOnWave)
{
  const Simulator sim(env_with(TerrainKind::wave));
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> x(-5.0, 40.0), z(0.3, 1.5);
  for (int i = 0; i < 100; ++i) {
    WorldState s = sim.reset(0);
    s.q[0] = x(rng);
    s.q[1] = z(rng);
    const auto obs = sim.observe(s);
    const double expect = s.q[1] - sim.terrain().height_at(s.q[0]);
    ASSERT_NEAR(obs.at("height_above_terrain"), expect, 1e-12);
    ASSERT_EQ(obs.at("pos_x"), s.q[0]);
  }
}

TEST(Fitness, ClampedRatio)
{
  PhysicsConfig p;
  p.target_distance = 10.0;
  EXPECT_EQ(fitness(0.0, p), 0.0);
  EXPECT_EQ(fitness(-3.0, p), 0.0);
  EXPECT_EQ(fitness(10.0, p), 1.0);
  EXPECT_EQ(fitness(20.0, p), 1.0);
  EXPECT_DOUBLE_EQ(fitness(2.5, p), 0.25);
}

TEST(Descriptor, TaskPropagatesAndNamesAreUnique)
{
  EnvConfig env;
  env.task = "walk backwards, slowly";
  const auto d = describe(env);
  EXPECT_EQ(d.task, env.task);
  const auto names = d.variable_names();
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(), names.size());
  EXPECT_EQ(names.size(), kObservationCount);
  EXPECT_EQ(d.actions.size(), kJointCount);
}

TEST(Descriptor, JsonRoundTrip)
{
  const auto d = describe(env_with(TerrainKind::random_uniform));
  const auto back = EnvDescriptor::from_json(d.to_json());
  EXPECT_EQ(back.canonical_json(), d.canonical_json());
}

TEST(Descriptor, GoldenSnapshot)
{
  stride::testkit::expect_golden("descriptor_default.json", describe(EnvConfig{}).to_json().dump(2) + "\n");
}

TEST(Rollout, ConstantRewardSumsPerStep)
{
  const EnvConfig env = env_with(TerrainKind::flat);
  const auto reward = *dsl::parse("component c = 1.0\ntotal = c").program;
  const auto policy = trainer::PolicyParams::zeros(trainer::policy_architecture(env.physics));
  const auto r = trainer::rollout(policy, reward, env, 100, 1);
  ASSERT_FALSE(r.failed());
  EXPECT_FALSE(r.episode.fell);
  EXPECT_EQ(r.episode.steps, 100);
  EXPECT_EQ(r.episode.component_sums.at("c"), 100.0);
  EXPECT_EQ(r.total_reward, 100.0);
}

TEST(Rollout, ZeroPolicyGoesNowhere)
{
  const EnvConfig env = env_with(TerrainKind::flat);
  const auto reward = *dsl::parse("component s = vel_x\ntotal = s").program;
  const auto policy = trainer::PolicyParams::zeros(trainer::policy_architecture(env.physics));
  const auto r = trainer::rollout(policy, reward, env, 480, 1);
  // it sways a few centimetres on its passive springs but stays up
  EXPECT_LT(std::fabs(r.episode.distance), 0.1);
  EXPECT_FALSE(r.episode.fell);
  EXPECT_EQ(fitness(r.episode, env.physics), 0.0);
}

TEST(Rollout, Deterministic)
{
  const EnvConfig env = env_with(TerrainKind::wave);
  const auto reward = *dsl::parse("component s = vel_x\ncomponent u = -abs(torso_pitch)\ntotal = s + u").program;
  auto policy = trainer::PolicyParams::zeros(trainer::policy_architecture(env.physics));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 0.3);
  for (auto& w : policy.weights) w = n(rng);
  const auto a = trainer::rollout(policy, reward, env, 600, 17);
  const auto b = trainer::rollout(policy, reward, env, 600, 17);
  EXPECT_EQ(a.episode.distance, b.episode.distance);
  EXPECT_EQ(a.episode.steps, b.episode.steps);
  EXPECT_EQ(a.episode.component_sums, b.episode.component_sums);
  EXPECT_EQ(a.total_reward, b.total_reward);
}
