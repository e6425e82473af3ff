// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 only when
// all of them pass. Criterion numbers given on the command line restrict the
// run to those criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "golden.hpp"
#include "naive_interpreter.hpp"
#include "random_program.hpp"
#include "stride/common/io.hpp"
#include "stride/common/seed.hpp"
#include "stride/dsl/evaluator.hpp"
#include "stride/dsl/parser.hpp"
#include "stride/dsl/printer.hpp"
#include "stride/llm/prompts.hpp"
#include "stride/search/batch.hpp"
#include "stride/search/config.hpp"
#include "stride/search/metrics.hpp"
#include "stride/search/orchestrator.hpp"
#include "stride/sim/descriptor.hpp"
#include "stride/sim/world.hpp"
#include "stride/trainer/cem.hpp"
#include "stride/trainer/train.hpp"

using namespace stride;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Verdict
{
  bool pass = false;
  std::string detail;
};

struct Criterion
{
  int number;
  std::string name;
  std::function<Verdict()> check;
};

std::string fmt(const char* f, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t)
{
  return std::chrono::duration<double>(Clock::now() - t).count();
}

fs::path configs_dir()
{
  return fs::path(testkit::test_data_dir()).parent_path() / "configs";
}

fs::path scratch(const std::string& name)
{
  const auto d = fs::temp_directory_path() / ("stride_acceptance_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

search::RunConfig shipped(const std::string& file)
{
  return search::load_run_config((configs_dir() / file).string());
}

// 1. Ten scripted runs per terrain with N=3, K=10, then the rate table.
Verdict protocol_shape()
{
  const auto started = Clock::now();
  std::vector<search::LabeledAggregate> columns;
  int failed = 0;
  for (const std::string terrain : {"flat", "wave", "random_uniform"}) {
    auto c = shipped(terrain + ".json");
    if (c.loop.iterations != 3 || c.loop.samples != 10 || c.batch.runs != 10) {
      return {false, terrain + ".json does not describe N=3, K=10, 10 runs"};
    }
    c.output_dir = scratch("protocol_" + terrain).string();
    const auto result = search::run_batch(c);
    failed += result.failed;
    for (const auto& e : result.runs) {
      if (e.ok && e.summary.executable_rate.size() != 3) return {false, terrain + ": run without 3 iterations"};
    }
    columns.emplace_back(terrain, result.aggregate);
  }
  const double elapsed = seconds_since(started);
  const std::string table = search::rate_table_text(columns);
  std::printf("%s", table.c_str());
  int rows = 0;
  for (const auto& [label, a] : columns) rows = std::max(rows, static_cast<int>(a.mean_executable_rate.size()));
  const bool ok = failed == 0 && rows == 3 && elapsed < 15 * 60;
  return {ok, fmt("30 runs, %d failed, %d iteration rows, %.0f s (limit 900 s)", failed, rows, elapsed)};
}

// 2. Iteration-1 best with the hand-written reward in slot 1 vs without.
// Both arms keep the guidance text, so the prompts and hence the scripted
// candidates match and the pairs differ only in the seeded program.
Verdict human_init_dominance()
{
  const auto with = shipped("flat_human_init.json");
  auto without = with;
  without.human_init.source.clear();
  without.human_init.source_file.clear();
  int wins = 0;
  std::string pairs;
  for (int i = 0; i < 10; ++i) {
    auto a = with;
    auto b = without;
    a.loop.seed = b.loop.seed = search::batch_run_seed(with.loop.seed, i);
    const double init = search::run(a).iterations.at(0).best_fitness;
    const double plain = search::run(b).iterations.at(0).best_fitness;
    wins += init >= plain ? 1 : 0;
    pairs += fmt(" %.3f/%.3f", init, plain);
  }
  return {wins >= 9, fmt("%d/10 pairs with init >= no-init (need 9):%s", wins, pairs.c_str())};
}

// 3. Global best never decreases.
Verdict monotone_best()
{
  auto c = shipped("flat.json");
  c.trainer.population = 8;
  c.trainer.generations = 3;
  c.trainer.horizon = 120;
  c.trainer.eval_episodes = 2;
  c.env.physics.horizon_steps = 120;
  std::mt19937_64 rng(20260101);
  int violations = 0;
  for (int r = 0; r < 100; ++r) {
    c.loop.seed = rng();
    const auto record = search::run(c);
    double last = 0.0;
    for (const auto& it : record.iterations) {
      if (it.global_best_fitness() < last) ++violations;
      last = it.global_best_fitness();
    }
  }
  return {violations == 0, fmt("100 runs, %d violations", violations)};
}

// 4. The loop improves on its first iteration, and the velocity reward beats
// the constant one under shared seeds.
Verdict search_improves()
{
  auto c = shipped("flat.json");
  c.trainer.population = 32;
  c.trainer.generations = 30;
  int improved = 0;
  std::string runs;
  for (int i = 0; i < 10; ++i) {
    c.loop.seed = search::batch_run_seed(4, i);
    const auto s = search::compute_metrics(search::run(c));
    const bool better = s.best_fitness > s.iteration_best.at(0);
    improved += better ? 1 : 0;
    runs += fmt(" %.3f->%.3f", s.iteration_best.at(0), s.best_fitness);
  }

  const auto velocity = *dsl::parse("component speed = vel_x\ntotal = speed").program;
  const auto constant = *dsl::parse("component alive = 1.0\ntotal = alive").program;
  int ordered = 0;
  std::string pairs;
  for (int i = 0; i < 10; ++i) {
    trainer::TrainConfig tc = c.trainer;
    tc.seed = derive_seed(77, "pair/" + std::to_string(i));
    const auto eval = search::fitness_seeds(tc.seed, tc.eval_episodes);
    const double fv = trainer::evaluate_policy(trainer::train(velocity, c.env, tc).best_policy, velocity, c.env, eval).max;
    const double fc = trainer::evaluate_policy(trainer::train(constant, c.env, tc).best_policy, constant, c.env, eval).max;
    ordered += fv > fc ? 1 : 0;
    pairs += fmt(" %.3f/%.3f", fv, fc);
  }
  return {improved >= 8 && ordered == 10,
          fmt("improved %d/10 (need 8):%s; velocity > constant %d/10 (need 10):%s", improved, runs.c_str(), ordered,
              pairs.c_str())};
}

// 5. Production evaluators against the naive interpreter, and print/parse
// round trips.
Verdict dsl_oracle()
{
  const auto started = Clock::now();
  std::mt19937_64 rng(5);
  const std::vector<std::string> names = {"a", "b", "c", "d"};
  int compared = 0;
  int mismatches = 0;
  double worst = 0.0;
  testkit::RandomProgramOptions opt;
  opt.domain_safe = true;
  while (compared < 1000) {
    const auto p = testkit::random_program(rng, names, opt);
    const auto bindings = testkit::random_bindings(rng, names);
    const auto ref = testkit::naive_evaluate(p, bindings);
    if (!ref) continue;  // outside the domain; failure handling is a unit test
    ++compared;
    const auto tree = dsl::evaluate(p, bindings);
    const auto compiled = dsl::CompiledProgram::compile(p, names);
    auto scratch_space = compiled.make_scratch();
    std::vector<double> inputs;
    for (const auto& n : names) inputs.push_back(bindings.at(n));
    std::vector<double> comps(compiled.component_names().size());
    double total = 0.0;
    const bool ran = !compiled.run(inputs, scratch_space, comps, total);
    const auto rel = [](double got, double want) { return std::fabs(got - want) / std::max(1.0, std::fabs(want)); };
    double err = std::max(rel(tree.total, ref->total), ran ? rel(total, ref->total) : 1.0);
    for (std::size_t k = 0; k < comps.size(); ++k) {
      const double want = ref->components.at(compiled.component_names()[k]);
      err = std::max({err, rel(comps[k], want), rel(tree.per_component.at(compiled.component_names()[k]), want)});
    }
    worst = std::max(worst, err);
    if (err > 1e-12) ++mismatches;
  }
  int round_trips = 0;
  std::mt19937_64 rng2(6);
  for (int i = 0; i < 500; ++i) {
    const auto p = testkit::random_program(rng2, names);
    const std::string text = dsl::canonical_print(p);
    const auto r = dsl::parse(text);
    if (r.ok() && dsl::structurally_equal(*r.program, p) && dsl::canonical_print(*r.program) == text) ++round_trips;
  }
  const double elapsed = seconds_since(started);
  return {mismatches == 0 && round_trips == 500 && elapsed < 30.0,
          fmt("%d/1000 mismatches (worst rel %.1e), %d/500 round trips, %.2f s", mismatches, worst, round_trips,
              elapsed)};
}

// 6. Free fall, terrain closed forms, seeded terrain reproducibility.
Verdict physics_oracles()
{
  const sim::Simulator flat(sim::EnvConfig{});
  auto s = flat.reset(0);
  s.q[1] = 10.0;
  const double z0 = s.z();
  const double g = flat.physics().gravity;
  const std::array<double, sim::kJointCount> zero{};
  double worst_fall = 0.0;
  const int steps = static_cast<int>(std::round(1.0 / flat.physics().dt));
  for (int i = 1; i <= steps; ++i) {
    flat.step(s, zero);
    if (s.contact[0] || s.contact[1]) return {false, "contact during free fall"};
    const double t = i * flat.physics().dt;
    const double want = 0.5 * g * t * t;
    worst_fall = std::max(worst_fall, std::fabs((z0 - s.z()) - want) / want);
  }

  sim::TerrainParams p;
  double worst_terrain = 0.0;
  const auto plain = sim::Terrain::make(sim::TerrainKind::flat, p, 1);
  const auto wave = sim::Terrain::make(sim::TerrainKind::wave, p, 1);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-20.0, 120.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng);
    const double want = p.amplitude * std::sin(2.0 * std::numbers::pi * x / p.wavelength);
    worst_terrain = std::max({worst_terrain, std::fabs(plain.height_at(x)),
                              std::fabs(wave.height_at(x) - want) / std::max(1.0, std::fabs(want))});
  }

  sim::EnvConfig rough;
  rough.terrain.kind = sim::TerrainKind::random_uniform;
  rough.terrain.seed = 1234;
  const sim::Simulator r1(rough);
  const sim::Simulator r2(rough);
  bool identical = r1.terrain().cell_heights() == r2.terrain().cell_heights();
  auto a = r1.reset(3);
  auto b = r2.reset(3);
  const std::array<double, sim::kJointCount> torques{12.0, -6.0, 3.0, -12.0, 6.0, -3.0};
  for (int i = 0; i < 480 && !r1.fallen(a); ++i) {
    r1.step(a, torques);
    r2.step(b, torques);
  }
  identical = identical && a.q == b.q && a.qd == b.qd;
  rough.terrain.seed = 1235;
  const bool seed_matters = sim::Simulator(rough).terrain().cell_heights() != r1.terrain().cell_heights();

  const bool ok = worst_fall <= 1e-6 && worst_terrain <= 1e-12 && identical && seed_matters;
  return {ok, fmt("free fall worst rel %.2e over 1 s, terrain worst %.1e, random_uniform %s", worst_fall, worst_terrain,
                  identical && seed_matters ? "bit-identical per seed" : "NOT reproducible")};
}

// 7. CEM on -|theta|^2.
Verdict trainer_oracle()
{
  constexpr std::size_t kDim = 10;
  constexpr std::size_t kPop = 32;
  int converged = 0;
  double worst = 0.0;
  const auto norm = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  };
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed + 100);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<double> start(kDim);
    for (auto& x : start) x = n(rng);
    trainer::CrossEntropySearch cem(start, trainer::CemSettings{kPop, 0.25, 0.3, 1e-9});
    for (int gen = 0; gen < 30; ++gen) {
      const auto members = cem.sample(derive_seed(seed, "surrogate/" + std::to_string(gen)));
      std::vector<double> scores(kPop);
      for (std::size_t i = 0; i < kPop; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k < kDim; ++k) s += members[i * kDim + k] * members[i * kDim + k];
        scores[i] = -s;
      }
      cem.update(members, scores);
    }
    const double ratio = norm(cem.mean()) / norm(start);
    worst = std::max(worst, ratio);
    converged += ratio < 0.1 ? 1 : 0;
  }
  return {converged == 10, fmt("%d/10 seeds below 10%% (worst %.4f), dimension %zu", converged, worst, kDim)};
}

// 8. Same config twice, identical records up to timing.
Verdict determinism()
{
  const auto c = shipped("flat.json");
  const auto a = search::strip_timing(search::to_json(search::run(c)));
  const auto b = search::strip_timing(search::to_json(search::run(c)));
  return {a == b, a == b ? "records identical after stripping timing" : "records differ"};
}

// 9. Prompts against their golden files and the report they describe.
Verdict prompt_fidelity()
{
  const auto d = sim::describe(sim::EnvConfig{});
  const std::string task = "sprint forward as fast as possible";
  const auto initial = llm::build_initial_prompt(d, task);
  const auto report = testkit::synthetic_report();
  llm::ReflectionInput in;
  in.candidate_id = "1-3";
  in.source = "let upright = exp(-abs(torso_pitch) / 0.5)\ncomponent speed = vel_x\ncomponent posture = upright\n"
              "total = speed + 0.01 * posture\n";
  in.fitness = 0.3;
  in.report = &report;
  in.epoch_freq = 5;
  in.iteration = 2;
  in.iterations = 3;
  in.error_digest = {"1-4 parse_failed: 1:7: error[syntax]: expected an expression"};
  const auto reflection = llm::build_reflection_prompt(d, task, in);

  const auto golden = [](const std::string& name) {
    return read_file((fs::path(testkit::test_data_dir()) / "golden" / name).string());
  };
  const bool goldens = golden("initial_system.txt") == initial.system && golden("initial_user.txt") == initial.user &&
                       golden("reflection_user.txt") == reflection.user;

  int missing = 0;
  for (const auto& v : d.observations) {
    for (const auto* text : {&initial.user, &reflection.user}) {
      if (text->find("- " + v.name + " [") == std::string::npos) ++missing;
    }
  }
  int rows = 0;
  int rows_found = 0;
  for (const auto& w : report.windows) {
    for (const auto& [name, s] : w.components) {
      ++rows;
      const std::string row = name + ": max " + llm::format_number(s.max) + ", mean " + llm::format_number(s.mean) +
                              ", min " + llm::format_number(s.min);
      rows_found += reflection.user.find(row) != std::string::npos ? 1 : 0;
    }
  }
  const std::size_t placeholders = llm::unresolved_placeholders(initial.system).size() +
                                   llm::unresolved_placeholders(initial.user).size() +
                                   llm::unresolved_placeholders(reflection.user).size();
  const bool ok = goldens && missing == 0 && rows_found == rows && placeholders == 0;
  return {ok, fmt("goldens %s, %zu variables (%d missing), %d/%d table rows, %zu placeholders",
                  goldens ? "match" : "DIFFER", d.observations.size(), missing, rows_found, rows, placeholders)};
}

// Slot 1 answers with a fenced program, the other nine without any fence.
class MostlyFenceless final : public llm::GeneratorBackend
{
public:
  std::vector<llm::GenerationResult> generate(const llm::PromptBundle&, int k) override
  {
    std::vector<llm::GenerationResult> out;
    for (int i = 0; i < k; ++i) {
      const std::string raw = i == 0 ? testkit::fenced("component speed = vel_x\ntotal = speed")
                                     : "Reward forward velocity and penalize falling.";
      out.push_back(llm::GenerationResult::extracted(raw, dsl::Origin::llm, 0.0));
    }
    return out;
  }
};

// 10. Nine fence-less answers out of ten.
Verdict failure_isolation()
{
  const auto c = shipped("flat.json");
  MostlyFenceless backend;
  const auto record = search::run(c, backend);
  bool ok = static_cast<int>(record.iterations.size()) == c.loop.iterations && !record.no_viable_candidate;
  std::string rates;
  for (const auto& it : record.iterations) {
    int extraction = 0;
    for (const auto& cand : it.candidates) extraction += cand.status == search::CandidateStatus::extraction_failed;
    ok = ok && it.candidates.size() == 10 && extraction == 9 && it.executable_rate == 0.1;
    rates += fmt(" %.1f", it.executable_rate);
  }
  return {ok, fmt("%zu iterations completed, executable rates%s", record.iterations.size(), rates.c_str())};
}

}  // namespace

int main(int argc, char** argv)
{
  const std::vector<Criterion> criteria = {
      {1, "protocol-shape reproduction", protocol_shape},
      {2, "human-init dominance", human_init_dominance},
      {3, "monotone global best", monotone_best},
      {4, "search improves", search_improves},
      {5, "dsl oracle equivalence", dsl_oracle},
      {6, "physics oracles", physics_oracles},
      {7, "trainer oracle", trainer_oracle},
      {8, "end-to-end determinism", determinism},
      {9, "prompt fidelity", prompt_fidelity},
      {10, "failure isolation", failure_isolation},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.contains(c.number)) continue;
    const auto started = Clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += v.pass ? 0 : 1;
    std::printf("%s %2d %s: %s [%.1f s]\n", v.pass ? "PASS" : "FAIL", c.number, c.name.c_str(), v.detail.c_str(),
                seconds_since(started));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
