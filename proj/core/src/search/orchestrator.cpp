#include "stride/search/orchestrator.hpp"

#include <chrono>
#include <cstdio>
#include <set>

#include "stride/common/json_reader.hpp"
#include "stride/common/parallel.hpp"
#include "stride/common/seed.hpp"
#include "stride/common/version.hpp"
#include "stride/dsl/parser.hpp"
#include "stride/dsl/printer.hpp"
#include "stride/dsl/validator.hpp"
#include "stride/sim/world.hpp"

namespace stride::search {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t)
{
  return std::chrono::duration<double>(Clock::now() - t).count();
}

TrainingOutcome train_program(const dsl::RewardProgram& program, const std::string& canonical,
                              const EvaluationSettings& settings)
{
  TrainingOutcome out;
  try {
    trainer::TrainConfig tc = settings.train;
    tc.seed = training_seed(settings.run_seed, canonical);
    trainer::TrainReport report = trainer::train(program, settings.env, tc);
    if (report.termination != trainer::Termination::completed) {
      out.status = CandidateStatus::runtime_failed;
      out.diagnostics = "training stopped (" + std::string(trainer::to_string(report.termination)) + "): " + report.error;
      return out;
    }
    const auto stats = trainer::evaluate_policy(report.best_policy, program, settings.env,
                                                fitness_seeds(settings.run_seed, settings.train.eval_episodes));
    out.status = CandidateStatus::trained;
    out.evaluation = stats.episodes;
    out.fitness = stats.max;
    out.report = std::move(report);
  } catch (const std::exception& e) {
    out = {};
    out.status = CandidateStatus::runtime_failed;
    out.diagnostics = std::string("training failed: ") + e.what();
  }
  return out;
}

std::string first_line(const std::string& s, std::size_t limit)
{
  std::string line = s.substr(0, s.find('\n'));
  if (line.size() > limit) line = line.substr(0, limit - 3) + "...";
  return line;
}

std::string run_id(std::uint64_t seed)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "run-%016llx", static_cast<unsigned long long>(seed));
  return buf;
}

std::optional<std::string> check_human_init(const HumanInit& h, const std::vector<std::string>& variables)
{
  if (!h.has_source()) return std::nullopt;
  const auto parsed = dsl::parse(h.source);
  if (!parsed.ok()) return parsed.diagnostics.format(h.source, true);
  const auto diags = dsl::validate(*parsed.program, variables);
  if (diags.has_errors()) return diags.format(h.source, true);
  return std::nullopt;
}

}  // namespace

std::uint64_t training_seed(std::uint64_t run_seed, const std::string& canonical)
{
  return derive_seed(run_seed, "train:" + canonical);
}

std::vector<std::uint64_t> fitness_seeds(std::uint64_t run_seed, int episodes)
{
  return trainer::evaluation_seeds(derive_seed(run_seed, "eval"), episodes);
}

std::vector<Candidate> evaluate_candidates(const std::vector<llm::GenerationResult>& results, int iteration,
                                           const EvaluationSettings& settings, TrainingCache* cache)
{
  const std::vector<std::string> variables = sim::observation_names();
  std::vector<Candidate> out(results.size());
  std::vector<std::optional<dsl::RewardProgram>> programs(results.size());

  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    Candidate& c = out[i];
    c.iteration = iteration;
    c.index = static_cast<int>(i) + 1;
    c.id = std::to_string(iteration) + "-" + std::to_string(c.index);
    c.raw_response = r.raw_response;
    c.request_body = r.request_body;
    c.latency_seconds = r.latency_seconds;
    c.source = r.source;
    if (!r.source) {
      c.status = CandidateStatus::extraction_failed;
      c.diagnostics = r.failure;
      continue;
    }
    auto parsed = dsl::parse(*r.source);
    if (!parsed.ok()) {
      c.status = CandidateStatus::parse_failed;
      c.diagnostics = parsed.diagnostics.format(r.source->text(), true);
      continue;
    }
    c.canonical = dsl::canonical_print(*parsed.program);
    const auto diags = dsl::validate(*parsed.program, variables);
    if (diags.has_errors()) {
      c.status = CandidateStatus::validation_failed;
      c.diagnostics = diags.format(r.source->text(), true);
      continue;
    }
    programs[i] = std::move(parsed.program);
  }

  // Train each distinct program once.
  TrainingCache local;
  TrainingCache& known = cache != nullptr ? *cache : local;
  std::vector<std::size_t> pending;
  std::set<std::string> queued;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (programs[i] && !known.contains(out[i].canonical) && queued.insert(out[i].canonical).second) pending.push_back(i);
  }
  std::vector<TrainingOutcome> trained(pending.size());
  parallel_for(pending.size(), resolve_workers(settings.workers), [&](std::size_t p) {
    const std::size_t i = pending[p];
    trained[p] = train_program(*programs[i], out[i].canonical, settings);
  });
  for (std::size_t p = 0; p < pending.size(); ++p) known[out[pending[p]].canonical] = std::move(trained[p]);

  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!programs[i]) continue;
    const TrainingOutcome& o = known.at(out[i].canonical);
    out[i].status = o.status;
    out[i].diagnostics = o.diagnostics;
    out[i].report = o.report;
    out[i].evaluation = o.evaluation;
    out[i].fitness = o.fitness;
  }
  return out;
}

std::optional<Incumbent> select_best(const std::vector<Candidate>& candidates, const std::optional<Incumbent>& incumbent)
{
  std::optional<Incumbent> best = incumbent;
  const auto better = [](const Candidate& c, const Incumbent& b) {
    if (c.fitness != b.fitness) return c.fitness > b.fitness;
    if (c.iteration != b.iteration) return c.iteration < b.iteration;
    return c.index < b.index;
  };
  for (const auto& c : candidates) {
    if (!c.trained()) continue;
    if (!best || better(c, *best)) best = Incumbent{c.id, c.iteration, c.index, c.fitness};
  }
  return best;
}

std::vector<std::string> error_digest(const std::vector<Candidate>& candidates, std::size_t max_lines)
{
  std::vector<std::string> out;
  for (const auto& c : candidates) {
    if (c.trained()) continue;
    if (out.size() == max_lines) break;
    out.push_back(c.id + " " + std::string(to_string(c.status)) + ": " + first_line(c.diagnostics, 160));
  }
  return out;
}

RunRecord run(const RunConfig& config, llm::GeneratorBackend& backend, const IterationObserver& observer)
{
  const auto started = Clock::now();
  config.trainer.check();
  const std::vector<std::string> variables = sim::observation_names();
  if (auto problem = check_human_init(config.human_init, variables)) {
    throw ConfigError("human_init: program is not valid:\n" + *problem);
  }

  RunRecord record;
  record.run_id = run_id(config.loop.seed);
  record.tool_version = kToolVersion;
  record.config = to_json(config);
  record.descriptor = sim::describe(config.env);

  EvaluationSettings settings;
  settings.env = config.env;
  settings.train = config.trainer;
  settings.run_seed = config.loop.seed;
  settings.workers = config.loop.workers;

  llm::PromptOptions options;
  options.style_guidance = config.style_guidance;
  options.human_guidance = config.human_init.guidance;
  const llm::PromptBundle initial = llm::build_initial_prompt(record.descriptor, config.env.task, options);

  TrainingCache cache;
  std::optional<Incumbent> best;
  std::optional<Candidate> best_candidate;  // keeps the report with its policy

  for (int n = 1; n <= config.loop.iterations; ++n) {
    const auto iteration_started = Clock::now();
    IterationRecord it;
    it.iteration = n;
    if (best_candidate) {
      llm::ReflectionInput in;
      in.candidate_id = best_candidate->id;
      in.source = best_candidate->canonical;
      in.fitness = best_candidate->fitness;
      in.report = &*best_candidate->report;
      in.epoch_freq = config.trainer.epoch_freq;
      in.iteration = n;
      in.iterations = config.loop.iterations;
      in.error_digest = error_digest(record.iterations.back().candidates);
      it.prompt = llm::build_reflection_prompt(record.descriptor, config.env.task, in, options);
    } else {
      it.prompt = initial;
    }

    const int k = config.loop.samples;
    std::vector<llm::GenerationResult> results;
    int generated = k;
    if (n == 1 && config.human_init.has_source()) {
      llm::GenerationResult h;
      h.raw_response = config.human_init.source;
      h.source.emplace(config.human_init.source, dsl::Origin::human_init);
      results.push_back(std::move(h));
      --generated;
    }
    if (generated > 0) {
      auto batch = backend.generate(it.prompt, generated);
      batch.resize(static_cast<std::size_t>(generated),
                   llm::GenerationResult::failed("", "backend returned too few results", 0.0));
      for (auto& r : batch) results.push_back(std::move(r));
    }

    it.candidates = evaluate_candidates(results, n, settings, &cache);

    int trained = 0;
    for (const auto& c : it.candidates) {
      if (!c.trained()) continue;
      ++trained;
      if (it.best_id.empty() || c.fitness > it.best_fitness) {
        it.best_id = c.id;
        it.best_fitness = c.fitness;
      }
    }
    it.executable_rate = static_cast<double>(trained) / static_cast<double>(k);

    const auto next = select_best(it.candidates, best);
    if (next && (!best || next->id != best->id)) {
      for (const auto& c : it.candidates) {
        if (c.id == next->id) best_candidate = c;
      }
    }
    best = next;
    it.global_best = best;

    // Policies stay out of candidate records; only the final best keeps one.
    for (auto& c : it.candidates) {
      if (c.report) c.report->best_policy = {};
    }
    it.wall_clock_seconds = seconds_since(iteration_started);
    record.iterations.push_back(std::move(it));
    if (observer) observer(record.iterations.back());
  }

  record.best = best;
  record.no_viable_candidate = !best.has_value();
  if (best_candidate) {
    record.best_source = best_candidate->canonical;
    record.best_policy = best_candidate->report->best_policy;
  }
  record.wall_clock_seconds = seconds_since(started);
  return record;
}

RunRecord run(const RunConfig& config, const IterationObserver& observer)
{
  auto backend = llm::make_backend(config.backend, sim::observation_names(), config.loop.seed);
  return run(config, *backend, observer);
}

}  // namespace stride::search
