#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stride/llm/backend.hpp"
#include "stride/search/config.hpp"
#include "stride/search/record.hpp"

namespace stride::search {

/// Seed of the training run for a program: a function of the run's master
/// seed and the program's canonical text only, so the same program trains
/// identically wherever it appears in a run.
std::uint64_t training_seed(std::uint64_t run_seed, const std::string& canonical);

/// Seeds of the fitness evaluation episodes, shared by every candidate.
std::vector<std::uint64_t> fitness_seeds(std::uint64_t run_seed, int episodes);

struct EvaluationSettings
{
  sim::EnvConfig env;
  trainer::TrainConfig train;  // seed is replaced per candidate
  std::uint64_t run_seed = 0;
  unsigned workers = 1;
};

/// Outcome of training one canonical program; shared between duplicates.
struct TrainingOutcome
{
  CandidateStatus status = CandidateStatus::trained;
  std::string diagnostics;
  std::optional<trainer::TrainReport> report;
  std::vector<double> evaluation;
  double fitness = 0.0;
};

using TrainingCache = std::map<std::string, TrainingOutcome>;

/// Runs each generation result through extraction, parsing, validation and
/// training, stopping at the first failing stage. Trained candidates carry
/// their report including the best policy. Output order is input order.
/// Candidates are numbered "<iteration>-<slot>" with 1-based slots.
/// `cache` (optional) reuses outcomes of canonical programs seen before.
std::vector<Candidate> evaluate_candidates(const std::vector<llm::GenerationResult>& results, int iteration,
                                           const EvaluationSettings& settings, TrainingCache* cache = nullptr);

/// argmax fitness over the trained candidates and the incumbent. Ties go to
/// the earlier iteration, then the lower slot, so the incumbent keeps its
/// place against an equal newcomer. Untrained candidates never qualify.
std::optional<Incumbent> select_best(const std::vector<Candidate>& candidates, const std::optional<Incumbent>& incumbent);

/// Short lines describing the failed candidates, for the reflection prompt.
std::vector<std::string> error_digest(const std::vector<Candidate>& candidates, std::size_t max_lines = 10);

using IterationObserver = std::function<void(const IterationRecord&)>;

/// The search loop with a caller-supplied generator.
/// Throws ConfigError when the human-init program does not parse or
/// validate; nothing else in the loop throws for candidate failures.
RunRecord run(const RunConfig& config, llm::GeneratorBackend& backend, const IterationObserver& observer = {});

/// Same with the backend described by the config (BackendSetupError when it
/// cannot be created).
RunRecord run(const RunConfig& config, const IterationObserver& observer = {});

}  // namespace stride::search
