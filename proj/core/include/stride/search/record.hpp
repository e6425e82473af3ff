#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "stride/dsl/ast.hpp"
#include "stride/llm/prompts.hpp"
#include "stride/sim/descriptor.hpp"
#include "stride/trainer/policy.hpp"
#include "stride/trainer/train.hpp"

namespace stride::search {

inline constexpr int kSchemaVersion = 1;

enum class CandidateStatus
{
  extraction_failed,
  parse_failed,
  validation_failed,
  runtime_failed,
  trained,
};

std::string_view to_string(CandidateStatus s);
CandidateStatus candidate_status_from_string(std::string_view s);

struct Candidate
{
  std::string id;  // "<iteration>-<slot>", both 1-based
  int iteration = 0;
  int index = 0;   // 1-based slot
  std::optional<dsl::RewardSource> source;  // absent after extraction_failed
  std::string canonical;                    // canonical program text once parsed
  CandidateStatus status = CandidateStatus::extraction_failed;
  std::string diagnostics;
  std::optional<trainer::TrainReport> report;  // present iff trained
  std::vector<double> evaluation;  // fitness per evaluation episode
  double fitness = 0.0;
  std::string raw_response;
  std::string request_body;  // debug only
  double latency_seconds = 0.0;

  bool trained() const { return status == CandidateStatus::trained; }
  bool operator==(const Candidate&) const;
};

struct Incumbent
{
  std::string id;
  int iteration = 0;
  int index = 0;
  double fitness = 0.0;

  bool operator==(const Incumbent&) const = default;
};

struct IterationRecord
{
  int iteration = 0;
  llm::PromptBundle prompt;
  std::vector<Candidate> candidates;
  std::string best_id;  // best trained candidate of this iteration, empty if none
  double best_fitness = 0.0;
  double executable_rate = 0.0;
  std::optional<Incumbent> global_best;
  double wall_clock_seconds = 0.0;

  /// s_best after this iteration (0 before any candidate trains).
  double global_best_fitness() const { return global_best ? global_best->fitness : 0.0; }
  bool operator==(const IterationRecord&) const = default;
};

struct RunRecord
{
  int schema_version = kSchemaVersion;
  std::string run_id;
  std::string tool_version;
  nlohmann::json config;  // snapshot, see to_json(RunConfig)
  sim::EnvDescriptor descriptor;
  std::vector<IterationRecord> iterations;
  std::optional<Incumbent> best;
  std::string best_source;  // canonical text of the best candidate
  std::optional<trainer::PolicyParams> best_policy;
  bool no_viable_candidate = true;
  double wall_clock_seconds = 0.0;

  double best_fitness() const { return best ? best->fitness : 0.0; }
  const Candidate* find(const std::string& id) const;
  bool operator==(const RunRecord&) const;
};

class RecordError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

nlohmann::json to_json(const Candidate& c);
nlohmann::json to_json(const RunRecord& r);
Candidate candidate_from_json(const nlohmann::json& j);

/// Throws RecordError on a schema version other than kSchemaVersion or a
/// malformed document.
RunRecord run_record_from_json(const nlohmann::json& j);

/// Canonical JSON text (sorted keys, two-space indent, trailing newline).
std::string serialize(const RunRecord& r);

void persist(const RunRecord& r, const std::string& path);

/// Throws IoError when unreadable, RecordError when malformed or of another
/// schema version.
RunRecord load(const std::string& path);

/// Removes every wall_clock_seconds and latency_seconds member at any depth.
nlohmann::json strip_timing(nlohmann::json j);

}  // namespace stride::search
