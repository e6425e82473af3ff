#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "stride/llm/backend.hpp"
#include "stride/sim/config.hpp"
#include "stride/trainer/train.hpp"

namespace stride::search {

struct LoopConfig
{
  int iterations = 3;       // N
  int samples = 10;         // K
  std::uint64_t seed = 0;   // master seed of the run
  unsigned workers = 1;     // candidates trained concurrently; 0 = hardware concurrency

  bool operator==(const LoopConfig&) const = default;
};

struct HumanInit
{
  std::string source_file;  // as given in the config, informational once loaded
  std::string source;       // program text; loaded from source_file when empty
  std::string guidance;     // appended to the initial user prompt

  bool has_source() const { return !source.empty(); }
  bool operator==(const HumanInit&) const = default;
};

/// Repetitions of the whole search (the ten-run evaluation protocol).
struct BatchConfig
{
  int runs = 10;
  unsigned jobs = 1;  // runs executed concurrently

  bool operator==(const BatchConfig&) const = default;
};

/// Everything a run depends on. The JSON form is the run config file and
/// the snapshot stored in every RunRecord.
struct RunConfig
{
  sim::EnvConfig env;
  trainer::TrainConfig trainer;
  llm::BackendConfig backend;
  LoopConfig loop;
  HumanInit human_init;
  BatchConfig batch;
  std::string style_guidance;
  std::string output_dir = "runs";
};

nlohmann::json to_json(const RunConfig& c);

/// Strict: unknown keys, wrong types and out-of-range values throw
/// ConfigError naming the key. A human-init source_file is read relative to
/// `base_dir`; an unreadable file throws ConfigError as well.
RunConfig run_config_from_json(const nlohmann::json& j, const std::string& base_dir = ".");

/// Applies `--set key=value` style overrides to a config document. The
/// value is parsed as JSON when possible and taken as a string otherwise;
/// intermediate objects are created as needed.
void apply_override(nlohmann::json& doc, const std::string& assignment);

/// Reads a config file and applies overrides in order. Throws ConfigError
/// (also for syntax errors) or std::ios_base::failure when unreadable.
RunConfig load_run_config(const std::string& path, const std::vector<std::string>& overrides = {});

}  // namespace stride::search
