#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "stride/search/config.hpp"
#include "stride/search/metrics.hpp"

namespace stride::search {

/// Master seed of run `index` of a batch: derive_seed(master, "run/<index>").
std::uint64_t batch_run_seed(std::uint64_t master, int index);

/// Directory of run `index` below the batch output directory ("run-03").
std::string batch_run_dir(const std::string& out_dir, int index);

inline constexpr const char* kRecordFile = "run_record.json";
inline constexpr const char* kSummaryFile = "summary.txt";

struct BatchEntry
{
  int index = 0;
  std::uint64_t seed = 0;
  std::string dir;
  bool resumed = false;  // record found on disk, run skipped
  bool ok = false;
  std::string error;
  RunSummary summary;
};

struct BatchResult
{
  std::vector<BatchEntry> runs;
  Aggregate aggregate;  // over the successful runs
  int failed = 0;
};

using BatchProgress = std::function<void(const BatchEntry&)>;

/// Runs config.batch.runs independent searches (config.batch.jobs at a
/// time) below config.output_dir. A run whose directory already holds a
/// loadable record is not repeated. A failing run is recorded and the batch
/// goes on. Writes aggregate.txt, aggregate.csv and trajectories.csv next
/// to the run directories.
BatchResult run_batch(const RunConfig& config, const BatchProgress& progress = {});

/// Writes a run's record and summary into `dir`.
void write_run(const RunRecord& record, const std::string& dir);

}  // namespace stride::search
