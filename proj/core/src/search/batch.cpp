#include "stride/search/batch.hpp"

#include <cstdio>
#include <filesystem>
#include <mutex>

#include "stride/common/io.hpp"
#include "stride/common/parallel.hpp"
#include "stride/common/seed.hpp"
#include "stride/search/orchestrator.hpp"

namespace stride::search {

std::uint64_t batch_run_seed(std::uint64_t master, int index)
{
  return derive_seed(master, "run/" + std::to_string(index));
}

std::string batch_run_dir(const std::string& out_dir, int index)
{
  char name[32];
  std::snprintf(name, sizeof name, "run-%02d", index);
  return (std::filesystem::path(out_dir) / name).string();
}

namespace {

std::string csv_quote(const std::string& s)
{
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

void write_run(const RunRecord& record, const std::string& dir)
{
  const std::filesystem::path d(dir);
  persist(record, (d / kRecordFile).string());
  write_file((d / kSummaryFile).string(), run_summary_text(record));
}

BatchResult run_batch(const RunConfig& config, const BatchProgress& progress)
{
  BatchResult result;
  result.runs.resize(static_cast<std::size_t>(config.batch.runs));
  std::mutex progress_mutex;

  parallel_for(result.runs.size(), config.batch.jobs, [&](std::size_t i) {
    BatchEntry& e = result.runs[i];
    e.index = static_cast<int>(i);
    e.seed = batch_run_seed(config.loop.seed, e.index);
    e.dir = batch_run_dir(config.output_dir, e.index);
    const std::string record_path = (std::filesystem::path(e.dir) / kRecordFile).string();

    try {
      if (std::filesystem::exists(record_path)) {
        try {
          e.summary = compute_metrics(load(record_path));
          e.resumed = true;
          e.ok = true;
        } catch (const std::exception&) {
          // unreadable leftovers of an interrupted run are redone
        }
      }
      if (!e.ok) {
        RunConfig rc = config;
        rc.loop.seed = e.seed;
        rc.output_dir = e.dir;
        rc.batch.runs = 1;
        const RunRecord record = run(rc);
        write_run(record, e.dir);
        e.summary = compute_metrics(record);
        e.ok = true;
      }
    } catch (const std::exception& ex) {
      e.ok = false;
      e.error = ex.what();
    }
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(e);
    }
  });

  std::vector<RunSummary> ok;
  std::vector<LabeledSummary> labeled;
  for (const auto& e : result.runs) {
    if (!e.ok) {
      ++result.failed;
      continue;
    }
    ok.push_back(e.summary);
    labeled.emplace_back("batch", e.summary);
  }
  result.aggregate = aggregate(ok);

  const std::filesystem::path out(config.output_dir);
  const std::vector<LabeledAggregate> columns = {{"batch", result.aggregate}};
  std::string text = rate_table_text(columns) + "\nrun     best_fitness  run_id\n";
  std::string runs_csv = "index,run_id,seed,best_fitness,ok,error\n";
  for (const auto& e : result.runs) {
    char line[160];
    if (e.ok) {
      std::snprintf(line, sizeof line, "%-8d%-14.6f%s%s\n", e.index, e.summary.best_fitness, e.summary.run_id.c_str(),
                    e.resumed ? " (resumed)" : "");
      text += line;
    } else {
      text += std::to_string(e.index) + "       failed: " + e.error + "\n";
    }
    std::snprintf(line, sizeof line, "%d,%s,%llu,%.6f,%d,", e.index, e.summary.run_id.c_str(),
                  static_cast<unsigned long long>(e.seed), e.summary.best_fitness, e.ok ? 1 : 0);
    runs_csv += line + csv_quote(e.error) + "\n";
  }
  write_file((out / "runs.csv").string(), runs_csv);
  write_file((out / "aggregate.txt").string(), text);
  write_file((out / "aggregate.csv").string(), rate_table_csv(columns));
  write_file((out / "trajectories.csv").string(), trajectories_csv(labeled));
  return result;
}

}  // namespace stride::search
