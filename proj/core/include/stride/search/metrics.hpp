#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stride/search/record.hpp"

namespace stride::search {

/// Per-iteration view of one run.
struct RunSummary
{
  std::string run_id;
  std::vector<double> executable_rate;  // per iteration
  std::vector<double> iteration_best;   // best fitness within each iteration
  std::vector<double> global_best;      // s_best after each iteration
  double best_fitness = 0.0;
  bool no_viable_candidate = true;
};

RunSummary compute_metrics(const RunRecord& record);

/// Several runs of one configuration.
struct Aggregate
{
  int runs = 0;
  double max_success_score = 0.0;  // max over runs of the final best fitness
  double mean_best_fitness = 0.0;
  std::vector<double> mean_executable_rate;  // per iteration, over runs that reached it
  std::vector<double> mean_global_best;
};

Aggregate aggregate(const std::vector<RunSummary>& runs);

using LabeledAggregate = std::pair<std::string, Aggregate>;
using LabeledSummary = std::pair<std::string, RunSummary>;

/// Rows are iterations, columns are configurations, cells are mean
/// executable rates; a final row holds each column's Max Success Score.
std::string rate_table_text(const std::vector<LabeledAggregate>& columns);
std::string rate_table_csv(const std::vector<LabeledAggregate>& columns);

/// One row per (label, run, iteration) with executable rate and fitness.
std::string trajectories_csv(const std::vector<LabeledSummary>& runs);

/// Human-readable report of one run.
std::string run_summary_text(const RunRecord& record);

}  // namespace stride::search
