#include "stride/search/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>

namespace stride::search {

namespace {

std::string fixed(double v, int digits = 3)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width)
{
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::size_t iteration_count(const std::vector<LabeledAggregate>& columns)
{
  std::size_t n = 0;
  for (const auto& [label, a] : columns) n = std::max(n, a.mean_executable_rate.size());
  return n;
}

std::string csv_field(const std::string& s)
{
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

RunSummary compute_metrics(const RunRecord& record)
{
  RunSummary s;
  s.run_id = record.run_id;
  for (const auto& it : record.iterations) {
    s.executable_rate.push_back(it.executable_rate);
    s.iteration_best.push_back(it.best_fitness);
    s.global_best.push_back(it.global_best_fitness());
  }
  s.best_fitness = record.best_fitness();
  s.no_viable_candidate = record.no_viable_candidate;
  return s;
}

Aggregate aggregate(const std::vector<RunSummary>& runs)
{
  Aggregate a;
  a.runs = static_cast<int>(runs.size());
  std::vector<double> rate_sum, best_sum;
  std::vector<int> count;
  for (const auto& r : runs) {
    a.max_success_score = std::max(a.max_success_score, r.best_fitness);
    a.mean_best_fitness += r.best_fitness;
    for (std::size_t i = 0; i < r.executable_rate.size(); ++i) {
      if (rate_sum.size() <= i) {
        rate_sum.resize(i + 1, 0.0);
        best_sum.resize(i + 1, 0.0);
        count.resize(i + 1, 0);
      }
      rate_sum[i] += r.executable_rate[i];
      best_sum[i] += r.global_best[i];
      ++count[i];
    }
  }
  if (!runs.empty()) a.mean_best_fitness /= static_cast<double>(runs.size());
  for (std::size_t i = 0; i < rate_sum.size(); ++i) {
    a.mean_executable_rate.push_back(rate_sum[i] / count[i]);
    a.mean_global_best.push_back(best_sum[i] / count[i]);
  }
  return a;
}

std::string rate_table_text(const std::vector<LabeledAggregate>& columns)
{
  std::size_t width = 12;
  for (const auto& [label, a] : columns) width = std::max(width, label.size() + 2);

  std::string out = pad("Iteration", 20);
  for (const auto& [label, a] : columns) out += pad(label, width);
  out += "\n";
  for (std::size_t i = 0; i < iteration_count(columns); ++i) {
    out += pad(std::to_string(i + 1), 20);
    for (const auto& [label, a] : columns) {
      out += pad(i < a.mean_executable_rate.size() ? fixed(a.mean_executable_rate[i]) : "-", width);
    }
    out += "\n";
  }
  out += pad("Max Success Score", 20);
  for (const auto& [label, a] : columns) out += pad(fixed(a.max_success_score), width);
  out += "\n";
  out += pad("Runs", 20);
  for (const auto& [label, a] : columns) out += pad(std::to_string(a.runs), width);
  out += "\n";
  return out;
}

std::string rate_table_csv(const std::vector<LabeledAggregate>& columns)
{
  std::string out = "iteration";
  for (const auto& [label, a] : columns) out += "," + csv_field(label);
  out += "\n";
  for (std::size_t i = 0; i < iteration_count(columns); ++i) {
    out += std::to_string(i + 1);
    for (const auto& [label, a] : columns) {
      out += ",";
      if (i < a.mean_executable_rate.size()) out += fixed(a.mean_executable_rate[i], 6);
    }
    out += "\n";
  }
  out += "max_success_score";
  for (const auto& [label, a] : columns) out += "," + fixed(a.max_success_score, 6);
  out += "\n";
  return out;
}

std::string trajectories_csv(const std::vector<LabeledSummary>& runs)
{
  std::string out = "label,run_id,iteration,executable_rate,iteration_best,global_best\n";
  for (const auto& [label, s] : runs) {
    for (std::size_t i = 0; i < s.executable_rate.size(); ++i) {
      out += csv_field(label) + "," + csv_field(s.run_id) + "," + std::to_string(i + 1) + "," +
             fixed(s.executable_rate[i], 6) + "," + fixed(s.iteration_best[i], 6) + "," + fixed(s.global_best[i], 6) +
             "\n";
    }
  }
  return out;
}

std::string run_summary_text(const RunRecord& record)
{
  std::string out = "run " + record.run_id + " (stride " + record.tool_version + ")\n";
  if (record.config.contains("task")) out += "task: " + record.config["task"].get<std::string>() + "\n";
  if (record.config.contains("terrain")) out += "terrain: " + record.config["terrain"].value("kind", "?") + "\n";
  out += "\n" + pad("iteration", 11) + pad("executable", 12) + pad("iter_best", 11) + pad("global_best", 13) + "best_id\n";

  std::map<std::string, int> statuses;
  for (const auto& it : record.iterations) {
    const std::string best_id = it.global_best ? it.global_best->id : "-";
    out += pad(std::to_string(it.iteration), 11) + pad(fixed(it.executable_rate), 12) + pad(fixed(it.best_fitness), 11) +
           pad(fixed(it.global_best_fitness()), 13) + best_id + "\n";
    for (const auto& c : it.candidates) ++statuses[std::string(to_string(c.status))];
  }
  out += "\ncandidates:";
  for (const auto& [status, n] : statuses) out += " " + status + " " + std::to_string(n);
  out += "\n";
  if (record.no_viable_candidate) {
    out += "no viable candidate: every program failed before or during training\n";
  } else {
    out += "best: " + record.best->id + " with fitness " + fixed(record.best->fitness) + "\n\n" + record.best_source;
    if (!record.best_source.empty() && record.best_source.back() != '\n') out += "\n";
  }
  return out;
}

}  // namespace stride::search
