#pragma once

#include <optional>
#include <string>
#include <vector>

namespace stride::cli {

enum ExitCode : int
{
  kOk = 0,
  kDomainFailure = 1,
  kUsageError = 2,
  kIoError = 3,
};

/// Flags shared by run and batch. Each one is turned into a config
/// override, so the effective config (and the record snapshot) shows it.
struct ConfigFlags
{
  std::string config_path;
  std::vector<std::string> set;
  std::optional<std::string> backend;
  std::optional<std::string> out;
  std::optional<int> runs;
  std::optional<unsigned> jobs;
  bool debug_prompts = false;

  std::vector<std::string> overrides() const;
};

int cmd_run(const ConfigFlags& flags);
int cmd_batch(const ConfigFlags& flags);
int cmd_validate(const std::string& reward_path, const std::string& config_path);

/// Each group is "LABEL=PATH[,PATH...]" or a bare PATH (its own label).
/// A PATH is a record file or a directory searched for records.
int cmd_report(const std::vector<std::string>& groups, const std::string& csv_path,
               const std::string& trajectories_path);

int main(int argc, char** argv);

}  // namespace stride::cli
