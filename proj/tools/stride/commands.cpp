#include "commands.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "stride/common/io.hpp"
#include "stride/common/json_reader.hpp"
#include "stride/dsl/parser.hpp"
#include "stride/dsl/validator.hpp"
#include "stride/llm/backend.hpp"
#include "stride/search/batch.hpp"
#include "stride/search/metrics.hpp"
#include "stride/search/orchestrator.hpp"
#include "stride/search/record.hpp"
#include "stride/sim/descriptor.hpp"
#include "stride/sim/world.hpp"

namespace stride::cli {

namespace {

namespace fs = std::filesystem;

// Maps the library's exception types onto the exit-code contract.
template <class F>
int guarded(F&& body)
{
  try {
    return body();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const llm::BackendSetupError& e) {
    std::cerr << "backend setup error: " << e.what() << "\n";
    return kUsageError;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoError;
  } catch (const search::RecordError& e) {
    std::cerr << "record error: " << e.what() << "\n";
    return kDomainFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainFailure;
  }
}

void log_iteration(const search::IterationRecord& it)
{
  std::cerr << "iteration " << it.iteration << ": executable " << it.executable_rate << ", best "
            << (it.best_id.empty() ? "-" : it.best_id) << " (" << it.best_fitness << "), global best "
            << it.global_best_fitness() << "\n";
}

std::vector<std::string> find_records(const std::string& path)
{
  if (!fs::exists(path)) throw IoError("no such file or directory: '" + path + "'");
  if (!fs::is_directory(path)) return {path};
  std::vector<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(path)) {
    if (e.is_regular_file() && e.path().filename() == search::kRecordFile) out.push_back(e.path().string());
  }
  std::sort(out.begin(), out.end());
  if (out.empty()) throw IoError("no " + std::string(search::kRecordFile) + " below '" + path + "'");
  return out;
}

}  // namespace

std::vector<std::string> ConfigFlags::overrides() const
{
  std::vector<std::string> result = set;
  if (backend) result.push_back("backend.kind=" + nlohmann::json(*backend).dump());
  if (out) result.push_back("output_dir=" + nlohmann::json(*out).dump());
  if (runs) result.push_back("batch.runs=" + std::to_string(*runs));
  if (jobs) result.push_back("batch.jobs=" + std::to_string(*jobs));
  if (debug_prompts) result.push_back("backend.debug=true");
  return result;
}

int cmd_run(const ConfigFlags& flags)
{
  return guarded([&] {
    const auto config = search::load_run_config(flags.config_path, flags.overrides());
    const auto record = search::run(config, log_iteration);
    search::write_run(record, config.output_dir);
    std::cout << search::run_summary_text(record);
    std::cout << "\nrecord written to " << (fs::path(config.output_dir) / search::kRecordFile).string() << "\n";
    return kOk;
  });
}

int cmd_batch(const ConfigFlags& flags)
{
  return guarded([&] {
    const auto config = search::load_run_config(flags.config_path, flags.overrides());
    // Setup errors (e.g. a missing API key) must stop the batch before any run.
    (void)llm::make_backend(config.backend, sim::observation_names(), config.loop.seed);
    const auto result = search::run_batch(config, [](const search::BatchEntry& e) {
      if (!e.ok) {
        std::cerr << "run " << e.index << " failed: " << e.error << "\n";
      } else {
        std::cerr << "run " << e.index << (e.resumed ? " (resumed)" : "") << ": best fitness " << e.summary.best_fitness
                  << "\n";
      }
    });
    std::cout << read_file((fs::path(config.output_dir) / "aggregate.txt").string());
    return result.failed == 0 ? kOk : kDomainFailure;
  });
}

int cmd_validate(const std::string& reward_path, const std::string& config_path)
{
  return guarded([&] {
    const auto config = config_path.empty() ? search::RunConfig{} : search::load_run_config(config_path);
    const std::string source = read_file(reward_path);
    const auto parsed = dsl::parse(source);
    if (!parsed.ok()) {
      std::cout << parsed.diagnostics.format(source);
      return kDomainFailure;
    }
    const auto descriptor = sim::describe(config.env);
    const auto diags = dsl::validate(*parsed.program, descriptor.variable_names());
    dsl::Diagnostics shown;
    std::size_t unused = 0;
    for (const auto& d : diags) {
      if (d.code == dsl::DiagnosticCode::unused_variable) {
        ++unused;
      } else {
        shown.add(d.severity, d.code, d.span, d.message);
      }
    }
    std::cout << shown.format(source);
    if (unused > 0) std::cout << "note: " << unused << " observation variable(s) not read by the program\n";
    if (diags.has_errors()) return kDomainFailure;
    std::cout << "ok: " << parsed.program->component_count() << " component(s)\n";
    return kOk;
  });
}

int cmd_report(const std::vector<std::string>& groups, const std::string& csv_path,
               const std::string& trajectories_path)
{
  return guarded([&] {
    std::vector<search::LabeledAggregate> columns;
    std::vector<search::LabeledSummary> runs;
    for (const auto& g : groups) {
      std::string label = g;
      std::string paths = g;
      if (const auto eq = g.find('='); eq != std::string::npos) {
        label = g.substr(0, eq);
        paths = g.substr(eq + 1);
      }
      std::vector<search::RunSummary> summaries;
      std::size_t start = 0;
      while (start <= paths.size()) {
        const auto comma = paths.find(',', start);
        const std::string p = paths.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (!p.empty()) {
          for (const auto& file : find_records(p)) {
            summaries.push_back(search::compute_metrics(search::load(file)));
            runs.emplace_back(label, summaries.back());
          }
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      if (summaries.empty()) throw ConfigError("report group '" + label + "': no records given");
      columns.emplace_back(label, search::aggregate(summaries));
    }
    std::cout << search::rate_table_text(columns);
    if (!csv_path.empty()) write_file(csv_path, search::rate_table_csv(columns));
    if (!trajectories_path.empty()) write_file(trajectories_path, search::trajectories_csv(runs));
    return kOk;
  });
}

int main(int argc, char** argv)
{
  CLI::App app{"stride: search for reward programs with a generator in the loop"};
  app.require_subcommand(1);

  ConfigFlags flags;
  const auto add_config_flags = [&](CLI::App* cmd) {
    cmd->add_option("--config", flags.config_path, "run config file (JSON)")->required();
    cmd->add_option("--set", flags.set, "override a config value, e.g. --set loop.K=10");
    cmd->add_option("--backend", flags.backend, "generator backend (backend.kind)")
        ->check(CLI::IsMember({"http", "scripted"}));
    cmd->add_option("--out", flags.out, "output directory (output_dir)");
    cmd->add_flag("--debug-prompts", flags.debug_prompts, "keep raw requests in the record (backend.debug)");
  };

  auto* run = app.add_subcommand("run", "run one search and write its record");
  add_config_flags(run);

  auto* batch = app.add_subcommand("batch", "run repeated searches with derived seeds");
  add_config_flags(batch);
  batch->add_option("--runs", flags.runs, "number of runs (batch.runs)")->check(CLI::PositiveNumber);
  batch->add_option("--jobs", flags.jobs, "runs executed concurrently (batch.jobs)")->check(CLI::PositiveNumber);

  std::string reward_path, validate_config;
  auto* validate = app.add_subcommand("validate", "check a reward program against the environment");
  validate->add_option("reward", reward_path, "reward program file")->required();
  validate->add_option("--config", validate_config, "run config providing the environment");

  std::vector<std::string> groups;
  std::string csv_path, trajectories_path;
  auto* report = app.add_subcommand("report", "tabulate per-iteration success rates of run records");
  report->add_option("groups", groups, "LABEL=PATH[,PATH...] or PATH; directories are searched for records")
      ->required();
  report->add_option("--csv", csv_path, "write the table as CSV");
  report->add_option("--trajectories", trajectories_path, "write per-run fitness trajectories as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  if (*run) return cmd_run(flags);
  if (*batch) return cmd_batch(flags);
  if (*validate) return cmd_validate(reward_path, validate_config);
  if (*report) return cmd_report(groups, csv_path, trajectories_path);
  return kUsageError;
}

}  // namespace stride::cli
