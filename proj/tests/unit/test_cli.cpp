#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "golden.hpp"
#include "stride/common/io.hpp"

namespace fs = std::filesystem;
using stride::read_file;
using stride::write_file;

namespace {

struct Outcome
{
  int code = -1;
  std::string out;
  std::string err;
};

fs::path work_dir()
{
  static const fs::path dir = [] {
    const auto d = fs::temp_directory_path() / "stride_test_cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Outcome stride_cli(const std::string& args, const std::string& env = "")
{
  const auto out = work_dir() / "stdout.txt";
  const auto err = work_dir() / "stderr.txt";
  const std::string cmd = env + " " + STRIDE_CLI_PATH + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = read_file(out.string());
  o.err = read_file(err.string());
  return o;
}

std::string config_path(const std::string& name)
{
  return (fs::path(stride::testkit::test_data_dir()).parent_path() / "configs" / name).string();
}

// The shipped config with the trainer cut down to a few generations.
const std::string kFast =
    " --set trainer.population=4 --set trainer.generations=2 --set trainer.horizon=60 --set sim.horizon_steps=60"
    " --set trainer.eval_episodes=1 --set trainer.epoch_freq=1 --set loop.K=3";

}  // namespace

TEST(Cli, ValidateGoodReward)
{
  const auto o = stride_cli("validate " + config_path("rewards/velocity_upright.rwd"));
  EXPECT_EQ(o.code, 0) << o.out << o.err;
  EXPECT_NE(o.out.find("ok: 2 component(s)"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("observation variable(s) not read"), std::string::npos);
}

TEST(Cli, ValidateReportsSpan)
{
  const auto file = (work_dir() / "typo.rwd").string();
  write_file(file, "component speed = vel_xx\ntotal = speed\n");
  const auto o = stride_cli("validate " + file);
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.out.find("1:19"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("vel_xx"), std::string::npos);
}

TEST(Cli, ValidateParseError)
{
  const auto file = (work_dir() / "broken.rwd").string();
  write_file(file, "component = 1\n");
  const auto o = stride_cli("validate " + file);
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.out.find("error"), std::string::npos);
}

TEST(Cli, ExitCodes)
{
  EXPECT_EQ(stride_cli("").code, 2);
  EXPECT_EQ(stride_cli("frobnicate").code, 2);
  EXPECT_EQ(stride_cli("validate /nonexistent/reward.rwd").code, 3);
  const auto bad_key = stride_cli("run --config " + config_path("flat.json") + " --set loop.bogus=1");
  EXPECT_EQ(bad_key.code, 2);
  EXPECT_NE(bad_key.err.find("loop.bogus"), std::string::npos) << bad_key.err;
  EXPECT_EQ(stride_cli("run --config /nonexistent/config.json").code, 3);
}

TEST(Cli, HttpWithoutKeyStopsBeforeAnyOutput)
{
  const auto out = work_dir() / "http_out";
  const auto o = stride_cli("run --config " + config_path("flat_http.json") + " --out " + out.string(),
                            "env -u STRIDE_API_KEY");
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("STRIDE_API_KEY"), std::string::npos) << o.err;
  EXPECT_FALSE(fs::exists(out));
}

TEST(Cli, RunBatchAndReport)
{
  const auto run_dir = work_dir() / "single";
  const auto run = stride_cli("run --config " + config_path("flat.json") + kFast + " --out " + run_dir.string());
  ASSERT_EQ(run.code, 0) << run.err;
  EXPECT_TRUE(fs::exists(run_dir / "run_record.json"));
  EXPECT_NE(run.out.find("iteration"), std::string::npos);
  EXPECT_NE(run.err.find("iteration 3"), std::string::npos);

  const auto batch_dir = work_dir() / "batch";
  const auto batch = stride_cli("batch --config " + config_path("wave.json") + kFast + " --set loop.N=2 --runs 2 --out " +
                                batch_dir.string());
  ASSERT_EQ(batch.code, 0) << batch.err;
  EXPECT_TRUE(fs::exists(batch_dir / "run-00" / "run_record.json"));
  EXPECT_TRUE(fs::exists(batch_dir / "run-01" / "run_record.json"));
  EXPECT_NE(batch.out.find("Max Success Score"), std::string::npos);

  const auto csv = (work_dir() / "table.csv").string();
  const auto report = stride_cli("report flat=" + run_dir.string() + " wave=" + batch_dir.string() + " --csv " + csv);
  ASSERT_EQ(report.code, 0) << report.err;
  EXPECT_NE(report.out.find("flat"), std::string::npos);
  EXPECT_NE(report.out.find("wave"), std::string::npos);
  const auto table = read_file(csv);
  EXPECT_EQ(table.substr(0, table.find('\n')), "iteration,flat,wave");

  EXPECT_EQ(stride_cli("report missing=/nonexistent/dir").code, 3);
}
