#include "psearch/cli.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <string>

using namespace psearch;

namespace {

RunConfig base(Command cmd) {
  RunConfig cfg;
  cfg.command = cmd;
  return cfg;
}

// pull a numeric field out of the flat JSON reports
double json_number(const std::string& report, const std::string& key) {
  const std::string needle = "\"" + key + "\":";
  const std::size_t at = report.find(needle);
  EXPECT_NE(at, std::string::npos) << "missing key " << key;
  if (at == std::string::npos) return 0.0;
  return std::strtod(report.c_str() + at + needle.size(), nullptr);
}

bool contains(const std::string& report, const std::string& piece) {
  return report.find(piece) != std::string::npos;
}

}  // namespace

TEST(Cli, ParamsReport) {
  RunConfig cfg = base(Command::params);
  cfg.n_blocks = 4;
  cfg.n_items = 4096;
  const CommandResult res = run_command(cfg);
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_TRUE(contains(res.report, "\"schema_version\":1"));
  EXPECT_TRUE(contains(res.report, "\"command\":\"params\""));
  EXPECT_NEAR(json_number(res.report, "eta"), 0.9553166181245093, 1e-15);
  EXPECT_NEAR(json_number(res.report, "alpha"), 0.6154797086703874, 1e-15);
  EXPECT_EQ(json_number(res.report, "j1"), 20.0);
  EXPECT_EQ(json_number(res.report, "j2"), 20.0);
  EXPECT_EQ(json_number(res.report, "queries"), 41.0);
}

TEST(Cli, ParamsWithoutItemsOmitsCounts) {
  RunConfig cfg = base(Command::params);
  cfg.n_blocks = 3;
  const CommandResult res = run_command(cfg);
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_FALSE(contains(res.report, "\"j1\""));
  EXPECT_FALSE(contains(res.report, "\"queries\""));
}

TEST(Cli, ParamsRequiresBlocks) {
  EXPECT_EQ(run_command(base(Command::params)).exit_code, 2);
}

TEST(Cli, GrkReportRefinedPair) {
  RunConfig cfg = base(Command::grk);
  cfg.n_items = 4096;
  cfg.n_blocks = 4;
  const CommandResult res = run_command(cfg);
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_EQ(json_number(res.report, "j1"), 19.0);
  EXPECT_EQ(json_number(res.report, "j2"), 21.0);
  EXPECT_EQ(json_number(res.report, "queries"), 41.0);
  EXPECT_GE(json_number(res.report, "target_block_probability"), 0.995);
  EXPECT_TRUE(contains(res.report, "\"block_probabilities\":["));
}

TEST(Cli, GrkRejectsBadGeometry) {
  RunConfig cfg = base(Command::grk);
  cfg.n_items = 100;
  cfg.n_blocks = 7;
  const CommandResult res = run_command(cfg);
  EXPECT_EQ(res.exit_code, 2);
  EXPECT_TRUE(contains(res.report, "error:"));
}

TEST(Cli, SimulateAgreesAcrossRepresentations) {
  RunConfig cfg = base(Command::simulate);
  cfg.n_items = 1024;
  cfg.n_blocks = 4;
  cfg.plan_text = "G1:1,G2:8,G1:8";
  cfg.representation = Representation::full;
  const CommandResult full = run_command(cfg);
  cfg.representation = Representation::reduced_exact;
  const CommandResult exact = run_command(cfg);
  EXPECT_EQ(full.exit_code, 0);
  EXPECT_EQ(exact.exit_code, 0);
  EXPECT_NEAR(json_number(full.report, "u_amplitude"),
              json_number(exact.report, "u_amplitude"), 1e-12);
  EXPECT_NEAR(json_number(full.report, "target_block_probability"),
              json_number(exact.report, "target_block_probability"), 1e-12);
  EXPECT_LE(json_number(full.report, "subspace_residual"), 1e-12);
  EXPECT_EQ(json_number(full.report, "queries"), 17.0);

  cfg.representation = Representation::reduced_asymptotic;
  const CommandResult asym = run_command(cfg);
  EXPECT_NEAR(json_number(asym.report, "u_amplitude"),
              json_number(exact.report, "u_amplitude"),
              5.0 / std::sqrt(256.0));
}

TEST(Cli, SimulateRejectsMalformedPlans) {
  RunConfig cfg = base(Command::simulate);
  cfg.n_items = 64;
  cfg.n_blocks = 4;
  cfg.plan_text = "G3:2";
  EXPECT_EQ(run_command(cfg).exit_code, 2);
  cfg.plan_text = "G1:x";
  EXPECT_EQ(run_command(cfg).exit_code, 2);
}

TEST(Cli, VerifyAllSuitesPass) {
  RunConfig cfg = base(Command::verify);
  const CommandResult res = run_command(cfg);
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_TRUE(contains(res.report, "\"passed\":true"));
  EXPECT_TRUE(contains(res.report, "lie_relation"));
  EXPECT_TRUE(contains(res.report, "covering_map"));
  EXPECT_TRUE(contains(res.report, "oracle_trajectory"));
  EXPECT_TRUE(contains(res.report, "spectrum_g1_exact"));
}

TEST(Cli, VerifySingleSuite) {
  RunConfig cfg = base(Command::verify);
  cfg.suite = "lie";
  const CommandResult res = run_command(cfg);
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_FALSE(contains(res.report, "covering_map"));
}

TEST(Cli, VerifyUnknownSuiteIsAUsageError) {
  RunConfig cfg = base(Command::verify);
  cfg.suite = "everything";
  EXPECT_EQ(run_command(cfg).exit_code, 2);
}

TEST(Cli, CsvRestrictedToTabularCommands) {
  RunConfig cfg = base(Command::grk);
  cfg.n_items = 4096;
  cfg.n_blocks = 4;
  cfg.output_format = OutputFormat::csv;
  EXPECT_EQ(run_command(cfg).exit_code, 2);

  RunConfig ver = base(Command::verify);
  ver.suite = "lie";
  ver.output_format = OutputFormat::csv;
  const CommandResult res = run_command(ver);
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_EQ(res.report.rfind("check,residual,tolerance,pass", 0), 0u);
}

TEST(Cli, ScanReportsAndCsv) {
  RunConfig cfg = base(Command::scan);
  cfg.n_items = 4096;
  cfg.n_blocks = 3;
  cfg.grid_step = 0.02;
  const CommandResult res = run_command(cfg);
  EXPECT_EQ(res.exit_code, 0);
  EXPECT_TRUE(contains(res.report, "\"counterexamples\":[]"));
  EXPECT_TRUE(contains(res.report, "\"solutions\":["));
  cfg.output_format = OutputFormat::csv;
  const CommandResult csv = run_command(cfg);
  EXPECT_EQ(csv.report.rfind("j1,j2,queries", 0), 0u);
}

TEST(Cli, ReportsAreByteDeterministic) {
  RunConfig cfg = base(Command::conjecture);
  cfg.n_blocks = 4;
  cfg.grid_step = 0.1;
  cfg.starts = 10;
  cfg.seed = 9;
  const CommandResult a = run_command(cfg);
  const CommandResult b = run_command(cfg);
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.report, b.report);

  RunConfig ver = base(Command::verify);
  EXPECT_EQ(run_command(ver).report, run_command(ver).report);
}

TEST(Cli, ExecutableEndToEnd) {
  const std::string cmd = std::string(PSEARCH_CLI_PATH) +
                          " params --K 4 --N 4096 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string out;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  const int status = pclose(pipe);
  EXPECT_EQ(WEXITSTATUS(status), 0);
  EXPECT_TRUE(contains(out, "\"queries\":41"));

  const std::string bad =
      std::string(PSEARCH_CLI_PATH) + " grk --N 100 --K 7 2>/dev/null";
  FILE* pipe2 = popen(bad.c_str(), "r");
  ASSERT_NE(pipe2, nullptr);
  while (std::fgets(buf, sizeof buf, pipe2)) {
  }
  EXPECT_EQ(WEXITSTATUS(pclose(pipe2)), 2);
}

TEST(Cli, ExecutableReadsAConfigFile) {
  const std::string path = ::testing::TempDir() + "psearch_cli_cfg.ini";
  FILE* cfg = std::fopen(path.c_str(), "w");
  ASSERT_NE(cfg, nullptr);
  std::fputs("[params]\nK=4\nN=4096\n", cfg);
  std::fclose(cfg);

  const std::string cmd = std::string(PSEARCH_CLI_PATH) + " --config " + path +
                          " params 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  ASSERT_NE(pipe, nullptr);
  std::string out;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe)) out += buf;
  EXPECT_EQ(WEXITSTATUS(pclose(pipe)), 0);
  EXPECT_TRUE(contains(out, "\"queries\":41"));
  std::remove(path.c_str());
}
