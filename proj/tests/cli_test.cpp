// Copyright 2026 The aifgrid Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "aifgrid/community_model.hpp"
#include "json.hpp"

namespace aifgrid::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kDefaultConfig = fs::path(AIFGRID_SOURCE_DIR) / "configs" / "default.json";

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "aifgrid");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = Main(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string Slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("aifgrid_cli_" + std::string(::testing::UnitTest::GetInstance()
                                             ->current_test_info()
                                             ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path WriteConfig(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

// Parses a dumped matrix block: header line, then `rows` lines of numbers.
std::vector<Eigen::MatrixXd> ParseBlocks(const std::string& text, int rows, int cols) {
  std::vector<Eigen::MatrixXd> blocks;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] != '#') continue;
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r) {
      std::getline(in, line);
      std::istringstream ls(line);
      for (int c = 0; c < cols; ++c) ls >> m(r, c);
    }
    blocks.push_back(m);
  }
  return blocks;
}

TEST_F(CliTest, ValidateShippedConfig) {
  const Result r = RunCli({"validate-config", "--config", kDefaultConfig.string()});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(r.out, "OK\n");
}

TEST_F(CliTest, RunCommunityWritesNinetySixRows) {
  const Result r =
      RunCli({"run-community", "--config", kDefaultConfig.string(), "--out", dir_.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::ifstream f(dir_ / "community.csv");
  std::string line;
  int rows = -1;  // header
  while (std::getline(f, line)) rows += !line.empty();
  EXPECT_EQ(rows, 96);
  EXPECT_TRUE(fs::exists(dir_ / "building_1.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "building_2.csv"));
  EXPECT_NE(r.out.find("total cost"), std::string::npos);

  const json report = json::parse(Slurp(dir_ / "report.json"));
  EXPECT_EQ(report["seed"].get<std::uint64_t>(), 20240601u);
  const json echoed = report["config"];
  EXPECT_EQ(echoed["seeds"]["master"].get<std::uint64_t>(), 20240601u);
  EXPECT_TRUE(echoed.contains("planner"));
  EXPECT_TRUE(echoed.contains("economics"));
  EXPECT_EQ(report["community_rows"].get<int>(), 96);
}

TEST_F(CliTest, SeedOverrideIsRecorded) {
  const Result r = RunCli({"dump-model", "--config", kDefaultConfig.string(), "--out",
                        dir_.string(), "--seed", "99", "--quiet"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(r.out.empty());
  const json report = json::parse(Slurp(dir_ / "report.json"));
  EXPECT_EQ(report["seed"].get<int>(), 99);
  EXPECT_EQ(report["config"]["seeds"]["master"].get<int>(), 99);
}

TEST_F(CliTest, IdenticalInvocationsAreByteIdentical) {
  const fs::path a = dir_ / "a", b = dir_ / "b";
  ASSERT_EQ(RunCli({"run-community", "--config", kDefaultConfig.string(), "--out", a.string(),
                 "--quiet"}).code,
            kExitOk);
  ASSERT_EQ(RunCli({"run-community", "--config", kDefaultConfig.string(), "--out", b.string(),
                 "--quiet"}).code,
            kExitOk);
  for (const char* f : {"community.csv", "building_1.csv", "building_2.csv", "report.json"}) {
    EXPECT_EQ(Slurp(a / f), Slurp(b / f)) << f;
  }
}

TEST_F(CliTest, DumpModelRoundTrips) {
  ASSERT_EQ(RunCli({"dump-model", "--config", kDefaultConfig.string(), "--out", dir_.string(),
                 "--quiet"}).code,
            kExitOk);
  const auto a = ParseBlocks(Slurp(dir_ / "A.txt"), 27, 36);
  ASSERT_EQ(a.size(), 1u);
  const auto b = ParseBlocks(Slurp(dir_ / "B.txt"), 36, 36);
  ASSERT_EQ(b.size(), 27u);
  for (int c = 0; c < 36; ++c) EXPECT_NEAR(a[0].col(c).sum(), 1.0, 1e-9);
  for (const auto& m : b) {
    for (int c = 0; c < 36; ++c) EXPECT_NEAR(m.col(c).sum(), 1.0, 1e-9);
  }
  EXPECT_NE(Slurp(dir_ / "B.txt").find("# B action 4 NoChange Hold NoTransaction"),
            std::string::npos);

  // The idle action (index 4) leaves building loads under the bare persistence kernel and the
  // battery untouched; rebuild it from the configured persistence.
  const double p = CommunityModelParams{}.persistence;
  Eigen::Matrix3d bb;
  bb << p, (1 - p) * 0.5, 0.0,
        1 - p, p, 1 - p,
        0.0, (1 - p) * 0.5, p;
  Eigen::MatrixXd expected(36, 36);
  for (int i = 0; i < 36; ++i) {
    for (int j = 0; j < 36; ++j) {
      expected(i, j) = bb(i / 12, j / 12) * bb((i / 4) % 3, (j / 4) % 3) *
                       (i % 4 == j % 4 ? 1.0 : 0.0);
    }
  }
  EXPECT_LE((b[4] - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST_F(CliTest, ExtremePricingDischargesAtPeak) {
  const Result r = RunCli({"extreme-pricing", "--config", kDefaultConfig.string(), "--out",
                        dir_.string(), "--quiet"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const json report = json::parse(Slurp(dir_ / "report.json"));
  EXPECT_GT(report["peak_battery_net_discharge_kwh"].get<double>(), 0.0);
  EXPECT_EQ(report["pricing"], "extreme");
}

TEST_F(CliTest, MissingConfigIsConfigError) {
  const Result r = RunCli({"validate-config", "--config", (dir_ / "nope.json").string()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliTest, SchemaViolationListsKeys) {
  const fs::path cfg =
      WriteConfig("bad.json", R"({"world": {"capacity": -1}, "planner": {"horizon": 0}})");
  const Result r = RunCli({"validate-config", "--config", cfg.string()});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("world.capacity"), std::string::npos);
  EXPECT_NE(r.err.find("planner.horizon"), std::string::npos);
}

TEST_F(CliTest, UsageErrorsAreConfigErrors) {
  EXPECT_EQ(RunCli({"run-community"}).code, kExitConfig);
  EXPECT_EQ(RunCli({"frobnicate", "--config", kDefaultConfig.string()}).code, kExitConfig);
  EXPECT_EQ(RunCli({"sweep-ambiguity", "--config", kDefaultConfig.string(), "--alpha-list",
                 "0,abc"}).code,
            kExitConfig);
}

TEST_F(CliTest, UnwritableOutputIsIoError) {
  const fs::path blocker = WriteConfig("blocker", "x");
  const Result r = RunCli({"dump-model", "--config", kDefaultConfig.string(), "--out",
                        (blocker / "sub").string()});
  EXPECT_EQ(r.code, kExitIo);
}

TEST_F(CliTest, DivergentAgentIsNumericalFailure) {
  const fs::path cfg = WriteConfig("wild.json", R"({"agents": {"eta_occupancy": 1e300}})");
  const Result r = RunCli({"run-building", "--config", cfg.string(), "--out", dir_.string()});
  EXPECT_EQ(r.code, kExitNumerical) << r.err;
  EXPECT_NE(r.err.find("step"), std::string::npos);
}

TEST_F(CliTest, WriteFileAtomicLeavesNoTemp) {
  WriteFileAtomic(dir_ / "x.txt", "hello");
  EXPECT_EQ(Slurp(dir_ / "x.txt"), "hello");
  EXPECT_FALSE(fs::exists(dir_ / "x.txt.tmp"));
}

}  // namespace
}  // namespace aifgrid::cli
