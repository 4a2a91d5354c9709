// Copyright 2026 The kanon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace {

namespace fs = std::filesystem;

struct Outcome {
  int status = -1;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("kanon_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(const std::string& args) const {
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string(KANON_CLI_PATH) + " " + args + " > " +
                            (dir_ / "stdout.txt").string() + " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    Outcome r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.err = slurp(err);
    return r;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  }

  std::string fixture() const { return std::string(KANON_SOURCE_DIR) + "/configs/fixture.cfg"; }

  fs::path dir_;
};

TEST_F(CliTest, AnonymizeWritesOutputs) {
  const Outcome r = run("anonymize --config " + fixture() + " --out-dir " + (dir_ / "a").string());
  ASSERT_EQ(r.status, 0) << r.err;
  for (const char* f : {"anonymized.csv", "metrics.json", "funnel.csv", "timing.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "a" / f)) << f;
  }
  const std::string metrics = slurp(dir_ / "a" / "metrics.json");
  EXPECT_NE(metrics.find("\"config\""), std::string::npos);
  EXPECT_NE(metrics.find("\"dm\""), std::string::npos);
}

TEST_F(CliTest, WorkerCountDoesNotChangeBytes) {
  ASSERT_EQ(run("anonymize --config " + fixture() + " --cutoff 10 --workers 1 --out-dir " +
                (dir_ / "w1").string())
                .status,
            0);
  ASSERT_EQ(run("anonymize --config " + fixture() + " --cutoff 10 --workers 4 --out-dir " +
                (dir_ / "w4").string())
                .status,
            0);
  ASSERT_EQ(run("anonymize --config " + fixture() + " --cutoff 10 --workers 1 --out-dir " +
                (dir_ / "again").string())
                .status,
            0);
  for (const char* f : {"anonymized.csv", "metrics.json", "funnel.csv"}) {
    EXPECT_EQ(slurp(dir_ / "w1" / f), slurp(dir_ / "w4" / f)) << f;
    EXPECT_EQ(slurp(dir_ / "w1" / f), slurp(dir_ / "again" / f)) << f;
  }
}

TEST_F(CliTest, MissingGtreeExitsTwoNamingPath) {
  const fs::path cfg = dir_ / "run.cfg";
  std::ofstream(cfg) << "schema = " << fixture() << "\ngtree.workclass = nowhere/wc.csv\n";
  const Outcome r = run("anonymize --config " + cfg.string() + " --out-dir " + (dir_ / "o").string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find((dir_ / "nowhere" / "wc.csv").string()), std::string::npos) << r.err;
}

TEST_F(CliTest, UnknownSuiteIsUsageError) {
  const Outcome r = run("bench nonsense --config " + fixture());
  EXPECT_NE(r.status, 0);
}

TEST_F(CliTest, BaselineCompareRejectsCategorical) {
  const Outcome r = run("baseline-compare --config " + fixture() + " --qids age,sex --out-dir " +
                    (dir_ / "b").string());
  EXPECT_EQ(r.status, 2) << r.err;
}

TEST_F(CliTest, FunnelStatsWritesTrace) {
  const Outcome r = run("funnel-stats --config " + fixture() + " --out-dir " + (dir_ / "f").string());
  ASSERT_EQ(r.status, 0) << r.err;
  const std::string trace = slurp(dir_ / "f" / "funnel_trace.csv");
  EXPECT_EQ(trace.rfind("decision,", 0), 0u);
}

TEST_F(CliTest, UnknownConfigKeyExitsTwo) {
  const fs::path cfg = dir_ / "bad.cfg";
  std::ofstream(cfg) << "schema = " << fixture() << "\nfrobnicate = 1\n";
  EXPECT_EQ(run("anonymize --config " + cfg.string()).status, 2);
}

}  // namespace
