// Copyright 2026 The Authors.
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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("aimi_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    std::ofstream(dir_ / "g.txt") << "0 1 0.5\n1 2 0.25\n2 3 0.5\n3 0 0.1\n";
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = std::string(AIMI_CLI) + " " + args + " >" + (dir_ / "stdout").string() +
                            " 2>" + (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string read(const std::string& name) {
    std::ifstream in(dir_ / name, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, RunWritesCsv) {
  EXPECT_EQ(run("run --graph " + path("g.txt") + " --policies rdm --rounds 2 --reps 1 --seed 7 --out " +
                path("r.csv")),
            0);
  const std::string out = read("r.csv");
  EXPECT_EQ(out.rfind("policy,rep,round,seed,new_activated,cum_reward\r\n", 0), 0u);
  EXPECT_NE(out.find("rdm,0,2,"), std::string::npos);
}

TEST_F(Cli, RunIsDeterministic) {
  const std::string common = "run --graph " + path("g.txt") +
                             " --policies rdm,bgg_dgr,grd_kw,grd_lf,grd_lnf --rounds 3 --reps 2 --m 500 --seed 3";
  ASSERT_EQ(run(common + " --threads 1 --out " + path("a.csv")), 0);
  ASSERT_EQ(run(common + " --threads 3 --out " + path("b.csv")), 0);
  EXPECT_EQ(read("a.csv"), read("b.csv"));
}

TEST_F(Cli, MissingGraph) {
  EXPECT_EQ(run("run --policies rdm --out " + path("r.csv")), 1);
  EXPECT_NE(read("stderr").find("--graph"), std::string::npos);
}

TEST_F(Cli, UnknownFlag) {
  EXPECT_EQ(run("run --graph " + path("g.txt") + " --bogus 1 --out " + path("r.csv")), 1);
  EXPECT_EQ(run("stats --nope"), 1);
}

TEST_F(Cli, BadValues) {
  EXPECT_EQ(run("run --graph " + path("g.txt") + " --policies nope --out " + path("r.csv")), 1);
  EXPECT_EQ(run("run --graph " + path("g.txt") + " --policies rdm --alpha 1 --out " + path("r.csv")), 1);
  EXPECT_EQ(run("run --graph " + path("missing.txt") + " --out " + path("r.csv")), 1);
}

TEST_F(Cli, ConfigFileWithOverride) {
  std::ofstream(path("run.cfg")) << "# settings\ngraph = " << path("g.txt")
                                 << "\npolicies = rdm\nrounds = 2\nreps = 1\nseed = 7\n";
  ASSERT_EQ(run("run --config " + path("run.cfg") + " --reps 2 --out " + path("r.csv")), 0);
  EXPECT_NE(read("r.csv").find("rdm,1,2,"), std::string::npos);
}

TEST_F(Cli, Stats) {
  ASSERT_EQ(run("stats --graph " + path("g.txt")), 0);
  const std::string out = read("stdout");
  EXPECT_NE(out.find("\"p_max\": 0.5"), std::string::npos);
  EXPECT_NE(out.find("\"subcritical\": true"), std::string::npos);
}

TEST_F(Cli, VerifySuites) {
  EXPECT_EQ(run("verify --suite theorem1 --trials 50 --seed 1 --out " + path("v.json")), 0);
  EXPECT_NE(read("v.json").find("\"passed\": true"), std::string::npos);
  EXPECT_EQ(run("verify --suite lemmas --trials 3 --seed 1"), 0);
  EXPECT_EQ(run("verify --suite nope"), 1);
  std::ofstream(path("star.txt")) << "0 1 0.9\n0 2 0.9\n";
  EXPECT_EQ(run("verify --suite tail --graph " + path("star.txt")), 1);
}

TEST_F(Cli, GenRoundTrip) {
  ASSERT_EQ(run("gen --nodes 20 --arcs 60 --d 3 --linear --seed 2 --out " + path("gen.txt") +
                " --features-out " + path("feat.txt")),
            0);
  EXPECT_EQ(run("run --graph " + path("gen.txt") + " --features " + path("feat.txt") +
                " --policies grd_lf --rounds 2 --reps 1 --m 200 --out " + path("r.csv")),
            0);
}

}  // namespace
