// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr folded into the captured output.
Result run(const std::string& args) {
  const std::string cmd = std::string(ACS_CLI_PATH) + " " + args + " 2>&1";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf;
  while (std::fgets(buf.data(), buf.size(), pipe) != nullptr) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

struct Cli : ::testing::Test {
  fs::path root;
  void SetUp() override {
    root = fs::temp_directory_path() /
           ("acs_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root);
    fs::create_directories(root);
    std::ofstream(root / "quick.yaml") << "schema_version: 1\n"
                                          "schedule:\n  steps: 20\n"
                                          "plan:\n  sizes: [2, 2]\n  guidance: 0.1\n"
                                          "discriminator:\n  hidden: [16]\n  optimizer:\n    steps: 40\n"
                                          "evaluation:\n  repetitions: 1\n  test_per_class: 100\n"
                                          "  oracle_train_per_class: 50\n  scatter_real_per_class: 3\n"
                                          "  classifier:\n    hidden: [16]\n    optimizer:\n      steps: 40\n"
                                          "sweep:\n  guidance_grid: [0, 0.1]\n  sizes: [1, 1]\n"
                                          "  curricula_grid: [1, 2]\n  budget: 2\n  seeds: [1]\n";
  }
  void TearDown() override { fs::remove_all(root); }
  std::string p(const char* name) const { return (root / name).string(); }
};

TEST_F(Cli, DefaultsAreExplicitAndReparse) {
  const auto r = run("inspect --defaults");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("schema_version: 1"), std::string::npos);
  EXPECT_NE(r.out.find("guidance_grid"), std::string::npos);
  std::ofstream(root / "defaults.yaml") << r.out;
  const auto again = run("inspect -c " + p("defaults.yaml"));
  EXPECT_EQ(again.code, 0);
  EXPECT_EQ(again.out, r.out);
}

TEST_F(Cli, DistillIsDeterministic) {
  const auto a = run("-q distill -c " + p("quick.yaml") + " -o " + p("a"));
  const auto b = run("distill -c " + p("quick.yaml") + " -o " + p("b") + " -j 2 -q");
  ASSERT_EQ(a.code, 0) << a.out;
  ASSERT_EQ(b.code, 0) << b.out;
  EXPECT_NE(a.out.find("dataset_content_hash: "), std::string::npos);
  EXPECT_EQ(a.out, b.out);
  const auto c = run("-q distill -c " + p("quick.yaml") + " -o " + p("c") + " --seed 99");
  EXPECT_NE(a.out, c.out);
}

TEST_F(Cli, EvalInspectAndReplay) {
  ASSERT_EQ(run("-q distill -c " + p("quick.yaml") + " -o " + p("run")).code, 0);
  const auto info = run("inspect -d " + p("run"));
  EXPECT_EQ(info.code, 0);
  EXPECT_NE(info.out.find("curricula"), std::string::npos);
  const auto e = run("-q eval -d " + p("run") + " -k 1,2 -o " + p("eval"));
  ASSERT_EQ(e.code, 0) << e.out;
  EXPECT_TRUE(fs::exists(root / "eval" / "eval_summary.csv"));
  const auto r = run("-q replay -m " + p("eval") + " -o " + p("eval_again"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("replay identical"), std::string::npos);
}

TEST_F(Cli, SweepWritesTables) {
  ASSERT_EQ(run("-q sweep curricula -c " + p("quick.yaml") + " -o " + p("s")).code, 0);
  EXPECT_TRUE(fs::exists(root / "s" / "sweep_curricula.csv"));
  EXPECT_EQ(run("-q sweep sideways -c " + p("quick.yaml") + " -o " + p("t")).code, 2);
}

TEST_F(Cli, ErrorsUseDistinctExitCodes) {
  const auto missing = run("eval -d " + p("nowhere") + " -o " + p("e"));
  EXPECT_EQ(missing.code, 3);
  EXPECT_NE(missing.out.find("acs: "), std::string::npos);
  EXPECT_EQ(run("distill -c " + p("absent.yaml") + " -o " + p("x")).code, 3);

  std::ofstream(root / "guided_first.yaml")
      << "schema_version: 1\nplan:\n  sizes: [2, 2]\n  guidance_per_curriculum: [0.2, 0.2]\n";
  const auto g0 = run("distill -c " + p("guided_first.yaml") + " -o " + p("y"));
  EXPECT_EQ(g0.code, 2);
  EXPECT_NE(g0.out.find("first curriculum"), std::string::npos);
  EXPECT_NE(g0.out.find("line "), std::string::npos);
  EXPECT_FALSE(fs::exists(root / "y"));

  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("distill").code, 2);
  EXPECT_EQ(run("-j 0 inspect --defaults").code, 2);
  EXPECT_EQ(run("inspect").code, 2);
}

}  // namespace
