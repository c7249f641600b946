// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "acs/errors.hpp"
#include "acs/hash.hpp"
#include "acs/io/config.hpp"
#include "acs/io/csv.hpp"
#include "acs/io/runner.hpp"

namespace acs::io {
namespace {

namespace fs = std::filesystem;

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

// Small, fast configuration for end-to-end runs.
RunConfig quick_config() {
  RunConfig c = default_config();
  c.schedule.steps = 20;
  c.plan.sizes = {2, 2, 3};
  c.plan.guidance = 0.1;
  c.discriminator.hidden = {16};
  c.discriminator.optimizer.steps = 40;
  c.evaluation.eval.classifier.hidden = {16};
  c.evaluation.eval.classifier.optimizer.steps = 60;
  c.evaluation.eval.repetitions = 2;
  c.evaluation.eval.test_per_class = 200;
  c.evaluation.oracle_train_per_class = 100;
  c.evaluation.scatter_real_per_class = 5;
  c.sweep.guidance_grid = {0.0, 0.1};
  c.sweep.sizes = {1, 1};
  c.sweep.curricula_grid = {1, 2};
  c.sweep.budget = 2;
  c.sweep.seeds = {1};
  return c;
}

struct TempDir : ::testing::Test {
  fs::path root;
  void SetUp() override {
    root = fs::temp_directory_path() /
           ("acs_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root);
    fs::create_directories(root);
  }
  void TearDown() override { fs::remove_all(root); }
};

int error_line(const std::string& yaml) {
  try {
    parse_config(yaml);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

TEST(Csv, RoundTripAndErrors) {
  CsvTable t({"a", "b"});
  t.add_row({"1", "x"});
  t.add_row({"2.5", "y"});
  const auto back = parse_csv(t.to_string());
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.column("b"), 1u);
  EXPECT_ANY_THROW(back.column("c"));
  EXPECT_ANY_THROW(t.add_row({"only one"}));
  EXPECT_ANY_THROW(parse_csv("a,b\n1\n"));
}

TEST(Csv, DoubleFormattingRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 1e300, 0.0, 123456789.125}) EXPECT_EQ(parse_double(format_double(v)), v);
  EXPECT_ANY_THROW(parse_double("1.5x"));
  EXPECT_ANY_THROW(parse_uint("-3"));
  EXPECT_EQ(parse_int("-3"), -3);
}

TEST(Config, DefaultsRoundTripThroughYaml) {
  const RunConfig c = default_config();
  const std::string text = emit_config(c);
  EXPECT_EQ(emit_config(parse_config(text)), text);
  auto q = quick_config();
  q.plan.guidance_per_curriculum = {0.0, 0.2, 0.3};
  q.target.scenario.clear();
  q.target.dimension = 2;
  q.target.classes = {{gmm::Component::isotropic(1.0, {0.0, 1.0}, 0.5)},
                      {gmm::Component{0.5, {1.0, 0.0}, {1.0, 0.2, 0.2, 2.0}}, gmm::Component::isotropic(0.5, {3, 3}, 1)}};
  const std::string qtext = emit_config(q);
  EXPECT_EQ(emit_config(parse_config(qtext)), qtext);
}

TEST(Config, PartialConfigKeepsDefaults) {
  const auto c = parse_config("schema_version: 1\nplan:\n  guidance: 0.2\n");
  EXPECT_EQ(c.plan.guidance, 0.2);
  EXPECT_EQ(c.plan.sizes, default_config().plan.sizes);
  EXPECT_EQ(c.schedule.steps, 50u);
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("schema_version: 1\nplan:\n  sizes: [1, 2]\n  bogus: 3\n"), 4);
  EXPECT_EQ(error_line("schema_version: 1\nschedule:\n  steps: -4\n"), 3);
  EXPECT_EQ(error_line("schema_version: 1\nschedule:\n  steps: many\n"), 3);
  EXPECT_GE(error_line("schema_version: 1\nplan: [\n"), 2);
  EXPECT_GT(error_line("schema_version: 1\nnonsense: 1\n"), 0);
  EXPECT_THROW(parse_config("plan:\n  guidance: 0.1\n"), ConfigError);
  EXPECT_THROW(parse_config("schema_version: 2\n"), ConfigError);
}

TEST(Config, RejectsGuidedFirstCurriculum) {
  try {
    parse_config("schema_version: 1\nplan:\n  sizes: [2, 2]\n  guidance_per_curriculum: [0.1, 0.1]\n");
    FAIL() << "accepted g_0 != 0";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("first curriculum"), std::string::npos);
    EXPECT_GT(e.line(), 0);
  }
}

TEST(Config, RejectsInvariantViolations) {
  const char* cases[] = {
      "schema_version: 1\nplan:\n  sizes: [2, 0]\n",
      "schema_version: 1\nplan:\n  sizes: []\n",
      "schema_version: 1\nplan:\n  guidance: -0.1\n",
      "schema_version: 1\nplan:\n  sizes: [1, 1]\n  guidance_per_curriculum: [0]\n",
      "schema_version: 1\nschedule:\n  eta: 1.5\n",
      "schema_version: 1\nschedule:\n  final_alpha_bar: 0\n",
      "schema_version: 1\nschedule:\n  steps: 0\n",
      "schema_version: 1\ndiscriminator:\n  optimizer:\n    momentum: 1.0\n",
      "schema_version: 1\nevaluation:\n  repetitions: 0\n",
      "schema_version: 1\nevaluation:\n  coverage_radius: 0\n",
      "schema_version: 1\nevaluation:\n  fidelity_bound: -1\n",
      "schema_version: 1\ntarget:\n  scenario: moon\n",
      "schema_version: 1\ntarget:\n  dimension: 2\n  classes:\n    - components:\n        - {weight: 0.5, mean: [0, 0], stddev: 1}\n",
      "schema_version: 1\ntarget:\n  dimension: 2\n  classes:\n    - components:\n        - {weight: 1, mean: [0, 0], stddev: 0}\n",
      "schema_version: 1\ntarget:\n  dimension: 2\n  classes:\n    - components:\n        - {weight: 1, mean: [0], stddev: 1}\n",
      "schema_version: 1\ntarget:\n  scenario: default\n  dimension: 2\n",
      "schema_version: 1\nsweep:\n  curricula_grid: [5]\n",
      "schema_version: 1\nsweep:\n  budget: 2\n",
      "schema_version: 1\nsweep:\n  seeds: []\n",
      "schema_version: 1\ndenoiser:\n  kind: magic\n",
  };
  for (const char* text : cases) EXPECT_THROW(parse_config(text), ConfigError) << text;
}

TEST(Config, ExplicitMixtureTarget) {
  const auto c = parse_config(
      "schema_version: 1\n"
      "target:\n"
      "  dimension: 2\n"
      "  classes:\n"
      "    - components:\n"
      "        - {weight: 1, mean: [-3, 0], stddev: 0.5}\n"
      "    - components:\n"
      "        - {weight: 0.5, mean: [3, 0], covariance: [[1, 0.3], [0.3, 1]]}\n"
      "        - {weight: 0.5, mean: [3, 3], stddev: 1}\n");
  const auto t = make_target(c);
  EXPECT_EQ(t.num_classes(), 2u);
  EXPECT_EQ(t.components(1).size(), 2u);
  EXPECT_EQ(t.components(1)[0].covariance[1], 0.3);
}

TEST(Config, MakePlanAppliesOverrides) {
  auto c = default_config();
  auto plan = make_plan(c);
  EXPECT_EQ(plan.guidance, (std::vector<double>{0.0, 0.05, 0.05, 0.05, 0.05}));
  EXPECT_EQ(plan.base_seed, 2025u);
  c.plan.guidance_per_curriculum = {0.0, 0.1, 0.2, 0.3, 0.4};
  EXPECT_EQ(make_plan(c).guidance, c.plan.guidance_per_curriculum);
}

TEST_F(TempDir, LoadConfigFromFile) {
  write_file(root / "c.yaml", "schema_version: 1\nplan:\n  seed: 9\n");
  EXPECT_EQ(load_config(root / "c.yaml").plan.seed, 9u);
  EXPECT_THROW(load_config(root / "missing.yaml"), RuntimeError);
}

TEST_F(TempDir, DistillWritesCountsAndManifest) {
  const auto cfg = quick_config();
  const auto summary = run_distill(cfg, root / "run");
  for (const char* f : {"dataset.csv", "trajectories.csv", "manifest.yaml", "checkpoints/discriminator_1.ckpt",
                        "checkpoints/discriminator_2.ckpt"})
    EXPECT_TRUE(fs::exists(root / "run" / f)) << f;
  EXPECT_FALSE(fs::exists(root / "run.partial"));
  for (const auto& [name, hash] : summary.files) EXPECT_EQ(sha256_file(root / "run" / name), hash) << name;

  const auto table = read_csv(root / "run" / "dataset.csv");
  EXPECT_EQ(table.rows.size(), 3u * 7u);
  const auto loaded = load_dataset(root / "run");
  EXPECT_EQ(loaded.content_hash, summary.dataset_hash);
  for (int y = 0; y < 3; ++y) {
    EXPECT_EQ(loaded.dataset.count(0, y), 2u);
    EXPECT_EQ(loaded.dataset.count(2, y), 3u);
  }
  EXPECT_EQ(emit_config(loaded.config), emit_config(cfg));
}

TEST_F(TempDir, DistillIsDeterministicAndWorkerIndependent) {
  const auto cfg = quick_config();
  const auto a = run_distill(cfg, root / "a", {1, {}});
  const auto b = run_distill(cfg, root / "b", {3, {}});
  EXPECT_EQ(a.dataset_hash, b.dataset_hash);
  EXPECT_EQ(a.files.at("dataset.csv"), b.files.at("dataset.csv"));
  EXPECT_EQ(a.files.at("trajectories.csv"), b.files.at("trajectories.csv"));
}

TEST_F(TempDir, LoadDetectsCorruption) {
  run_distill(quick_config(), root / "run");
  auto text = read_file(root / "run" / "dataset.csv");
  text[text.size() - 2] = text[text.size() - 2] == '1' ? '2' : '1';
  write_file(root / "run" / "dataset.csv", text);
  EXPECT_THROW(load_dataset(root / "run"), RuntimeError);
  EXPECT_THROW(load_dataset(root / "nowhere"), RuntimeError);
}

TEST_F(TempDir, DistillRefusesForeignDirectoryAndCleansUp) {
  fs::create_directories(root / "busy");
  write_file(root / "busy" / "keep.txt", "x");
  EXPECT_THROW(run_distill(quick_config(), root / "busy"), RuntimeError);
  EXPECT_TRUE(fs::exists(root / "busy" / "keep.txt"));

  auto bad = quick_config();
  bad.target.scenario.clear();
  bad.target.dimension = 2;
  bad.target.classes = {{gmm::Component::isotropic(1.0, {0, 0}, 1.0)}};  // one class: discriminator cannot train
  EXPECT_ANY_THROW(run_distill(bad, root / "fail"));
  EXPECT_FALSE(fs::exists(root / "fail"));
  EXPECT_FALSE(fs::exists(root / "fail.partial"));
}

TEST_F(TempDir, EvalOutputsAndNestedPrefixes) {
  run_distill(quick_config(), root / "run");
  const auto summary = run_eval(root / "run", std::nullopt, {}, root / "eval");
  for (const char* f : {"eval_accuracy.csv", "eval_summary.csv", "coverage.csv", "complexity_curve.csv",
                        "scatter.csv", "manifest.yaml"})
    EXPECT_TRUE(fs::exists(root / "eval" / f)) << f;
  const auto eval_summary = read_csv(root / "eval" / "eval_summary.csv");
  ASSERT_EQ(eval_summary.rows.size(), 3u);
  EXPECT_EQ(eval_summary.rows[0][eval_summary.column("images_per_class")], "2");
  EXPECT_EQ(eval_summary.rows[1][eval_summary.column("images_per_class")], "4");
  EXPECT_EQ(eval_summary.rows[2][eval_summary.column("images_per_class")], "7");

  const auto again = run_eval(root / "run", std::nullopt, {}, root / "eval2");
  EXPECT_EQ(summary.files.at("eval_accuracy.csv"), again.files.at("eval_accuracy.csv"));
  EXPECT_EQ(summary.files.at("complexity_curve.csv"), again.files.at("complexity_curve.csv"));

  const auto one = run_eval(root / "run", std::nullopt, {2}, root / "eval3");
  const auto only = read_csv(root / "eval3" / "eval_summary.csv");
  ASSERT_EQ(only.rows.size(), 1u);
  EXPECT_EQ(only.rows[0], eval_summary.rows[1]);
  EXPECT_ANY_THROW(run_eval(root / "run", std::nullopt, {4}, root / "eval4"));
  EXPECT_ANY_THROW(run_eval(root / "missing", std::nullopt, {}, root / "eval5"));
}

TEST_F(TempDir, SweepTablesIncludeBaselines) {
  const auto cfg = quick_config();
  run_sweep(SweepKind::kGuidance, cfg, root / "g");
  const auto g = read_csv(root / "g" / "sweep_guidance.csv");
  EXPECT_EQ(g.rows.size(), 2u * 1u * 2u);
  EXPECT_EQ(g.rows[0][g.column("g")], "0");
  run_sweep(SweepKind::kCurricula, cfg, root / "c");
  const auto c = read_csv(root / "c" / "sweep_curricula.csv");
  ASSERT_EQ(c.rows.size(), 2u);
  EXPECT_EQ(c.rows[0][c.column("curricula")], "1");
  EXPECT_EQ(sweep_kind_from_string("curricula"), SweepKind::kCurricula);
  EXPECT_THROW(sweep_kind_from_string("other"), ConfigError);
}

TEST_F(TempDir, ReplayReproducesEveryFile) {
  run_distill(quick_config(), root / "run");
  const auto r = replay(root / "run" / "manifest.yaml", root / "replayed");
  EXPECT_TRUE(r.identical()) << (r.mismatches.empty() ? "" : r.mismatches.front());
  run_eval(root / "run", std::nullopt, {1, 3}, root / "eval");
  const auto e = replay(root / "eval" / "manifest.yaml", root / "eval_replayed");
  EXPECT_TRUE(e.identical());
  EXPECT_ANY_THROW(replay(root / "run" / "manifest.yaml", root / "run"));
}

TEST_F(TempDir, ReplayReportsTamperedManifest) {
  run_distill(quick_config(), root / "run");
  auto text = read_file(root / "run" / "manifest.yaml");
  const auto pos = text.find("dataset.csv: ");
  ASSERT_NE(pos, std::string::npos);
  text[pos + 13] = text[pos + 13] == 'a' ? 'b' : 'a';
  write_file(root / "run" / "manifest.yaml", text);
  const auto r = replay(root / "run" / "manifest.yaml", root / "replayed");
  EXPECT_FALSE(r.identical());
  EXPECT_EQ(r.mismatches, (std::vector<std::string>{"dataset.csv"}));
}

TEST_F(TempDir, LearnedDenoiserCheckpointIsWritten) {
  auto cfg = quick_config();
  cfg.denoiser.kind = DenoiserSource::kLearned;
  cfg.denoiser.hidden = {16};
  cfg.denoiser.train_per_class = 50;
  cfg.denoiser.optimizer.steps = 30;
  cfg.denoiser.optimizer.batch_size = 32;
  const auto summary = run_distill(cfg, root / "run");
  EXPECT_TRUE(fs::exists(root / "run" / "checkpoints" / "denoiser.ckpt"));
  EXPECT_TRUE(replay(root / "run" / "manifest.yaml", root / "again").identical());
  EXPECT_EQ(load_dataset(root / "run").content_hash, summary.dataset_hash);
}

}  // namespace
}  // namespace acs::io
