// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <memory>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "acs/errors.hpp"
#include "acs/evaluation/evaluation.hpp"
#include "acs/io/config.hpp"
#include "acs/io/csv.hpp"

namespace acs::evaluation {
namespace {

namespace fs = std::filesystem;

EvalConfig small_eval(std::uint64_t seed = 1) {
  EvalConfig c;
  c.classifier.hidden = {32};
  c.classifier.optimizer = {0.05, 0.9, 300, 32, 0};
  c.test_per_class = 1000;
  c.repetitions = 2;
  c.seed = seed;
  return c;
}

// Wraps points into a dataset with one curriculum per group.
curriculum::DistilledDataset as_dataset(const std::vector<std::vector<gmm::LabeledPoint>>& groups, std::size_t classes,
                                        std::size_t dimension) {
  curriculum::DistilledDataset ds;
  ds.num_classes = classes;
  ds.dimension = dimension;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    curriculum::CurriculumRecord rec;
    std::vector<std::size_t> next(classes, 0);
    for (const auto& p : groups[i]) rec.samples.push_back({p, {}, i, next[p.y]++});
    ds.curricula.push_back(std::move(rec));
    ds.plan.sizes.push_back(groups[i].size() / classes);
    ds.plan.guidance.push_back(0.0);
  }
  return ds;
}

std::vector<gmm::LabeledPoint> mode_means(const gmm::GmmTarget& t) {
  std::vector<gmm::LabeledPoint> out;
  for (int y = 0; y < static_cast<int>(t.num_classes()); ++y)
    for (const auto& c : t.components(y)) out.push_back({c.mean, y});
  return out;
}

TEST(EvalReport, StatisticsRecomputeFromList) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> acc(1 + trial % 6);
    for (double& a : acc) a = u(rng);
    const auto r = EvalReport::from_accuracies(acc);
    EXPECT_EQ(r.accuracies, acc);
    const double mean = std::accumulate(acc.begin(), acc.end(), 0.0) / acc.size();
    EXPECT_NEAR(r.mean, mean, 1e-15);
    double ss = 0.0;
    for (double a : acc) ss += (a - mean) * (a - mean);
    EXPECT_NEAR(r.stddev, acc.size() > 1 ? std::sqrt(ss / (acc.size() - 1)) : 0.0, 1e-15);
  }
  EXPECT_THROW(EvalReport::from_accuracies({}), ContractError);
}

TEST(TrainEval, SeparableScenarioIsNearlyPerfect) {
  const auto target = gmm::builtin_scenario("two_clusters");
  const auto s = gmm::sample_target(target, 20, 3);
  const auto r = train_eval_classifier(s, target, small_eval());
  EXPECT_EQ(r.accuracies.size(), 2u);
  EXPECT_GE(r.mean, 0.95);
  // Bayes boundary x = 0 between N((-4,0), I) and N((4,0), I): error Phi(-4).
  EXPECT_GE(r.mean, 1.0 - 0.5 * std::erfc(4.0 / std::sqrt(2.0)) - 0.02);
}

TEST(TrainEval, OnePointPerModeMean) {
  const auto target = gmm::builtin_scenario("two_clusters");
  EXPECT_GE(train_eval_classifier(mode_means(target), target, small_eval()).mean, 0.9);
}

TEST(TrainEval, PermutedLabelsScoreChance) {
  const auto target = gmm::default_scenario();
  std::vector<double> means;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto s = gmm::sample_target(target, 30, 100 + seed);
    std::vector<int> labels;
    for (const auto& p : s) labels.push_back(p.y);
    std::shuffle(labels.begin(), labels.end(), std::mt19937_64(seed));
    for (std::size_t i = 0; i < s.size(); ++i) s[i].y = labels[i];
    auto cfg = small_eval(seed);
    cfg.repetitions = 1;
    means.push_back(train_eval_classifier(s, target, cfg).mean);
  }
  const double m = std::accumulate(means.begin(), means.end(), 0.0) / means.size();
  double ss = 0.0;
  for (double v : means) ss += (v - m) * (v - m);
  const double se = std::sqrt(ss / (means.size() - 1) / means.size());
  EXPECT_LT(std::abs(m - 1.0 / 3.0), 4.0 * se);
}

TEST(TrainEval, DeterministicGivenSeed) {
  const auto target = gmm::default_scenario();
  const auto s = gmm::sample_target(target, 5, 1);
  EXPECT_EQ(train_eval_classifier(s, target, small_eval(3)).accuracies,
            train_eval_classifier(s, target, small_eval(3)).accuracies);
}

TEST(Coverage, Examples) {
  const auto target = gmm::default_scenario();
  const auto full = mode_coverage(mode_means(target), target, 2.0);
  EXPECT_EQ(full.overall, 1.0);
  for (double c : full.per_class) EXPECT_EQ(c, 1.0);
  const auto empty = mode_coverage({}, target, 2.0);
  EXPECT_EQ(empty.overall, 0.0);
  const std::vector<gmm::LabeledPoint> one{{target.components(1)[2].mean, 1}};
  const auto single = mode_coverage(one, target, 2.0);
  EXPECT_EQ(single.per_class, (std::vector<double>{0.0, 0.25, 0.0}));
  EXPECT_EQ(single.overall, 1.0 / 12.0);
  EXPECT_THROW(mode_coverage(one, target, 0.0), ContractError);
}

TEST(Coverage, WrongClassDoesNotCount) {
  const auto target = gmm::default_scenario();
  const std::vector<gmm::LabeledPoint> misplaced{{target.components(1)[0].mean, 0}};
  EXPECT_EQ(mode_coverage(misplaced, target, 2.0).overall, 0.0);
}

TEST(Coverage, MonotoneUnderAddedSamples) {
  const auto target = gmm::default_scenario();
  const auto pool = gmm::sample_target(target, 40, 9);
  std::vector<gmm::LabeledPoint> s;
  std::vector<double> previous(3, 0.0);
  for (std::size_t i = 0; i < pool.size(); i += 7) {
    s.push_back(pool[i]);
    const auto r = mode_coverage(s, target, 1.0);
    for (std::size_t y = 0; y < 3; ++y) EXPECT_GE(r.per_class[y], previous[y]);
    previous = r.per_class;
  }
}

TEST(ComplexityCurve, FlatWhenCurriculaAreIdentical) {
  const auto target = gmm::default_scenario();
  const auto oracle = train_oracle(target, 200, small_eval().classifier, 1);
  const auto means = mode_means(target);
  const auto curve = complexity_curve(as_dataset({means, means, means}, 3, 2), oracle);
  ASSERT_EQ(curve.accuracy.size(), 3u);
  EXPECT_EQ(curve.accuracy[0], accuracy(oracle, means));
  EXPECT_EQ(curve.accuracy[1], curve.accuracy[0]);
  EXPECT_EQ(curve.accuracy[2], curve.accuracy[0]);
}

TEST(ComplexityCurve, IidCurriculaMatchOracleAccuracy) {
  const auto target = gmm::default_scenario();
  const auto oracle = train_oracle(target, 500, small_eval().classifier, 2);
  const double p = accuracy(oracle, gmm::sample_target(target, 20000, 77));
  std::vector<std::vector<gmm::LabeledPoint>> groups;
  for (std::uint64_t i = 0; i < 4; ++i) groups.push_back(gmm::sample_target(target, 200, 1000 + i));
  const auto curve = complexity_curve(as_dataset(groups, 3, 2), oracle);
  const double se = std::sqrt(std::max(p * (1 - p), 1e-4) / 600.0);
  for (double a : curve.accuracy) EXPECT_LT(std::abs(a - p), 4.0 * se + 1e-12);
}

TEST(Spearman, KnownValues) {
  const std::vector<double> x{1, 2, 3, 4};
  EXPECT_NEAR(spearman(x, std::vector<double>{10, 20, 30, 40}), 1.0, 1e-15);
  EXPECT_NEAR(spearman(x, std::vector<double>{4, 3, 2, 1}), -1.0, 1e-15);
  EXPECT_EQ(spearman(x, std::vector<double>{5, 5, 5, 5}), 0.0);
  // Average ranks (1, 2.5, 2.5, 4) against (1, 2, 3, 4): Pearson of ranks.
  const std::vector<double> ties{0.1, 0.5, 0.5, 0.9};
  const double r = spearman(x, ties);
  const std::vector<double> rx{1, 2, 3, 4}, ry{1, 2.5, 2.5, 4};
  double sxy = 0, sxx = 0, syy = 0;
  for (int i = 0; i < 4; ++i) {
    sxy += (rx[i] - 2.5) * (ry[i] - 2.5);
    sxx += (rx[i] - 2.5) * (rx[i] - 2.5);
    syy += (ry[i] - 2.5) * (ry[i] - 2.5);
  }
  EXPECT_NEAR(r, sxy / std::sqrt(sxx * syy), 1e-15);
  EXPECT_ANY_THROW(spearman(x, std::vector<double>{1, 2}));
}

TEST(PrefixSplit, Convention) {
  EXPECT_EQ(prefix_split(50, 4), (std::vector<std::size_t>{5, 5, 10, 30}));
  EXPECT_EQ(prefix_split(50, 1), (std::vector<std::size_t>{50}));
  EXPECT_EQ(prefix_split(4, 4), (std::vector<std::size_t>{1, 1, 1, 1}));
  for (std::size_t budget = 4; budget <= 60; ++budget)
    for (std::size_t nc = 1; nc <= 4; ++nc) {
      const auto s = prefix_split(budget, nc);
      EXPECT_EQ(s.size(), nc);
      EXPECT_EQ(std::accumulate(s.begin(), s.end(), std::size_t{0}), budget);
      for (auto n : s) EXPECT_GE(n, 1u);
    }
  EXPECT_THROW(prefix_split(3, 4), ConfigError);
  EXPECT_THROW(prefix_split(10, 5), ConfigError);
  EXPECT_THROW(prefix_split(10, 0), ConfigError);
}

struct SweepFixture : ::testing::Test {
  std::shared_ptr<const gmm::GmmTarget> target = std::make_shared<const gmm::GmmTarget>(gmm::default_scenario());
  diffusion::Denoiser denoiser = diffusion::Denoiser::analytic(target);
  diffusion::NoiseSchedule schedule = diffusion::NoiseSchedule::cosine(20, 1e-3, 1.0);
  adversary::DiscriminatorConfig disc{{16}, numeric::Activation::kRelu, {0.05, 0.9, 40, 16, 0}};
  Experiment experiment() const {
    Experiment e{target.get(), &denoiser, &schedule, small_eval(), 2.0, 1};
    e.eval.repetitions = 1;
    e.eval.test_per_class = 200;
    e.eval.classifier.optimizer.steps = 50;
    return e;
  }
};

TEST_F(SweepFixture, GuidanceSweepZeroRowIsBaselineAndDeterministic) {
  const auto base = curriculum::CurriculumPlan::with_global_guidance({1, 1}, 0.0, 0, disc);
  const std::vector<double> grid{0.0, 0.1};
  const std::vector<std::uint64_t> seeds{4};
  const auto rows = sweep_guidance(base, grid, seeds, experiment());
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].g, 0.0);
  EXPECT_EQ(rows[0].prefix, 1u);

  const auto baseline = curriculum::run_acs(curriculum::CurriculumPlan::with_global_guidance({2}, 0.0, 4, disc),
                                            denoiser, schedule, 3);
  auto eval = experiment().eval;
  eval.seed = numeric::derive_seed({eval.seed, 4});
  EXPECT_EQ(rows[1].report.accuracies, train_eval_classifier(baseline.points(), *target, eval).accuracies);

  const auto again = sweep_guidance(base, grid, seeds, experiment());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].report.accuracies, again[i].report.accuracies);
    EXPECT_EQ(rows[i].coverage, again[i].coverage);
  }
}

TEST_F(SweepFixture, CurriculaSweepSingleCurriculumIsBaseline) {
  const auto base = curriculum::CurriculumPlan::with_global_guidance({1, 1}, 0.1, 0, disc);
  const std::vector<std::size_t> grid{1, 2};
  const std::vector<std::uint64_t> seeds{2};
  const auto rows = sweep_curricula(base, 3, grid, seeds, experiment());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].sizes, (std::vector<std::size_t>{3}));
  const auto baseline = curriculum::run_acs(curriculum::CurriculumPlan::with_global_guidance({3}, 0.0, 2, disc),
                                            denoiser, schedule, 3);
  auto eval = experiment().eval;
  eval.seed = numeric::derive_seed({eval.seed, 2});
  EXPECT_EQ(rows[0].report.accuracies, train_eval_classifier(baseline.points(), *target, eval).accuracies);
  const auto again = sweep_curricula(base, 3, grid, seeds, experiment());
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].report.accuracies, again[i].report.accuracies);
}

TEST(Pca, IdentityInTwoDimensions) {
  const auto target = gmm::default_scenario();
  const auto s = gmm::sample_target(target, 3, 1);
  const auto real = gmm::sample_target(target, 2, 2);
  const auto ds = as_dataset({s}, 3, 2);
  const auto rows = pca_project(ds, real);
  ASSERT_EQ(rows.size(), s.size() + real.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(rows[i].pc1, s[i].x[0]);
    EXPECT_EQ(rows[i].pc2, s[i].x[1]);
    EXPECT_EQ(rows[i].source, "distilled");
    EXPECT_EQ(rows[i].curriculum, 0);
  }
  EXPECT_EQ(rows.back().source, "real");
  EXPECT_EQ(rows.back().curriculum, -1);
}

TEST(Pca, LeadingComponentCarriesMostVariance) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<gmm::LabeledPoint> pts;
  for (int i = 0; i < 300; ++i) pts.push_back({{5.0 * n(rng), 2.0 * n(rng), 0.1 * n(rng)}, i % 2});
  const auto rows = pca_project(as_dataset({pts}, 2, 3), {});
  double v1 = 0, v2 = 0;
  for (const auto& r : rows) v1 += r.pc1 * r.pc1, v2 += r.pc2 * r.pc2;
  EXPECT_GT(v1, v2);
  EXPECT_NEAR(v1 / rows.size(), 25.0, 5.0);
  EXPECT_NEAR(v2 / rows.size(), 4.0, 1.0);
}

TEST(Pca, ScatterCsvRoundTrip) {
  const auto target = gmm::default_scenario();
  const auto ds = as_dataset({gmm::sample_target(target, 2, 1)}, 3, 2);
  const auto real = gmm::sample_target(target, 1, 2);
  const fs::path path = fs::temp_directory_path() / "acs_scatter_test.csv";
  pca_scatter_export(ds, real, path);
  const auto table = io::read_csv(path);
  EXPECT_EQ(table.header, (std::vector<std::string>{"source", "class", "curriculum", "pc1", "pc2"}));
  ASSERT_EQ(table.rows.size(), 9u);
  EXPECT_EQ(io::parse_double(table.rows[0][3]), ds.curricula[0].samples[0].point.x[0]);
  fs::remove(path);
}

TEST(Fidelity, SmallGuidanceStaysOnTheDataManifold) {
  const auto config = io::default_config();
  auto target = std::make_shared<const gmm::GmmTarget>(io::make_target(config));
  const auto denoiser = diffusion::Denoiser::analytic(target);
  const auto schedule = io::make_schedule(config);
  // Unguided reference with the same initial noise as the guided curriculum.
  const auto reference = curriculum::run_acs(
      curriculum::CurriculumPlan::with_global_guidance({50}, 0.0, 7, config.discriminator), denoiser, schedule, 3);
  std::vector<gmm::LabeledPoint> paired;
  for (const auto& s : reference.curricula[0].samples)
    if (s.index >= 10) paired.push_back(s.point);
  const double base = mean_log_density(paired, *target);
  for (double g : {0.02, config.plan.guidance}) {
    const auto ds = curriculum::run_acs(
        curriculum::CurriculumPlan::with_global_guidance({10, 40}, g, 7, config.discriminator), denoiser, schedule, 3);
    EXPECT_LT(base - mean_log_density(ds.points_of(1), *target), config.evaluation.fidelity_bound) << "g = " << g;
  }
}

TEST(Fidelity, MeanLogDensityOfModeMeans) {
  const auto target = gmm::builtin_scenario("two_clusters");
  const auto means = mode_means(target);
  // log N(0; 0, I_2) = -log(2 pi).
  EXPECT_NEAR(mean_log_density(means, target), -std::log(2.0 * std::numbers::pi), 1e-12);
  EXPECT_THROW(mean_log_density({}, target), ContractError);
}

}  // namespace
}  // namespace acs::evaluation
