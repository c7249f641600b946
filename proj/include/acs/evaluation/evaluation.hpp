// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "acs/adversary/discriminator.hpp"
#include "acs/curriculum/curriculum.hpp"
#include "acs/gmm/target.hpp"

namespace acs::evaluation {

struct ClassifierConfig {
  std::vector<std::size_t> hidden{64, 64};
  numeric::Activation activation = numeric::Activation::kRelu;
  numeric::OptimizerConfig optimizer{0.05, 0.9, 500, 64, 0};
};

struct EvalConfig {
  ClassifierConfig classifier;
  std::size_t test_per_class = 2000;
  std::size_t repetitions = 3;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Accuracies of independently trained classifiers. stddev is the sample
/// standard deviation (n - 1 denominator), 0 for a single repetition.
struct EvalReport {
  std::vector<double> accuracies;
  double mean = 0.0;
  double stddev = 0.0;

  static EvalReport from_accuracies(std::vector<double> accuracies);
};

struct CoverageReport {
  std::vector<double> per_class;
  double overall = 0.0;
  double radius = 0.0;
};

/// Oracle-classifier accuracy on each curriculum separately.
struct ComplexityCurve {
  std::vector<double> accuracy;
};

/// Train-on-distilled, test-on-real: per repetition, a fresh classifier is
/// trained on `distilled` and scored on `test_per_class` fresh target draws
/// per class.
EvalReport train_eval_classifier(std::span<const gmm::LabeledPoint> distilled, const gmm::GmmTarget& target,
                                 const EvalConfig& config);

/// Classifier trained on a large fresh target sample, used as the fixed judge
/// of sample difficulty.
adversary::Discriminator train_oracle(const gmm::GmmTarget& target, std::size_t n_per_class,
                                      const ClassifierConfig& config, std::uint64_t seed);

ComplexityCurve complexity_curve(const curriculum::DistilledDataset& dataset, const adversary::Discriminator& oracle);

/// A component counts as covered when some sample of its class lies within
/// Mahalanobis distance r of its mean.
CoverageReport mode_coverage(std::span<const gmm::LabeledPoint> samples, const gmm::GmmTarget& target, double r);

/// Mean class-conditional log-density of the points under the clean target.
double mean_log_density(std::span<const gmm::LabeledPoint> points, const gmm::GmmTarget& target);

/// Spearman rank correlation with average ranks for ties. Returns 0 when
/// either input has no rank variance.
double spearman(std::span<const double> x, std::span<const double> y);

/// Per-class curriculum sizes for `curricula` curricula summing to `budget`,
/// proportional to the prefix convention [5, 5, 10, 30] (the last curriculum
/// absorbs the remainder of 50), each at least 1.
std::vector<std::size_t> prefix_split(std::size_t budget, std::size_t curricula);

/// Everything a sweep cell needs besides the plan.
struct Experiment {
  const gmm::GmmTarget* target = nullptr;
  const diffusion::Denoiser* denoiser = nullptr;
  const diffusion::NoiseSchedule* schedule = nullptr;
  EvalConfig eval;
  double coverage_radius = 2.0;
  std::size_t workers = 1;
};

struct GuidanceSweepRow {
  double g = 0.0;
  std::uint64_t seed = 0;
  std::size_t prefix = 0;  // evaluated on nested_subset(S, prefix)
  EvalReport report;
  double coverage = 0.0;
};

struct CurriculaSweepRow {
  std::size_t curricula = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> sizes;
  EvalReport report;
  double coverage = 0.0;
};

/// For every (g, seed): run_acs with g on curricula i >= 1 and base seed
/// `seed`, then evaluate each nested prefix.
std::vector<GuidanceSweepRow> sweep_guidance(const curriculum::CurriculumPlan& base, std::span<const double> grid,
                                             std::span<const std::uint64_t> seeds, const Experiment& experiment);

/// For every (N_c, seed): run_acs with prefix_split(budget, N_c) and the
/// base plan's guidance, evaluated on the full set. N_c = 1 is plain
/// unguided sampling.
std::vector<CurriculaSweepRow> sweep_curricula(const curriculum::CurriculumPlan& base, std::size_t budget,
                                               std::span<const std::size_t> grid, std::span<const std::uint64_t> seeds,
                                               const Experiment& experiment);

struct ScatterRow {
  std::string source;  // "distilled" or "real"
  int label = 0;
  int curriculum = -1;  // -1 for real points
  double pc1 = 0.0;
  double pc2 = 0.0;
};

/// Two-component projection. Two-dimensional data is passed through
/// unchanged; higher dimensions use PCA of the pooled points.
std::vector<ScatterRow> pca_project(const curriculum::DistilledDataset& dataset,
                                    std::span<const gmm::LabeledPoint> real);
void pca_scatter_export(const curriculum::DistilledDataset& dataset, std::span<const gmm::LabeledPoint> real,
                        const std::filesystem::path& path);

}  // namespace acs::evaluation
