// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include "acs/evaluation/evaluation.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include "acs/errors.hpp"
#include "acs/io/csv.hpp"
#include "acs/numeric/rng.hpp"

namespace acs::evaluation {
namespace {

adversary::DiscriminatorConfig as_discriminator_config(const ClassifierConfig& c, std::uint64_t seed) {
  adversary::DiscriminatorConfig config;
  config.hidden = c.hidden;
  config.activation = c.activation;
  config.optimizer = c.optimizer;
  config.optimizer.seed = seed;
  return config;
}

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

void EvalConfig::validate() const {
  if (test_per_class == 0) throw ConfigError("evaluation: test_per_class must be positive");
  if (repetitions == 0) throw ConfigError("evaluation: repetitions must be at least 1");
  classifier.optimizer.validate();
}

EvalReport EvalReport::from_accuracies(std::vector<double> accuracies) {
  if (accuracies.empty()) throw ContractError("EvalReport: at least one repetition is required");
  EvalReport r;
  const double n = static_cast<double>(accuracies.size());
  r.mean = std::accumulate(accuracies.begin(), accuracies.end(), 0.0) / n;
  if (accuracies.size() > 1) {
    double ss = 0.0;
    for (double a : accuracies) ss += (a - r.mean) * (a - r.mean);
    r.stddev = std::sqrt(ss / (n - 1.0));
  }
  r.accuracies = std::move(accuracies);
  return r;
}

EvalReport train_eval_classifier(std::span<const gmm::LabeledPoint> distilled, const gmm::GmmTarget& target,
                                 const EvalConfig& config) {
  if (distilled.empty()) throw ContractError("train_eval_classifier: empty distilled set");
  config.validate();
  std::vector<double> accuracies;
  for (std::size_t rep = 0; rep < config.repetitions; ++rep) {
    const auto cfg = as_discriminator_config(config.classifier, numeric::derive_seed({config.seed, 0x6576616cULL, rep}));
    const auto trained = adversary::train_discriminator(distilled, target.num_classes(), cfg);
    const auto test =
        gmm::sample_target(target, config.test_per_class, numeric::derive_seed({config.seed, 0x74657374ULL, rep}));
    accuracies.push_back(adversary::accuracy(trained.discriminator, test));
  }
  return EvalReport::from_accuracies(std::move(accuracies));
}

adversary::Discriminator train_oracle(const gmm::GmmTarget& target, std::size_t n_per_class,
                                      const ClassifierConfig& config, std::uint64_t seed) {
  const auto data = gmm::sample_target(target, n_per_class, numeric::derive_seed({seed, 0x6f72636cULL}));
  return adversary::train_discriminator(data, target.num_classes(), as_discriminator_config(config, seed)).discriminator;
}

double mean_log_density(std::span<const gmm::LabeledPoint> points, const gmm::GmmTarget& target) {
  if (points.empty()) throw ContractError("mean_log_density: no points");
  double total = 0.0;
  for (const auto& p : points) total += target.log_density(p.x, p.y);
  return total / static_cast<double>(points.size());
}

ComplexityCurve complexity_curve(const curriculum::DistilledDataset& dataset, const adversary::Discriminator& oracle) {
  ComplexityCurve curve;
  for (std::size_t i = 0; i < dataset.curricula.size(); ++i)
    curve.accuracy.push_back(adversary::accuracy(oracle, dataset.points_of(i)));
  return curve;
}

CoverageReport mode_coverage(std::span<const gmm::LabeledPoint> samples, const gmm::GmmTarget& target, double r) {
  if (!(r > 0.0)) throw ContractError("mode_coverage: radius must be positive");
  CoverageReport report;
  report.radius = r;
  std::size_t covered_total = 0;
  for (std::size_t y = 0; y < target.num_classes(); ++y) {
    const auto& comps = target.components(static_cast<int>(y));
    std::size_t covered = 0;
    for (std::size_t k = 0; k < comps.size(); ++k) {
      const bool hit = std::any_of(samples.begin(), samples.end(), [&](const gmm::LabeledPoint& p) {
        return p.y == static_cast<int>(y) && target.mahalanobis(p.x, p.y, k) <= r;
      });
      covered += hit ? 1 : 0;
    }
    report.per_class.push_back(static_cast<double>(covered) / static_cast<double>(comps.size()));
    covered_total += covered;
  }
  report.overall = static_cast<double>(covered_total) / static_cast<double>(target.total_components());
  return report;
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ContractError("spearman: length mismatch");
  if (x.size() < 2) return 0.0;
  const auto rx = average_ranks(x), ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

std::vector<std::size_t> prefix_split(std::size_t budget, std::size_t curricula) {
  static constexpr std::size_t kReference[] = {5, 5, 10, 30};
  static constexpr std::size_t kReferenceTotal = 50;
  if (curricula == 0 || curricula > std::size(kReference))
    throw ConfigError("prefix_split: the number of curricula must lie in [1, 4]");
  if (budget < curricula) throw ConfigError("prefix_split: budget must be at least the number of curricula");
  std::vector<double> weights(kReference, kReference + curricula - 1);
  weights.push_back(static_cast<double>(kReferenceTotal) - std::accumulate(weights.begin(), weights.end(), 0.0));

  std::vector<double> ideal;
  std::vector<std::size_t> sizes;
  for (double w : weights) {
    ideal.push_back(static_cast<double>(budget) * w / static_cast<double>(kReferenceTotal));
    sizes.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(ideal.back()))));
  }
  std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  while (total < budget) {
    std::size_t best = 0;
    double best_gap = -1.0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const double gap = ideal[i] - static_cast<double>(sizes[i]);
      if (gap > best_gap) best_gap = gap, best = i;
    }
    ++sizes[best];
    ++total;
  }
  while (total > budget) {
    std::size_t best = sizes.size();
    double best_gap = 0.0;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      if (sizes[i] <= 1) continue;
      const double excess = static_cast<double>(sizes[i]) - ideal[i];
      if (best == sizes.size() || excess > best_gap) best_gap = excess, best = i;
    }
    --sizes[best];
    --total;
  }
  return sizes;
}

std::vector<GuidanceSweepRow> sweep_guidance(const curriculum::CurriculumPlan& base, std::span<const double> grid,
                                             std::span<const std::uint64_t> seeds, const Experiment& experiment) {
  std::vector<GuidanceSweepRow> rows;
  for (double g : grid) {
    for (std::uint64_t seed : seeds) {
      curriculum::CurriculumPlan plan = curriculum::CurriculumPlan::with_global_guidance(base.sizes, g, seed, base.discriminator);
      plan.gradient_through_denoiser = base.gradient_through_denoiser;
      const auto dataset =
          curriculum::run_acs(plan, *experiment.denoiser, *experiment.schedule, experiment.target->num_classes(),
                              experiment.workers);
      EvalConfig eval = experiment.eval;
      eval.seed = numeric::derive_seed({experiment.eval.seed, seed});
      for (std::size_t k = 1; k <= plan.curricula(); ++k) {
        const auto points = dataset.points_before(k);
        GuidanceSweepRow row;
        row.g = g;
        row.seed = seed;
        row.prefix = k;
        row.report = train_eval_classifier(points, *experiment.target, eval);
        row.coverage = mode_coverage(points, *experiment.target, experiment.coverage_radius).overall;
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::vector<CurriculaSweepRow> sweep_curricula(const curriculum::CurriculumPlan& base, std::size_t budget,
                                               std::span<const std::size_t> grid, std::span<const std::uint64_t> seeds,
                                               const Experiment& experiment) {
  const double g = base.guidance.size() > 1 ? base.guidance[1] : 0.0;
  std::vector<CurriculaSweepRow> rows;
  for (std::size_t nc : grid) {
    const std::vector<std::size_t> sizes = prefix_split(budget, nc);
    for (std::uint64_t seed : seeds) {
      curriculum::CurriculumPlan plan = curriculum::CurriculumPlan::with_global_guidance(sizes, g, seed, base.discriminator);
      plan.gradient_through_denoiser = base.gradient_through_denoiser;
      const auto dataset =
          curriculum::run_acs(plan, *experiment.denoiser, *experiment.schedule, experiment.target->num_classes(),
                              experiment.workers);
      EvalConfig eval = experiment.eval;
      eval.seed = numeric::derive_seed({experiment.eval.seed, seed});
      const auto points = dataset.points();
      CurriculaSweepRow row;
      row.curricula = nc;
      row.seed = seed;
      row.sizes = sizes;
      row.report = train_eval_classifier(points, *experiment.target, eval);
      row.coverage = mode_coverage(points, *experiment.target, experiment.coverage_radius).overall;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<ScatterRow> pca_project(const curriculum::DistilledDataset& dataset,
                                    std::span<const gmm::LabeledPoint> real) {
  struct Tagged {
    const std::vector<double>* x;
    std::string source;
    int label;
    int curriculum;
  };
  std::vector<Tagged> all;
  for (const auto& record : dataset.curricula)
    for (const auto& s : record.samples)
      all.push_back({&s.point.x, "distilled", s.point.y, static_cast<int>(s.curriculum)});
  for (const auto& p : real) all.push_back({&p.x, "real", p.y, -1});

  const std::size_t d = dataset.dimension;
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), 2);
  Eigen::VectorXd center = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  if (d <= 2) {
    for (std::size_t i = 0; i < d; ++i) basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
  } else if (!all.empty()) {
    for (const auto& t : all) center += Eigen::Map<const Eigen::VectorXd>(t.x->data(), static_cast<Eigen::Index>(d));
    center /= static_cast<double>(all.size());
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (const auto& t : all) {
      const Eigen::VectorXd c =
          Eigen::Map<const Eigen::VectorXd>(t.x->data(), static_cast<Eigen::Index>(d)) - center;
      cov += c * c.transpose();
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    // Eigenvalues ascend; take the two largest.
    basis.col(0) = eig.eigenvectors().col(static_cast<Eigen::Index>(d) - 1);
    basis.col(1) = eig.eigenvectors().col(static_cast<Eigen::Index>(d) - 2);
  }
  std::vector<ScatterRow> rows;
  rows.reserve(all.size());
  for (const auto& t : all) {
    ScatterRow row{t.source, t.label, t.curriculum, 0.0, 0.0};
    if (d <= 2) {
      row.pc1 = (*t.x)[0];
      row.pc2 = d == 2 ? (*t.x)[1] : 0.0;
    } else {
      const Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(t.x->data(), static_cast<Eigen::Index>(d)) - center;
      row.pc1 = basis.col(0).dot(c);
      row.pc2 = basis.col(1).dot(c);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void pca_scatter_export(const curriculum::DistilledDataset& dataset, std::span<const gmm::LabeledPoint> real,
                        const std::filesystem::path& path) {
  io::CsvTable table({"source", "class", "curriculum", "pc1", "pc2"});
  for (const auto& r : pca_project(dataset, real))
    table.add_row({r.source, std::to_string(r.label), std::to_string(r.curriculum), io::format_double(r.pc1),
                   io::format_double(r.pc2)});
  io::write_csv(path, table);
}

}  // namespace acs::evaluation
