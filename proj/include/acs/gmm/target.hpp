// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace acs::gmm {

struct Component {
  double weight = 1.0;
  std::vector<double> mean;
  /// Row-major d x d covariance.
  std::vector<double> covariance;

  static Component isotropic(double weight, std::vector<double> mean, double stddev);
};

struct LabeledPoint {
  std::vector<double> x;
  int y = 0;

  friend bool operator==(const LabeledPoint&, const LabeledPoint&) = default;
};

/// Class-conditional Gaussian mixture. Immutable after construction; every
/// member function is safe to call concurrently.
///
/// Noising a sample x0 ~ p(.|y) as z = sqrt(a) x0 + sqrt(1-a) eps gives the
/// mixture sum_k w_k N(sqrt(a) mu_k, a Sigma_k + (1-a) I); the methods taking
/// `alpha_bar` evaluate that noised marginal (alpha_bar = 1 is the data law).
class GmmTarget {
 public:
  GmmTarget(std::size_t dimension, std::vector<std::vector<Component>> classes);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t num_classes() const noexcept { return classes_.size(); }
  const std::vector<Component>& components(int y) const;
  std::size_t total_components() const;

  double log_density(std::span<const double> z, int y, double alpha_bar = 1.0) const;
  /// Gradient of log_density with respect to z.
  std::vector<double> score(std::span<const double> z, int y, double alpha_bar) const;
  /// Optimal noise prediction -sqrt(1-a) * score.
  std::vector<double> exact_eps(std::span<const double> z, int y, double alpha_bar) const;
  /// v^T d(exact_eps)/dz. The Jacobian is symmetric, so this is also J v.
  std::vector<double> exact_eps_vjp(std::span<const double> z, int y, double alpha_bar,
                                    std::span<const double> v) const;

  /// Mahalanobis distance of x from component k of class y under the clean law.
  double mahalanobis(std::span<const double> x, int y, std::size_t k) const;

  /// Draws one clean point of class y.
  template <typename Rng>
  std::vector<double> draw(Rng& rng, int y) const;

 private:
  struct Factor {
    std::vector<double> cholesky;   // lower triangular, row-major
    std::vector<double> precision;  // inverse covariance, row-major
  };
  void check_class(int y) const;

  std::size_t dimension_;
  std::vector<std::vector<Component>> classes_;
  std::vector<std::vector<Factor>> factors_;
};

/// The embedded benchmark scenario: d = 2, 3 classes, 12 isotropic modes
/// (sigma 0.35) at angles 2 pi (j + 0.5) / 12 on a radius-4 circle. Class y
/// owns the contiguous arc of modes 4y..4y+3, each with weight 1/4.
GmmTarget default_scenario();

/// Named built-in targets: "default", "interleaved" (the same ring with mode j
/// in class j mod 3), "standard_normal" (one class, N(0, I_2)), "two_clusters"
/// (two classes, N((-4,0), I) and N((4,0), I)).
GmmTarget builtin_scenario(const std::string& name);
std::vector<std::string> builtin_scenario_names();

/// Exactly n_per_class points per class, ordered by class.
std::vector<LabeledPoint> sample_target(const GmmTarget& target, std::size_t n_per_class, std::uint64_t seed);

}  // namespace acs::gmm

#include "acs/gmm/target_impl.hpp"
