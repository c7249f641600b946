// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <random>

namespace acs::gmm {

template <typename Rng>
std::vector<double> GmmTarget::draw(Rng& rng, int y) const {
  check_class(y);
  const auto& comps = classes_[static_cast<std::size_t>(y)];
  std::vector<double> weights;
  weights.reserve(comps.size());
  for (const auto& c : comps) weights.push_back(c.weight);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  const std::size_t k = pick(rng);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> noise(dimension_);
  for (double& v : noise) v = normal(rng);
  const auto& chol = factors_[static_cast<std::size_t>(y)][k].cholesky;
  std::vector<double> x = comps[k].mean;
  for (std::size_t i = 0; i < dimension_; ++i)
    for (std::size_t j = 0; j <= i; ++j) x[i] += chol[i * dimension_ + j] * noise[j];
  return x;
}

}  // namespace acs::gmm
