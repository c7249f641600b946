// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "acs/numeric/rng.hpp"

namespace acs::diffusion {

/// Coefficients of one reverse step t -> t-1.
struct StepCoefficients {
  double alpha_bar = 1.0;       // alpha_bar_t
  double alpha_bar_prev = 1.0;  // alpha_bar_{t-1}
  double sigma = 0.0;           // sigma_t
};

/// Cumulative signal-retention sequence 1 = alpha_bar_0 > alpha_bar_1 > ... >
/// alpha_bar_T > 0 with DDIM stochasticity
///   sigma_t = eta * sqrt((1 - a_{t-1}) / (1 - a_t)) * sqrt(1 - a_t / a_{t-1}).
class NoiseSchedule {
 public:
  /// alpha_bar_t = cos^2((t / T) * (pi / 2) * s), with s chosen so that
  /// alpha_bar_T equals `final_alpha_bar`.
  static NoiseSchedule cosine(std::size_t steps, double final_alpha_bar = 1e-3, double eta = 0.0);
  /// Explicit alpha_bar_1..alpha_bar_T.
  static NoiseSchedule from_alpha_bars(std::vector<double> alpha_bars, double eta = 0.0);

  std::size_t steps() const noexcept { return alpha_bar_.size() - 1; }
  double eta() const noexcept { return eta_; }
  /// t in [0, T]; alpha_bar(0) == 1.
  double alpha_bar(std::size_t t) const;
  /// t in [1, T].
  double sigma(std::size_t t) const;
  StepCoefficients coefficients(std::size_t t) const;
  /// Index 0 holds alpha_bar_0 = 1.
  const std::vector<double>& alpha_bars() const noexcept { return alpha_bar_; }

 private:
  NoiseSchedule(std::vector<double> alpha_bar, double eta);
  std::vector<double> alpha_bar_;
  std::vector<double> sigma_;
  double eta_;
};

/// z_t = sqrt(alpha_bar_t) z0 + sqrt(1 - alpha_bar_t) eps.
std::vector<double> forward_noise(std::span<const double> z0, std::size_t t, std::span<const double> eps,
                                  const NoiseSchedule& schedule);
std::vector<double> forward_noise(std::span<const double> z0, std::size_t t, const NoiseSchedule& schedule,
                                  numeric::Rng& rng);

}  // namespace acs::diffusion
