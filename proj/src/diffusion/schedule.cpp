// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include "acs/diffusion/schedule.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "acs/errors.hpp"

namespace acs::diffusion {

NoiseSchedule::NoiseSchedule(std::vector<double> alpha_bar, double eta) : alpha_bar_(std::move(alpha_bar)), eta_(eta) {
  if (!(eta_ >= 0.0 && eta_ <= 1.0)) throw ContractError("NoiseSchedule: eta must lie in [0, 1]");
  if (alpha_bar_.size() < 2) throw ContractError("NoiseSchedule: need at least one step");
  for (std::size_t t = 1; t < alpha_bar_.size(); ++t) {
    const double a = alpha_bar_[t];
    if (!std::isfinite(a) || !(a > 0.0) || !(a < alpha_bar_[t - 1]))
      throw ContractError("NoiseSchedule: alpha_bar must be strictly decreasing and positive (t = " +
                          std::to_string(t) + ")");
  }
  sigma_.assign(alpha_bar_.size(), 0.0);
  for (std::size_t t = 1; t < alpha_bar_.size(); ++t) {
    const double a = alpha_bar_[t], prev = alpha_bar_[t - 1];
    sigma_[t] = eta_ * std::sqrt((1.0 - prev) / (1.0 - a)) * std::sqrt(1.0 - a / prev);
  }
}

NoiseSchedule NoiseSchedule::cosine(std::size_t steps, double final_alpha_bar, double eta) {
  if (steps == 0) throw ContractError("NoiseSchedule: steps must be positive");
  if (!(final_alpha_bar > 0.0 && final_alpha_bar < 1.0))
    throw ContractError("NoiseSchedule: final alpha_bar must lie in (0, 1)");
  const double stretch = 2.0 / std::numbers::pi * std::acos(std::sqrt(final_alpha_bar));
  std::vector<double> alpha_bar(steps + 1);
  alpha_bar[0] = 1.0;
  for (std::size_t t = 1; t <= steps; ++t) {
    const double c = std::cos(static_cast<double>(t) / static_cast<double>(steps) * (std::numbers::pi / 2.0) * stretch);
    alpha_bar[t] = c * c;
  }
  alpha_bar[steps] = final_alpha_bar;
  return NoiseSchedule(std::move(alpha_bar), eta);
}

NoiseSchedule NoiseSchedule::from_alpha_bars(std::vector<double> alpha_bars, double eta) {
  alpha_bars.insert(alpha_bars.begin(), 1.0);
  return NoiseSchedule(std::move(alpha_bars), eta);
}

double NoiseSchedule::alpha_bar(std::size_t t) const {
  if (t >= alpha_bar_.size()) throw ContractError("NoiseSchedule: step " + std::to_string(t) + " out of range");
  return alpha_bar_[t];
}

double NoiseSchedule::sigma(std::size_t t) const {
  if (t == 0 || t >= alpha_bar_.size())
    throw ContractError("NoiseSchedule: step " + std::to_string(t) + " out of range");
  return sigma_[t];
}

StepCoefficients NoiseSchedule::coefficients(std::size_t t) const {
  return {alpha_bar(t), alpha_bar(t == 0 ? 0 : t - 1), t == 0 ? 0.0 : sigma(t)};
}

std::vector<double> forward_noise(std::span<const double> z0, std::size_t t, std::span<const double> eps,
                                  const NoiseSchedule& schedule) {
  if (z0.size() != eps.size()) throw ContractError("forward_noise: noise dimension mismatch");
  const double a = schedule.alpha_bar(t);
  const double signal = std::sqrt(a), noise = std::sqrt(1.0 - a);
  std::vector<double> out(z0.size());
  for (std::size_t i = 0; i < z0.size(); ++i) out[i] = signal * z0[i] + noise * eps[i];
  return out;
}

std::vector<double> forward_noise(std::span<const double> z0, std::size_t t, const NoiseSchedule& schedule,
                                  numeric::Rng& rng) {
  const std::vector<double> eps = numeric::standard_normal(rng, z0.size());
  return forward_noise(z0, t, eps, schedule);
}

}  // namespace acs::diffusion
