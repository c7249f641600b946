// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "acs/adversary/discriminator.hpp"
#include "acs/diffusion/denoiser.hpp"
#include "acs/diffusion/schedule.hpp"
#include "acs/gmm/target.hpp"
#include "acs/numeric/rng.hpp"

namespace acs::sampler {

/// Maps a clean latent to discriminator input. Only the identity exists; the
/// sampler runs directly in data space.
enum class Decoder { kIdentity };

/// Below this gradient norm the guidance term is defined as zero.
inline constexpr double kZeroGradientNorm = 1e-12;

struct GuidanceConfig {
  double g = 0.0;
  Decoder decoder = Decoder::kIdentity;
  /// Differentiate the predicted clean point through the denoiser as well.
  /// Off: eps_hat is held constant, so grad_z = grad_x0 / sqrt(alpha_bar_t).
  bool gradient_through_denoiser = false;

  void validate() const;
};

std::vector<double> decode(Decoder decoder, std::span<const double> latent);

/// Per-trajectory diagnostics. guidance_norms has one entry per step (from
/// t = T down to 1) for guided trajectories and is empty otherwise.
struct TrajectoryRecord {
  std::uint64_t seed = 0;
  int label = 0;
  std::vector<double> guidance_norms;
  std::vector<double> final_point;

  friend bool operator==(const TrajectoryRecord&, const TrajectoryRecord&) = default;
};

/// z0_hat = (z_t - sqrt(1 - a) eps_hat) / sqrt(a).
std::vector<double> predict_z0(std::span<const double> z_t, std::span<const double> eps_hat, double alpha_bar);
std::vector<double> predict_z0(std::span<const double> z_t, std::size_t t, int y, const diffusion::Denoiser& denoiser,
                               const diffusion::NoiseSchedule& schedule);

/// z_{t-1} = sqrt(a_prev) z0_hat + sqrt(1 - a_prev - sigma^2) eps_hat + sigma eps_t.
/// Draws eps_t from `rng` only when sigma > 0.
std::vector<double> ddim_update(std::span<const double> z_t, std::span<const double> eps_hat,
                                const diffusion::StepCoefficients& coeffs, numeric::Rng& rng);
std::vector<double> ddim_step(std::span<const double> z_t, std::size_t t, int y, const diffusion::Denoiser& denoiser,
                              const diffusion::NoiseSchedule& schedule, numeric::Rng& rng);

struct GuidedStep {
  std::vector<double> z_prev;
  double correction_norm = 0.0;  // ||s(t) * grad||
  double gradient_norm = 0.0;    // ||grad_z L_adv|| before scaling
};

/// Gradient of L_adv(D(z0_hat(z_t)), y) with respect to z_t.
std::vector<double> adversarial_gradient(std::span<const double> z_t, std::size_t t, int y,
                                         const diffusion::Denoiser& denoiser,
                                         const adversary::Discriminator& discriminator, const GuidanceConfig& guidance,
                                         const diffusion::NoiseSchedule& schedule);

/// ddim_step(...) - s(t) * grad, with s(t) = g sqrt(1 - a_t) ||eps_hat|| / ||grad||.
/// Consumes `rng` exactly like ddim_step.
GuidedStep guided_step(std::span<const double> z_t, std::size_t t, int y, const diffusion::Denoiser& denoiser,
                       const adversary::Discriminator& discriminator, const GuidanceConfig& guidance,
                       const diffusion::NoiseSchedule& schedule, numeric::Rng& rng);

/// Adversary and strength for a guided trajectory.
struct Guide {
  const adversary::Discriminator* discriminator = nullptr;
  GuidanceConfig config;
};

struct Sample {
  gmm::LabeledPoint point;
  TrajectoryRecord record;
};

/// z_T ~ N(0, I) from `seed`, T reverse steps, x = D(z_0).
Sample sample_trajectory(int y, const diffusion::Denoiser& denoiser, const diffusion::NoiseSchedule& schedule,
                         const std::optional<Guide>& guide, std::uint64_t seed);

}  // namespace acs::sampler
