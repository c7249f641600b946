// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include "acs/sampler/sampler.hpp"

#include <cmath>
#include <string>

#include "acs/errors.hpp"

namespace acs::sampler {
namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void check_step(std::size_t t, const diffusion::NoiseSchedule& schedule) {
  if (t == 0 || t > schedule.steps()) throw ContractError("sampler: step " + std::to_string(t) + " out of range");
}

}  // namespace

void GuidanceConfig::validate() const {
  if (!(g >= 0.0) || !std::isfinite(g)) throw ContractError("guidance: g must be a finite non-negative number");
}

std::vector<double> decode(Decoder decoder, std::span<const double> latent) {
  switch (decoder) {
    case Decoder::kIdentity:
      break;
  }
  return {latent.begin(), latent.end()};
}

std::vector<double> predict_z0(std::span<const double> z_t, std::span<const double> eps_hat, double alpha_bar) {
  if (z_t.size() != eps_hat.size()) throw ContractError("predict_z0: dimension mismatch");
  if (!(alpha_bar > 0.0 && alpha_bar <= 1.0)) throw ContractError("predict_z0: alpha_bar must lie in (0, 1]");
  const double noise = std::sqrt(1.0 - alpha_bar), signal = std::sqrt(alpha_bar);
  std::vector<double> out(z_t.size());
  for (std::size_t i = 0; i < z_t.size(); ++i) out[i] = (z_t[i] - noise * eps_hat[i]) / signal;
  return out;
}

std::vector<double> predict_z0(std::span<const double> z_t, std::size_t t, int y, const diffusion::Denoiser& denoiser,
                               const diffusion::NoiseSchedule& schedule) {
  check_step(t, schedule);
  return predict_z0(z_t, denoiser.eval(z_t, t, y, schedule), schedule.alpha_bar(t));
}

std::vector<double> ddim_update(std::span<const double> z_t, std::span<const double> eps_hat,
                                const diffusion::StepCoefficients& coeffs, numeric::Rng& rng) {
  const double residual = 1.0 - coeffs.alpha_bar_prev - coeffs.sigma * coeffs.sigma;
  if (residual < 0.0) throw ContractError("ddim_step: 1 - alpha_bar_prev - sigma^2 is negative");
  const std::vector<double> z0 = predict_z0(z_t, eps_hat, coeffs.alpha_bar);
  const double signal = std::sqrt(coeffs.alpha_bar_prev), direction = std::sqrt(residual);
  std::vector<double> out(z_t.size());
  for (std::size_t i = 0; i < z_t.size(); ++i) out[i] = signal * z0[i] + direction * eps_hat[i];
  if (coeffs.sigma > 0.0) {
    const std::vector<double> noise = numeric::standard_normal(rng, z_t.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeffs.sigma * noise[i];
  }
  return out;
}

std::vector<double> ddim_step(std::span<const double> z_t, std::size_t t, int y, const diffusion::Denoiser& denoiser,
                              const diffusion::NoiseSchedule& schedule, numeric::Rng& rng) {
  check_step(t, schedule);
  return ddim_update(z_t, denoiser.eval(z_t, t, y, schedule), schedule.coefficients(t), rng);
}

namespace {

std::vector<double> gradient_at(std::span<const double> z_t, std::size_t t, int y, std::span<const double> eps_hat,
                                const diffusion::Denoiser& denoiser, const adversary::Discriminator& discriminator,
                                const GuidanceConfig& guidance, const diffusion::NoiseSchedule& schedule) {
  const double a = schedule.alpha_bar(t);
  const std::vector<double> z0 = predict_z0(z_t, eps_hat, a);
  // The identity decoder has an identity Jacobian.
  std::vector<double> grad = adversary::adv_loss_grad(discriminator, decode(guidance.decoder, z0), y);
  if (guidance.gradient_through_denoiser) {
    // d z0_hat / d z_t = (I - sqrt(1 - a) J_eps) / sqrt(a)
    const std::vector<double> through = denoiser.eval_vjp(z_t, t, y, schedule, grad);
    const double noise = std::sqrt(1.0 - a);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] -= noise * through[i];
  }
  const double inv_signal = 1.0 / std::sqrt(a);
  for (double& v : grad) v *= inv_signal;
  return grad;
}

}  // namespace

std::vector<double> adversarial_gradient(std::span<const double> z_t, std::size_t t, int y,
                                         const diffusion::Denoiser& denoiser,
                                         const adversary::Discriminator& discriminator, const GuidanceConfig& guidance,
                                         const diffusion::NoiseSchedule& schedule) {
  check_step(t, schedule);
  const std::vector<double> eps_hat = denoiser.eval(z_t, t, y, schedule);
  return gradient_at(z_t, t, y, eps_hat, denoiser, discriminator, guidance, schedule);
}

GuidedStep guided_step(std::span<const double> z_t, std::size_t t, int y, const diffusion::Denoiser& denoiser,
                       const adversary::Discriminator& discriminator, const GuidanceConfig& guidance,
                       const diffusion::NoiseSchedule& schedule, numeric::Rng& rng) {
  check_step(t, schedule);
  guidance.validate();
  const std::vector<double> eps_hat = denoiser.eval(z_t, t, y, schedule);
  GuidedStep out;
  out.z_prev = ddim_update(z_t, eps_hat, schedule.coefficients(t), rng);
  if (guidance.g == 0.0) return out;

  const std::vector<double> grad = gradient_at(z_t, t, y, eps_hat, denoiser, discriminator, guidance, schedule);
  out.gradient_norm = norm(grad);
  if (out.gradient_norm < kZeroGradientNorm) return out;
  const double target_norm = guidance.g * std::sqrt(1.0 - schedule.alpha_bar(t)) * norm(eps_hat);
  const double step_scale = target_norm / out.gradient_norm;
  for (std::size_t i = 0; i < grad.size(); ++i) out.z_prev[i] -= step_scale * grad[i];
  out.correction_norm = target_norm;
  return out;
}

Sample sample_trajectory(int y, const diffusion::Denoiser& denoiser, const diffusion::NoiseSchedule& schedule,
                         const std::optional<Guide>& guide, std::uint64_t seed) {
  if (y < 0 || static_cast<std::size_t>(y) >= denoiser.num_classes())
    throw ContractError("sample_trajectory: class id " + std::to_string(y) + " out of range");
  if (guide && guide->discriminator == nullptr) throw ContractError("sample_trajectory: guide without discriminator");
  numeric::Rng rng(seed);
  std::vector<double> z = numeric::standard_normal(rng, denoiser.dimension());
  Sample sample;
  sample.record.seed = seed;
  sample.record.label = y;
  if (guide) sample.record.guidance_norms.reserve(schedule.steps());
  for (std::size_t t = schedule.steps(); t >= 1; --t) {
    if (guide) {
      GuidedStep step = guided_step(z, t, y, denoiser, *guide->discriminator, guide->config, schedule, rng);
      z = std::move(step.z_prev);
      sample.record.guidance_norms.push_back(step.correction_norm);
    } else {
      z = ddim_step(z, t, y, denoiser, schedule, rng);
    }
  }
  const Decoder decoder = guide ? guide->config.decoder : Decoder::kIdentity;
  sample.point = {decode(decoder, z), y};
  sample.record.final_point = sample.point.x;
  return sample;
}

}  // namespace acs::sampler
