// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "acs/diffusion/schedule.hpp"
#include "acs/gmm/target.hpp"
#include "acs/numeric/mlp.hpp"
#include "acs/numeric/optimizer.hpp"

namespace acs::diffusion {

enum class DenoiserKind { kAnalyticGmm, kLearnedMlp };

std::string_view to_string(DenoiserKind kind);

/// Conditioning scheme tag recorded in checkpoints and manifests.
inline constexpr std::string_view kConditioningScheme = "onehot+t/T";

/// Network input for a learned denoiser: [z, one_hot(y), t / T].
numeric::DenseArray conditioning_input(std::span<const double> z, std::size_t t, std::size_t steps, int y,
                                       std::size_t num_classes);

/// Noise predictor eps(z_t, t, y). Immutable; evaluation is thread-safe.
class Denoiser {
 public:
  static Denoiser analytic(std::shared_ptr<const gmm::GmmTarget> target);
  /// `model` maps d + C + 1 inputs to d outputs.
  static Denoiser learned(std::shared_ptr<const numeric::MlpModel> model);

  DenoiserKind kind() const noexcept { return kind_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t num_classes() const noexcept { return num_classes_; }
  const gmm::GmmTarget* target() const noexcept { return target_.get(); }
  const numeric::MlpModel* model() const noexcept { return model_.get(); }

  std::vector<double> eval(std::span<const double> z, std::size_t t, int y, const NoiseSchedule& schedule) const;
  /// v^T d(eval)/dz.
  std::vector<double> eval_vjp(std::span<const double> z, std::size_t t, int y, const NoiseSchedule& schedule,
                               std::span<const double> v) const;

 private:
  void check(std::span<const double> z, std::size_t t, int y, const NoiseSchedule& schedule) const;

  DenoiserKind kind_ = DenoiserKind::kAnalyticGmm;
  std::size_t dimension_ = 0;
  std::size_t num_classes_ = 0;
  std::shared_ptr<const gmm::GmmTarget> target_;
  std::shared_ptr<const numeric::MlpModel> model_;
};

inline std::vector<double> eval_denoiser(const Denoiser& denoiser, std::span<const double> z, std::size_t t, int y,
                                         const NoiseSchedule& schedule) {
  return denoiser.eval(z, t, y, schedule);
}

/// Analytic optimal noise prediction at schedule step t.
std::vector<double> exact_eps(const gmm::GmmTarget& target, std::span<const double> z, std::size_t t, int y,
                              const NoiseSchedule& schedule);

/// A fixed set of (input, target-noise) pairs for the noise-prediction loss.
struct NoisePredictionBatch {
  numeric::DenseArray inputs;
  numeric::DenseArray targets;
};

NoisePredictionBatch make_noise_batch(std::span<const gmm::LabeledPoint> data, std::span<const std::size_t> indices,
                                      std::size_t num_classes, const NoiseSchedule& schedule, numeric::Rng& rng);
double noise_prediction_loss(const numeric::MlpModel& model, const NoisePredictionBatch& batch);

struct DenoiserTraining {
  Denoiser denoiser;
  std::shared_ptr<const numeric::MlpModel> model;
  std::vector<double> loss_history;  // minibatch loss per step
  double initial_heldout_loss = 0.0;
  double final_heldout_loss = 0.0;
};

/// Minimizes E ||eps_theta(z_t, t, y) - eps||^2 with t uniform on 1..T and
/// fresh eps per minibatch. The class count is implied by the model widths.
DenoiserTraining train_denoiser(std::span<const gmm::LabeledPoint> data, numeric::MlpModel model,
                                const NoiseSchedule& schedule, const numeric::OptimizerConfig& optimizer);

}  // namespace acs::diffusion
