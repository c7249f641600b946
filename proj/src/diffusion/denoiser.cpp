// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include "acs/diffusion/denoiser.hpp"

#include <random>
#include <string>

#include "acs/errors.hpp"

namespace acs::diffusion {

using numeric::DenseArray;

std::string_view to_string(DenoiserKind kind) {
  return kind == DenoiserKind::kAnalyticGmm ? "analytic-gmm" : "learned-mlp";
}

DenseArray conditioning_input(std::span<const double> z, std::size_t t, std::size_t steps, int y,
                              std::size_t num_classes) {
  if (y < 0 || static_cast<std::size_t>(y) >= num_classes) throw ContractError("conditioning: class out of range");
  std::vector<double> v(z.begin(), z.end());
  v.resize(z.size() + num_classes + 1, 0.0);
  v[z.size() + static_cast<std::size_t>(y)] = 1.0;
  v.back() = static_cast<double>(t) / static_cast<double>(steps);
  return DenseArray::vector(std::move(v));
}

Denoiser Denoiser::analytic(std::shared_ptr<const gmm::GmmTarget> target) {
  if (!target) throw ContractError("Denoiser: null target");
  Denoiser d;
  d.kind_ = DenoiserKind::kAnalyticGmm;
  d.dimension_ = target->dimension();
  d.num_classes_ = target->num_classes();
  d.target_ = std::move(target);
  return d;
}

Denoiser Denoiser::learned(std::shared_ptr<const numeric::MlpModel> model) {
  if (!model) throw ContractError("Denoiser: null model");
  model->validate();
  const std::size_t d = model->output_width();
  if (model->input_width() < d + 2)
    throw ContractError("Denoiser: model input must hold z, a class one-hot and t/T");
  Denoiser out;
  out.kind_ = DenoiserKind::kLearnedMlp;
  out.dimension_ = d;
  out.num_classes_ = model->input_width() - d - 1;
  out.model_ = std::move(model);
  return out;
}

void Denoiser::check(std::span<const double> z, std::size_t t, int y, const NoiseSchedule& schedule) const {
  if (z.size() != dimension_) throw ContractError("denoiser: point dimension mismatch");
  if (t == 0 || t > schedule.steps()) throw ContractError("denoiser: step " + std::to_string(t) + " out of range");
  if (y < 0 || static_cast<std::size_t>(y) >= num_classes_) throw ContractError("denoiser: class out of range");
}

std::vector<double> Denoiser::eval(std::span<const double> z, std::size_t t, int y,
                                   const NoiseSchedule& schedule) const {
  check(z, t, y, schedule);
  if (kind_ == DenoiserKind::kAnalyticGmm) return target_->exact_eps(z, y, schedule.alpha_bar(t));
  const DenseArray out = numeric::mlp_apply(*model_, conditioning_input(z, t, schedule.steps(), y, num_classes_));
  return out.storage();
}

std::vector<double> Denoiser::eval_vjp(std::span<const double> z, std::size_t t, int y, const NoiseSchedule& schedule,
                                       std::span<const double> v) const {
  check(z, t, y, schedule);
  if (v.size() != dimension_) throw ContractError("denoiser: cotangent dimension mismatch");
  if (kind_ == DenoiserKind::kAnalyticGmm) return target_->exact_eps_vjp(z, y, schedule.alpha_bar(t), v);
  const std::vector<double> cotangent(v.begin(), v.end());
  const DenseArray g = numeric::grad_input(
      *model_,
      [&cotangent](numeric::Var out) {
        return numeric::dot(out, out.tape().constant(DenseArray::vector(cotangent)));
      },
      conditioning_input(z, t, schedule.steps(), y, num_classes_));
  return {g.values().begin(), g.values().begin() + static_cast<std::ptrdiff_t>(dimension_)};
}

std::vector<double> exact_eps(const gmm::GmmTarget& target, std::span<const double> z, std::size_t t, int y,
                              const NoiseSchedule& schedule) {
  return target.exact_eps(z, y, schedule.alpha_bar(t));
}

NoisePredictionBatch make_noise_batch(std::span<const gmm::LabeledPoint> data, std::span<const std::size_t> indices,
                                      std::size_t num_classes, const NoiseSchedule& schedule, numeric::Rng& rng) {
  if (indices.empty()) throw ContractError("make_noise_batch: empty batch");
  const std::size_t d = data[indices[0]].x.size();
  const std::size_t width = d + num_classes + 1;
  std::uniform_int_distribution<std::size_t> pick_t(1, schedule.steps());
  std::vector<double> inputs, targets;
  inputs.reserve(indices.size() * width);
  targets.reserve(indices.size() * d);
  for (std::size_t idx : indices) {
    const auto& point = data[idx];
    const std::size_t t = pick_t(rng);
    const std::vector<double> eps = numeric::standard_normal(rng, d);
    const std::vector<double> zt = forward_noise(point.x, t, eps, schedule);
    const DenseArray row = conditioning_input(zt, t, schedule.steps(), point.y, num_classes);
    inputs.insert(inputs.end(), row.values().begin(), row.values().end());
    targets.insert(targets.end(), eps.begin(), eps.end());
  }
  return {DenseArray::matrix(indices.size(), width, std::move(inputs)),
          DenseArray::matrix(indices.size(), d, std::move(targets))};
}

double noise_prediction_loss(const numeric::MlpModel& model, const NoisePredictionBatch& batch) {
  const DenseArray pred = numeric::mlp_apply(model, batch.inputs);
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += (pred[i] - batch.targets[i]) * (pred[i] - batch.targets[i]);
  return s / static_cast<double>(pred.rows());
}

DenoiserTraining train_denoiser(std::span<const gmm::LabeledPoint> data, numeric::MlpModel model,
                                const NoiseSchedule& schedule, const numeric::OptimizerConfig& optimizer) {
  if (data.empty()) throw ContractError("train_denoiser: empty training data");
  model.validate();
  optimizer.validate();
  const std::size_t d = model.output_width();
  if (model.input_width() < d + 2) throw ContractError("train_denoiser: model widths leave no class slots");
  const std::size_t num_classes = model.input_width() - d - 1;
  std::vector<bool> seen(num_classes, false);
  for (const auto& p : data) {
    if (p.x.size() != d) throw ContractError("train_denoiser: point dimension mismatch");
    if (p.y < 0 || static_cast<std::size_t>(p.y) >= num_classes) throw ContractError("train_denoiser: label out of range");
    seen[static_cast<std::size_t>(p.y)] = true;
  }
  for (std::size_t c = 0; c < num_classes; ++c)
    if (!seen[c]) throw ContractError("train_denoiser: class " + std::to_string(c) + " has no training data");

  numeric::Rng noise_rng(numeric::derive_seed({optimizer.seed, 0x6e6f697365ULL}));
  numeric::Rng heldout_rng(numeric::derive_seed({optimizer.seed, 0x68656c64ULL}));
  std::vector<std::size_t> heldout_idx(std::min<std::size_t>(data.size(), 512));
  for (std::size_t i = 0; i < heldout_idx.size(); ++i) heldout_idx[i] = i * data.size() / heldout_idx.size();
  const NoisePredictionBatch heldout = make_noise_batch(data, heldout_idx, num_classes, schedule, heldout_rng);

  DenoiserTraining result;
  result.initial_heldout_loss = noise_prediction_loss(model, heldout);
  numeric::SgdMomentum sgd(model, optimizer);
  numeric::MinibatchSampler batches(data.size(), optimizer.batch_size, optimizer.seed);
  result.loss_history.reserve(optimizer.steps);
  for (std::size_t step = 0; step < optimizer.steps; ++step) {
    const std::vector<std::size_t> idx = batches.next();
    const NoisePredictionBatch batch = make_noise_batch(data, idx, num_classes, schedule, noise_rng);
    const auto grads = numeric::grad_params(
        model,
        [&batch](numeric::Var out) {
          return numeric::mean_row_squared_error(out, out.tape().constant(batch.targets));
        },
        batch.inputs);
    result.loss_history.push_back(grads.loss);
    sgd.step(model, grads.gradients);
  }
  result.final_heldout_loss = noise_prediction_loss(model, heldout);
  result.model = std::make_shared<const numeric::MlpModel>(std::move(model));
  result.denoiser = Denoiser::learned(result.model);
  return result;
}

}  // namespace acs::diffusion
