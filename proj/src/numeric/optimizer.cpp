// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include "acs/numeric/optimizer.hpp"

#include <algorithm>
#include <numeric>

#include "acs/errors.hpp"

namespace acs::numeric {

void OptimizerConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ContractError("optimizer: learning_rate must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ContractError("optimizer: momentum must be in [0, 1)");
  if (steps == 0) throw ContractError("optimizer: steps must be positive");
  if (batch_size == 0) throw ContractError("optimizer: batch_size must be positive");
}

void optimizer_step(MlpModel& model, const MlpGradients& gradients, const OptimizerConfig& config,
                    MlpGradients& velocity) {
  const std::size_t layers = model.layer_count();
  if (gradients.weights.size() != layers || gradients.biases.size() != layers ||
      velocity.weights.size() != layers || velocity.biases.size() != layers)
    throw ContractError("optimizer_step: layer count mismatch");
  auto update = [&](DenseArray& param, const DenseArray& grad, DenseArray& vel) {
    if (!param.same_shape(grad) || !param.same_shape(vel))
      throw ContractError("optimizer_step: gradient shape mismatch");
    for (std::size_t i = 0; i < param.size(); ++i) {
      vel[i] = config.momentum * vel[i] + grad[i];
      param[i] -= config.learning_rate * vel[i];
    }
  };
  for (std::size_t l = 0; l < layers; ++l) {
    update(model.weights[l], gradients.weights[l], velocity.weights[l]);
    update(model.biases[l], gradients.biases[l], velocity.biases[l]);
  }
}

SgdMomentum::SgdMomentum(const MlpModel& model, OptimizerConfig config)
    : config_(config), velocity_(MlpGradients::zeros_like(model)) {
  config_.validate();
}

void SgdMomentum::step(MlpModel& model, const MlpGradients& gradients) {
  optimizer_step(model, gradients, config_, velocity_);
}

MinibatchSampler::MinibatchSampler(std::size_t n, std::size_t batch_size, std::uint64_t seed)
    : batch_size_(std::min(batch_size, n)), order_(n), rng_(seed) {
  if (n == 0) throw ContractError("MinibatchSampler: empty dataset");
  std::iota(order_.begin(), order_.end(), std::size_t{0});
  cursor_ = order_.size();
}

std::vector<std::size_t> MinibatchSampler::next() {
  if (batch_size_ == order_.size()) return order_;
  std::vector<std::size_t> batch;
  batch.reserve(batch_size_);
  while (batch.size() < batch_size_) {
    if (cursor_ == order_.size()) {
      std::shuffle(order_.begin(), order_.end(), rng_);
      cursor_ = 0;
    }
    batch.push_back(order_[cursor_++]);
  }
  return batch;
}

}  // namespace acs::numeric
