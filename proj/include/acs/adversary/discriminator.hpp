// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "acs/gmm/target.hpp"
#include "acs/numeric/mlp.hpp"
#include "acs/numeric/optimizer.hpp"

namespace acs::adversary {

struct DiscriminatorConfig {
  std::vector<std::size_t> hidden{64, 64};
  numeric::Activation activation = numeric::Activation::kRelu;
  numeric::OptimizerConfig optimizer{0.05, 0.9, 400, 64, 0};
};

/// Classifier f_phi over data-space points. Immutable once trained.
struct Discriminator {
  numeric::MlpModel model;
  std::string fingerprint;  // training_fingerprint() of its training set
  std::uint64_t seed = 0;

  std::size_t num_classes() const { return model.output_width(); }
};

struct DiscriminatorTraining {
  Discriminator discriminator;
  std::vector<double> loss_history;
  double initial_loss = 0.0;  // full-data cross-entropy before the first step
  double final_loss = 0.0;    // and after the last
  double training_accuracy = 0.0;
};

/// SHA-256 over the points (coordinates and labels) in order.
std::string training_fingerprint(std::span<const gmm::LabeledPoint> data);

/// Fresh Glorot initialization from `config.optimizer.seed`, then minibatch
/// SGD on mean cross-entropy for a fixed step budget. Requires at least two
/// distinct labels.
DiscriminatorTraining train_discriminator(std::span<const gmm::LabeledPoint> data, std::size_t num_classes,
                                          const DiscriminatorConfig& config);

std::vector<double> logits(const Discriminator& disc, std::span<const double> x);
int predict(const Discriminator& disc, std::span<const double> x);
double accuracy(const Discriminator& disc, std::span<const gmm::LabeledPoint> data);

double cross_entropy(const Discriminator& disc, std::span<const double> x, int y);
/// L_adv(x, y) = -CE(f_phi(x), y); never positive.
double adv_loss(const Discriminator& disc, std::span<const double> x, int y);
/// d L_adv / dx by reverse mode.
std::vector<double> adv_loss_grad(const Discriminator& disc, std::span<const double> x, int y);

}  // namespace acs::adversary
