// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include "acs/adversary/discriminator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "acs/errors.hpp"
#include "acs/hash.hpp"

namespace acs::adversary {

using numeric::DenseArray;

namespace {

void check_label(const Discriminator& disc, int y) {
  if (y < 0 || static_cast<std::size_t>(y) >= disc.num_classes())
    throw ContractError("discriminator: class id " + std::to_string(y) + " out of range");
}

double dataset_cross_entropy(const numeric::MlpModel& model, const DenseArray& inputs, const std::vector<int>& labels) {
  const DenseArray z = numeric::mlp_apply(model, inputs);
  double total = 0.0;
  for (std::size_t i = 0; i < z.rows(); ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < z.cols(); ++j) mx = std::max(mx, z(i, j));
    double denom = 0.0;
    for (std::size_t j = 0; j < z.cols(); ++j) denom += std::exp(z(i, j) - mx);
    total += std::log(denom) + mx - z(i, static_cast<std::size_t>(labels[i]));
  }
  return total / static_cast<double>(z.rows());
}

}  // namespace

std::string training_fingerprint(std::span<const gmm::LabeledPoint> data) {
  Sha256 h;
  h.update(static_cast<std::int64_t>(data.size()));
  for (const auto& p : data) {
    h.update(static_cast<std::int64_t>(p.y));
    h.update(static_cast<std::int64_t>(p.x.size()));
    for (double v : p.x) h.update(v);
  }
  return h.hex_digest();
}

DiscriminatorTraining train_discriminator(std::span<const gmm::LabeledPoint> data, std::size_t num_classes,
                                          const DiscriminatorConfig& config) {
  if (data.empty()) throw ConfigError("train_discriminator: empty training set");
  const std::size_t d = data.front().x.size();
  std::set<int> labels_seen;
  for (const auto& p : data) {
    if (p.x.size() != d) throw ContractError("train_discriminator: inconsistent point dimension");
    if (p.y < 0 || static_cast<std::size_t>(p.y) >= num_classes)
      throw ContractError("train_discriminator: label out of range");
    labels_seen.insert(p.y);
  }
  if (labels_seen.size() < 2)
    throw ConfigError("train_discriminator: need at least 2 classes in the training set (guidance is undefined)");
  config.optimizer.validate();

  std::vector<std::size_t> widths{d};
  widths.insert(widths.end(), config.hidden.begin(), config.hidden.end());
  widths.push_back(num_classes);
  numeric::MlpModel model = numeric::MlpModel::initialize(widths, config.activation, config.optimizer.seed);

  std::vector<double> all_inputs;
  std::vector<int> all_labels;
  for (const auto& p : data) {
    all_inputs.insert(all_inputs.end(), p.x.begin(), p.x.end());
    all_labels.push_back(p.y);
  }
  const DenseArray inputs = DenseArray::matrix(data.size(), d, all_inputs);

  DiscriminatorTraining result;
  result.initial_loss = dataset_cross_entropy(model, inputs, all_labels);
  numeric::SgdMomentum sgd(model, config.optimizer);
  numeric::MinibatchSampler batches(data.size(), config.optimizer.batch_size,
                                    numeric::derive_seed({config.optimizer.seed, 0x62617463ULL}));
  result.loss_history.reserve(config.optimizer.steps);
  for (std::size_t step = 0; step < config.optimizer.steps; ++step) {
    const std::vector<std::size_t> idx = batches.next();
    std::vector<double> xs;
    std::vector<int> ys;
    xs.reserve(idx.size() * d);
    for (std::size_t i : idx) {
      xs.insert(xs.end(), data[i].x.begin(), data[i].x.end());
      ys.push_back(data[i].y);
    }
    const auto grads = numeric::grad_params(
        model, [&ys](numeric::Var out) { return numeric::softmax_cross_entropy(out, ys); },
        DenseArray::matrix(idx.size(), d, std::move(xs)));
    result.loss_history.push_back(grads.loss);
    sgd.step(model, grads.gradients);
  }
  result.final_loss = dataset_cross_entropy(model, inputs, all_labels);
  result.discriminator.model = std::move(model);
  result.discriminator.fingerprint = training_fingerprint(data);
  result.discriminator.seed = config.optimizer.seed;
  result.training_accuracy = accuracy(result.discriminator, data);
  return result;
}

std::vector<double> logits(const Discriminator& disc, std::span<const double> x) {
  return numeric::mlp_apply(disc.model, DenseArray::vector({x.begin(), x.end()})).storage();
}

int predict(const Discriminator& disc, std::span<const double> x) {
  const std::vector<double> z = logits(disc, x);
  return static_cast<int>(std::max_element(z.begin(), z.end()) - z.begin());
}

double accuracy(const Discriminator& disc, std::span<const gmm::LabeledPoint> data) {
  if (data.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& p : data) correct += predict(disc, p.x) == p.y ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

double cross_entropy(const Discriminator& disc, std::span<const double> x, int y) {
  check_label(disc, y);
  const std::vector<double> z = logits(disc, x);
  const double mx = *std::max_element(z.begin(), z.end());
  double denom = 0.0;
  for (double v : z) denom += std::exp(v - mx);
  return std::log(denom) + mx - z[static_cast<std::size_t>(y)];
}

double adv_loss(const Discriminator& disc, std::span<const double> x, int y) { return -cross_entropy(disc, x, y); }

std::vector<double> adv_loss_grad(const Discriminator& disc, std::span<const double> x, int y) {
  check_label(disc, y);
  const int label = y;
  const DenseArray g = numeric::grad_input(
      disc.model,
      [label](numeric::Var out) {
        return numeric::scale(numeric::softmax_cross_entropy(out, std::span<const int>(&label, 1)), -1.0);
      },
      DenseArray::vector({x.begin(), x.end()}));
  return g.storage();
}

}  // namespace acs::adversary
