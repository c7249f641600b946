// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "acs/numeric/mlp.hpp"
#include "acs/numeric/rng.hpp"

namespace acs::numeric {

struct OptimizerConfig {
  double learning_rate = 0.05;
  double momentum = 0.9;
  std::size_t steps = 500;
  std::size_t batch_size = 64;
  std::uint64_t seed = 0;

  void validate() const;
  friend bool operator==(const OptimizerConfig&, const OptimizerConfig&) = default;
};

/// SGD with heavy-ball momentum: v <- momentum * v + g; w <- w - lr * v.
class SgdMomentum {
 public:
  SgdMomentum(const MlpModel& model, OptimizerConfig config);

  void step(MlpModel& model, const MlpGradients& gradients);

 private:
  OptimizerConfig config_;
  MlpGradients velocity_;
};

/// One optimizer update against explicit momentum state.
void optimizer_step(MlpModel& model, const MlpGradients& gradients, const OptimizerConfig& config,
                    MlpGradients& velocity);

/// Shuffled minibatch indices over [0, n), reshuffling at every epoch.
class MinibatchSampler {
 public:
  MinibatchSampler(std::size_t n, std::size_t batch_size, std::uint64_t seed);
  std::vector<std::size_t> next();

 private:
  std::size_t batch_size_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
  Rng rng_;
};

}  // namespace acs::numeric
