// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "acs/numeric/autodiff.hpp"
#include "acs/numeric/dense_array.hpp"

namespace acs::numeric {

enum class Activation { kRelu, kTanh };

std::string_view to_string(Activation activation);
Activation activation_from_string(std::string_view name);

/// Fully connected network. Hidden layers use `activation`; the output layer
/// is affine. weights[l] has shape {widths[l], widths[l+1]}, biases[l] has
/// shape {widths[l+1]}.
struct MlpModel {
  std::vector<std::size_t> widths;
  Activation activation = Activation::kRelu;
  std::uint64_t seed = 0;
  std::vector<DenseArray> weights;
  std::vector<DenseArray> biases;

  /// Glorot-uniform weights, zero biases, drawn from `seed`.
  static MlpModel initialize(std::vector<std::size_t> widths, Activation activation, std::uint64_t seed);

  std::size_t input_width() const { return widths.front(); }
  std::size_t output_width() const { return widths.back(); }
  std::size_t layer_count() const { return weights.size(); }
  std::size_t parameter_count() const;
  /// Throws ContractError if parameter shapes disagree with `widths`.
  void validate() const;

  friend bool operator==(const MlpModel&, const MlpModel&) = default;
};

/// Parameter-shaped container; also used for optimizer state.
struct MlpGradients {
  std::vector<DenseArray> weights;
  std::vector<DenseArray> biases;

  static MlpGradients zeros_like(const MlpModel& model);
};

/// Plain forward pass. Accepts a single input (rank 1) or a batch (rank 2).
DenseArray mlp_apply(const MlpModel& model, const DenseArray& input);

struct MlpParameterVars {
  std::vector<Var> weights;
  std::vector<Var> biases;
};

MlpParameterVars bind_parameters(Tape& tape, const MlpModel& model, bool trainable);
Var mlp_forward(const MlpModel& model, const MlpParameterVars& params, Var input);

/// Maps the network output to a scalar loss on the same tape.
using LossFn = std::function<Var(Var output)>;

/// d(loss(model(input)))/d(input), same shape as `input`.
DenseArray grad_input(const MlpModel& model, const LossFn& loss, const DenseArray& input);

struct ParameterGradients {
  double loss = 0.0;
  MlpGradients gradients;
};

ParameterGradients grad_params(const MlpModel& model, const LossFn& loss, const DenseArray& batch);

}  // namespace acs::numeric
