// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include "acs/numeric/mlp.hpp"

#include <cmath>
#include <random>
#include <string>

#include "acs/errors.hpp"

namespace acs::numeric {

std::string_view to_string(Activation activation) {
  return activation == Activation::kRelu ? "relu" : "tanh";
}

Activation activation_from_string(std::string_view name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "tanh") return Activation::kTanh;
  throw ContractError("unknown activation '" + std::string(name) + "'");
}

MlpModel MlpModel::initialize(std::vector<std::size_t> widths, Activation activation, std::uint64_t seed) {
  if (widths.size() < 2) throw ContractError("MlpModel: need at least input and output widths");
  for (std::size_t w : widths)
    if (w == 0) throw ContractError("MlpModel: layer widths must be positive");
  MlpModel model;
  model.widths = std::move(widths);
  model.activation = activation;
  model.seed = seed;
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l + 1 < model.widths.size(); ++l) {
    const std::size_t fan_in = model.widths[l], fan_out = model.widths[l + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-bound, bound);
    DenseArray w({fan_in, fan_out});
    for (double& v : w.values()) v = dist(rng);
    model.weights.push_back(std::move(w));
    model.biases.emplace_back(std::vector<std::size_t>{fan_out}, 0.0);
  }
  return model;
}

std::size_t MlpModel::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) n += weights[l].size() + biases[l].size();
  return n;
}

void MlpModel::validate() const {
  if (widths.size() < 2 || weights.size() + 1 != widths.size() || biases.size() != weights.size())
    throw ContractError("MlpModel: layer count mismatch");
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const std::vector<std::size_t> ws{widths[l], widths[l + 1]};
    const std::vector<std::size_t> bs{widths[l + 1]};
    if (weights[l].shape() != ws || biases[l].shape() != bs)
      throw ContractError("MlpModel: parameter shape mismatch at layer " + std::to_string(l));
  }
}

MlpGradients MlpGradients::zeros_like(const MlpModel& model) {
  MlpGradients g;
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    g.weights.push_back(DenseArray::zeros_like(model.weights[l]));
    g.biases.push_back(DenseArray::zeros_like(model.biases[l]));
  }
  return g;
}

DenseArray mlp_apply(const MlpModel& model, const DenseArray& input) {
  if (input.cols() != model.input_width()) throw ContractError("mlp_apply: input width mismatch");
  const std::size_t n = input.rows();
  std::vector<double> current(input.values().begin(), input.values().end());
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    const DenseArray& w = model.weights[l];
    const DenseArray& b = model.biases[l];
    const std::size_t in = w.rows(), out = w.cols();
    std::vector<double> next(n * out);
    for (std::size_t i = 0; i < n; ++i) {
      double* dst = next.data() + i * out;
      for (std::size_t j = 0; j < out; ++j) dst[j] = b[j];
      for (std::size_t p = 0; p < in; ++p) {
        const double x = current[i * in + p];
        if (x == 0.0) continue;
        const double* wrow = &w.values()[p * out];
        for (std::size_t j = 0; j < out; ++j) dst[j] += x * wrow[j];
      }
    }
    if (l + 1 < model.layer_count()) {
      for (double& v : next) v = model.activation == Activation::kRelu ? (v > 0.0 ? v : 0.0) : std::tanh(v);
    }
    current = std::move(next);
  }
  if (input.rank() <= 1) return DenseArray::vector(std::move(current));
  return DenseArray::matrix(n, model.output_width(), std::move(current));
}

MlpParameterVars bind_parameters(Tape& tape, const MlpModel& model, bool trainable) {
  MlpParameterVars vars;
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    vars.weights.push_back(trainable ? tape.variable(model.weights[l]) : tape.constant(model.weights[l]));
    vars.biases.push_back(trainable ? tape.variable(model.biases[l]) : tape.constant(model.biases[l]));
  }
  return vars;
}

Var mlp_forward(const MlpModel& model, const MlpParameterVars& params, Var input) {
  if (input.value().cols() != model.input_width()) throw ContractError("mlp_forward: input width mismatch");
  Var h = input;
  for (std::size_t l = 0; l < model.layer_count(); ++l) {
    h = add_row(matmul(h, params.weights[l]), params.biases[l]);
    if (l + 1 < model.layer_count()) h = model.activation == Activation::kRelu ? relu(h) : tanh(h);
  }
  return h;
}

DenseArray grad_input(const MlpModel& model, const LossFn& loss, const DenseArray& input) {
  Tape tape;
  const MlpParameterVars params = bind_parameters(tape, model, false);
  const Var x = tape.variable(input);
  const Var l = loss(mlp_forward(model, params, x));
  tape.backward(l);
  return x.grad();
}

ParameterGradients grad_params(const MlpModel& model, const LossFn& loss, const DenseArray& batch) {
  Tape tape;
  const MlpParameterVars params = bind_parameters(tape, model, true);
  const Var x = tape.constant(batch);
  const Var l = loss(mlp_forward(model, params, x));
  tape.backward(l);
  ParameterGradients out;
  out.loss = l.value()[0];
  for (std::size_t i = 0; i < model.layer_count(); ++i) {
    out.gradients.weights.push_back(params.weights[i].grad());
    out.gradients.biases.push_back(params.biases[i].grad());
  }
  return out;
}

}  // namespace acs::numeric
