// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include "acs/numeric/dense_array.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "acs/errors.hpp"

namespace acs::numeric {
namespace {

std::size_t element_count(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

}  // namespace

DenseArray::DenseArray(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), values_(element_count(shape_), fill) {}

DenseArray::DenseArray(std::vector<std::size_t> shape, std::vector<double> values)
    : shape_(std::move(shape)), values_(std::move(values)) {
  if (values_.size() != element_count(shape_)) {
    throw ContractError("DenseArray: element count does not match shape");
  }
}

DenseArray DenseArray::vector(std::vector<double> values) {
  const std::size_t n = values.size();
  return DenseArray({n}, std::move(values));
}

DenseArray DenseArray::matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
  return DenseArray({rows, cols}, std::move(values));
}

DenseArray DenseArray::zeros_like(const DenseArray& other) { return DenseArray(other.shape_, 0.0); }

std::size_t DenseArray::rows() const noexcept {
  if (shape_.size() < 2) return 1;
  return values_.size() / shape_.back();
}

std::size_t DenseArray::cols() const noexcept { return shape_.empty() ? 1 : shape_.back(); }

bool DenseArray::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace acs::numeric
