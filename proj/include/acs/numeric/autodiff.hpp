// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "acs/numeric/dense_array.hpp"

namespace acs::numeric {

class Tape;

/// Handle to a node recorded on a Tape. Cheap to copy; only valid while the
/// owning tape is alive.
class Var {
 public:
  Var() = default;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape& tape() const { return *tape_; }
  std::size_t id() const noexcept { return id_; }
  const DenseArray& value() const;
  const DenseArray& grad() const;

 private:
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Reverse-mode recording tape. Nodes are appended in evaluation order, so the
/// reverse of insertion order is a valid topological order for backward().
class Tape {
 public:
  using Backward = std::function<void(Tape&, std::size_t)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf whose gradient is accumulated by backward().
  Var variable(DenseArray value);
  /// Leaf excluded from differentiation.
  Var constant(DenseArray value);

  /// Records an interior node. `backward` reads this node's grad and
  /// accumulates into its parents.
  Var record(DenseArray value, std::vector<Var> parents, Backward backward);

  const DenseArray& value(std::size_t id) const { return nodes_[id].value; }
  const DenseArray& grad(std::size_t id) const { return nodes_[id].grad; }
  DenseArray& mutable_grad(std::size_t id);
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  std::size_t size() const noexcept { return nodes_.size(); }

  /// Seeds d(loss)/d(loss) = 1 and propagates. `loss` must hold exactly one
  /// element.
  void backward(Var loss);

 private:
  struct Node {
    DenseArray value;
    DenseArray grad;
    bool requires_grad = false;
    Backward backward;
  };
  std::vector<Node> nodes_;
};

// Differentiable operations. Shapes follow matrix conventions; a rank-1 value
// acts as a single row.
Var matmul(Var a, Var b);
Var add_row(Var x, Var bias);
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var scale(Var a, double factor);
Var relu(Var a);
Var tanh(Var a);
Var sum(Var a);
Var dot(Var a, Var b);
/// Mean over rows of the row-wise squared error sum.
Var mean_row_squared_error(Var prediction, Var target);
/// Mean over rows of -log softmax(logits)[label].
Var softmax_cross_entropy(Var logits, std::span<const int> labels);

}  // namespace acs::numeric
