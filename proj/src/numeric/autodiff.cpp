// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include "acs/numeric/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "acs/errors.hpp"

namespace acs::numeric {
namespace {

void require_same_tape(Var a, Var b) {
  if (&a.tape() != &b.tape()) throw ContractError("autodiff: operands recorded on different tapes");
}

void require_same_shape(const DenseArray& a, const DenseArray& b, const char* op) {
  if (!a.same_shape(b)) throw ContractError(std::string(op) + ": shape mismatch");
}

DenseArray scalar(double v) { return DenseArray({1}, std::vector<double>{v}); }

// Result shape for a product: rank-1 left operand keeps a rank-1 result.
std::vector<std::size_t> product_shape(const DenseArray& a, std::size_t cols) {
  if (a.rank() <= 1) return {cols};
  return {a.rows(), cols};
}

}  // namespace

const DenseArray& Var::value() const { return tape_->value(id_); }
const DenseArray& Var::grad() const { return tape_->grad(id_); }

Var Tape::variable(DenseArray value) {
  Node node;
  node.grad = DenseArray::zeros_like(value);
  node.value = std::move(value);
  node.requires_grad = true;
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::constant(DenseArray value) {
  Node node;
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(DenseArray value, std::vector<Var> parents, Backward backward) {
  Node node;
  node.requires_grad = std::any_of(parents.begin(), parents.end(),
                                   [this](Var p) { return nodes_[p.id()].requires_grad; });
  if (node.requires_grad) {
    node.grad = DenseArray::zeros_like(value);
    node.backward = std::move(backward);
  }
  node.value = std::move(value);
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

DenseArray& Tape::mutable_grad(std::size_t id) { return nodes_[id].grad; }

void Tape::backward(Var loss) {
  if (&loss.tape() != this) throw ContractError("backward: loss belongs to another tape");
  Node& root = nodes_[loss.id()];
  if (root.value.size() != 1) throw ContractError("backward: loss must be scalar");
  if (!root.requires_grad) return;
  for (auto& node : nodes_) {
    if (node.requires_grad) std::fill(node.grad.values().begin(), node.grad.values().end(), 0.0);
  }
  root.grad[0] = 1.0;
  for (std::size_t id = loss.id() + 1; id-- > 0;) {
    if (nodes_[id].backward) nodes_[id].backward(*this, id);
  }
}

Var matmul(Var a, Var b) {
  require_same_tape(a, b);
  const DenseArray& av = a.value();
  const DenseArray& bv = b.value();
  if (bv.rank() != 2 || av.cols() != bv.rows()) throw ContractError("matmul: shape mismatch");
  const std::size_t n = av.rows(), k = av.cols(), m = bv.cols();
  DenseArray out(product_shape(av, m));
  {
    const double* A = av.values().data();
    const double* B = bv.values().data();
    double* C = out.values().data();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t p = 0; p < k; ++p) {
        const double aip = A[i * k + p];
        if (aip == 0.0) continue;
        const double* brow = B + p * m;
        double* crow = C + i * m;
        for (std::size_t j = 0; j < m; ++j) crow[j] += aip * brow[j];
      }
  }
  const std::size_t ai = a.id(), bi = b.id();
  return a.tape().record(std::move(out), {a, b}, [ai, bi, n, k, m](Tape& t, std::size_t self) {
    const double* G = t.grad(self).values().data();
    if (t.requires_grad(ai)) {
      const double* B = t.value(bi).values().data();
      double* GA = t.mutable_grad(ai).values().data();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          const double* grow = G + i * m;
          const double* brow = B + p * m;
          double acc = 0.0;
          for (std::size_t j = 0; j < m; ++j) acc += grow[j] * brow[j];
          GA[i * k + p] += acc;
        }
    }
    if (t.requires_grad(bi)) {
      const double* A = t.value(ai).values().data();
      double* GB = t.mutable_grad(bi).values().data();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          const double aip = A[i * k + p];
          if (aip == 0.0) continue;
          const double* grow = G + i * m;
          double* gbrow = GB + p * m;
          for (std::size_t j = 0; j < m; ++j) gbrow[j] += aip * grow[j];
        }
    }
  });
}

Var add_row(Var x, Var bias) {
  require_same_tape(x, bias);
  const DenseArray& xv = x.value();
  const DenseArray& bv = bias.value();
  if (bv.size() != xv.cols()) throw ContractError("add_row: bias width mismatch");
  DenseArray out = xv;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += bv[j];
  const std::size_t xi = x.id(), bi = bias.id();
  return x.tape().record(std::move(out), {x, bias}, [xi, bi](Tape& t, std::size_t self) {
    const DenseArray& g = t.grad(self);
    if (t.requires_grad(xi)) {
      DenseArray& gx = t.mutable_grad(xi);
      for (std::size_t i = 0; i < g.size(); ++i) gx[i] += g[i];
    }
    if (t.requires_grad(bi)) {
      DenseArray& gb = t.mutable_grad(bi);
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) gb[j] += g(i, j);
    }
  });
}

Var add(Var a, Var b) {
  require_same_tape(a, b);
  require_same_shape(a.value(), b.value(), "add");
  DenseArray out = a.value();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.value()[i];
  const std::size_t ai = a.id(), bi = b.id();
  return a.tape().record(std::move(out), {a, b}, [ai, bi](Tape& t, std::size_t self) {
    const DenseArray& g = t.grad(self);
    for (std::size_t id : {ai, bi}) {
      if (!t.requires_grad(id)) continue;
      DenseArray& gi = t.mutable_grad(id);
      for (std::size_t i = 0; i < g.size(); ++i) gi[i] += g[i];
    }
  });
}

Var sub(Var a, Var b) { return add(a, scale(b, -1.0)); }

Var scale(Var a, double factor) {
  DenseArray out = a.value();
  for (double& v : out.values()) v *= factor;
  const std::size_t ai = a.id();
  return a.tape().record(std::move(out), {a}, [ai, factor](Tape& t, std::size_t self) {
    const DenseArray& g = t.grad(self);
    DenseArray& ga = t.mutable_grad(ai);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += factor * g[i];
  });
}

Var relu(Var a) {
  DenseArray out = a.value();
  for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
  const std::size_t ai = a.id();
  return a.tape().record(std::move(out), {a}, [ai](Tape& t, std::size_t self) {
    const DenseArray& g = t.grad(self);
    const DenseArray& x = t.value(ai);
    DenseArray& ga = t.mutable_grad(ai);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (x[i] > 0.0) ga[i] += g[i];
  });
}

Var tanh(Var a) {
  DenseArray out = a.value();
  for (double& v : out.values()) v = std::tanh(v);
  const std::size_t ai = a.id();
  return a.tape().record(std::move(out), {a}, [ai](Tape& t, std::size_t self) {
    const DenseArray& g = t.grad(self);
    const DenseArray& y = t.value(self);
    DenseArray& ga = t.mutable_grad(ai);
    for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
  });
}

Var sum(Var a) {
  double s = 0.0;
  for (double v : a.value().values()) s += v;
  const std::size_t ai = a.id();
  return a.tape().record(scalar(s), {a}, [ai](Tape& t, std::size_t self) {
    const double g = t.grad(self)[0];
    DenseArray& ga = t.mutable_grad(ai);
    for (double& v : ga.values()) v += g;
  });
}

Var dot(Var a, Var b) {
  require_same_tape(a, b);
  if (a.value().size() != b.value().size()) throw ContractError("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.value().size(); ++i) s += a.value()[i] * b.value()[i];
  const std::size_t ai = a.id(), bi = b.id();
  return a.tape().record(scalar(s), {a, b}, [ai, bi](Tape& t, std::size_t self) {
    const double g = t.grad(self)[0];
    if (t.requires_grad(ai)) {
      DenseArray& ga = t.mutable_grad(ai);
      for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g * t.value(bi)[i];
    }
    if (t.requires_grad(bi)) {
      DenseArray& gb = t.mutable_grad(bi);
      for (std::size_t i = 0; i < gb.size(); ++i) gb[i] += g * t.value(ai)[i];
    }
  });
}

Var mean_row_squared_error(Var prediction, Var target) {
  require_same_tape(prediction, target);
  require_same_shape(prediction.value(), target.value(), "mean_row_squared_error");
  const DenseArray& p = prediction.value();
  const DenseArray& y = target.value();
  const double inv_rows = 1.0 / static_cast<double>(p.rows());
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - y[i]) * (p[i] - y[i]);
  const std::size_t pi = prediction.id(), yi = target.id();
  return prediction.tape().record(scalar(s * inv_rows), {prediction, target},
                                  [pi, yi, inv_rows](Tape& t, std::size_t self) {
                                    const double g = t.grad(self)[0];
                                    const DenseArray& p = t.value(pi);
                                    const DenseArray& y = t.value(yi);
                                    for (std::size_t id : {pi, yi}) {
                                      if (!t.requires_grad(id)) continue;
                                      const double sign = id == pi ? 1.0 : -1.0;
                                      DenseArray& gi = t.mutable_grad(id);
                                      for (std::size_t i = 0; i < gi.size(); ++i)
                                        gi[i] += sign * 2.0 * inv_rows * g * (p[i] - y[i]);
                                    }
                                  });
}

Var softmax_cross_entropy(Var logits, std::span<const int> labels) {
  const DenseArray& z = logits.value();
  const std::size_t n = z.rows(), c = z.cols();
  if (labels.size() != n) throw ContractError("softmax_cross_entropy: label count mismatch");
  DenseArray probs(std::vector<std::size_t>{n, c});
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const int y = labels[i];
    if (y < 0 || static_cast<std::size_t>(y) >= c)
      throw ContractError("softmax_cross_entropy: label out of range");
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < c; ++j) mx = std::max(mx, z(i, j));
    double denom = 0.0;
    for (std::size_t j = 0; j < c; ++j) denom += std::exp(z(i, j) - mx);
    const double log_denom = std::log(denom) + mx;
    for (std::size_t j = 0; j < c; ++j) probs(i, j) = std::exp(z(i, j) - log_denom);
    total += log_denom - z(i, static_cast<std::size_t>(y));
  }
  const double inv_rows = 1.0 / static_cast<double>(n);
  std::vector<int> owned(labels.begin(), labels.end());
  const std::size_t zi = logits.id();
  return logits.tape().record(
      scalar(total * inv_rows), {logits},
      [zi, probs = std::move(probs), owned = std::move(owned), inv_rows](Tape& t, std::size_t self) {
        const double g = t.grad(self)[0] * inv_rows;
        DenseArray& gz = t.mutable_grad(zi);
        for (std::size_t i = 0; i < probs.rows(); ++i)
          for (std::size_t j = 0; j < probs.cols(); ++j) {
            const double onehot = static_cast<int>(j) == owned[i] ? 1.0 : 0.0;
            gz(i, j) += g * (probs(i, j) - onehot);
          }
      });
}

}  // namespace acs::numeric
