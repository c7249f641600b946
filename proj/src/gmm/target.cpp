// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include "acs/gmm/target.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "acs/errors.hpp"

namespace acs::gmm {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Per-component quantities of the noised marginal at one alpha_bar.
struct NoisedTerm {
  double log_weighted_density;  // log w_k + log N(z; m_k, S_k)
  VectorXd component_score;     // -S_k^{-1} (z - m_k)
  MatrixXd precision;           // S_k^{-1}
};

bool is_isotropic(const Component& c, std::size_t d, double* variance) {
  const double v = c.covariance[0];
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const double expected = i == j ? v : 0.0;
      if (c.covariance[i * d + j] != expected) return false;
    }
  *variance = v;
  return true;
}

std::vector<NoisedTerm> noised_terms(const std::vector<Component>& comps, std::size_t d,
                                     std::span<const double> z, double alpha_bar) {
  if (!(alpha_bar > 0.0) || alpha_bar > 1.0)
    throw ContractError("GmmTarget: alpha_bar must lie in (0, 1]");
  if (z.size() != d) throw ContractError("GmmTarget: point dimension mismatch");
  const double sqrt_a = std::sqrt(alpha_bar);
  const double log_2pi = std::log(2.0 * std::numbers::pi);
  const VectorXd zv = Eigen::Map<const VectorXd>(z.data(), static_cast<Eigen::Index>(d));
  std::vector<NoisedTerm> terms;
  terms.reserve(comps.size());
  for (const Component& c : comps) {
    const VectorXd mean = Eigen::Map<const VectorXd>(c.mean.data(), static_cast<Eigen::Index>(d));
    const VectorXd r = zv - sqrt_a * mean;
    NoisedTerm term;
    double variance = 0.0;
    if (is_isotropic(c, d, &variance)) {
      const double s = alpha_bar * variance + (1.0 - alpha_bar);
      term.log_weighted_density = std::log(c.weight) -
                                  0.5 * (static_cast<double>(d) * (log_2pi + std::log(s)) + r.squaredNorm() / s);
      term.component_score = -r / s;
      term.precision = MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)) / s;
    } else {
      const MatrixXd sigma =
          Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
              c.covariance.data(), static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      const MatrixXd s =
          alpha_bar * sigma +
          (1.0 - alpha_bar) * MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
      const Eigen::LLT<MatrixXd> llt(s);
      const VectorXd solved = llt.solve(r);
      const double log_det = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
      term.log_weighted_density =
          std::log(c.weight) - 0.5 * (static_cast<double>(d) * log_2pi + log_det + r.dot(solved));
      term.component_score = -solved;
      term.precision = llt.solve(MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d)));
    }
    terms.push_back(std::move(term));
  }
  return terms;
}

// Posterior component responsibilities via log-sum-exp.
std::vector<double> responsibilities(const std::vector<NoisedTerm>& terms, double* log_total) {
  double mx = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms) mx = std::max(mx, t.log_weighted_density);
  double acc = 0.0;
  for (const auto& t : terms) acc += std::exp(t.log_weighted_density - mx);
  const double lse = mx + std::log(acc);
  if (log_total != nullptr) *log_total = lse;
  std::vector<double> resp;
  resp.reserve(terms.size());
  for (const auto& t : terms) resp.push_back(std::exp(t.log_weighted_density - lse));
  return resp;
}

}  // namespace

Component Component::isotropic(double weight, std::vector<double> mean, double stddev) {
  const std::size_t d = mean.size();
  Component c;
  c.weight = weight;
  c.mean = std::move(mean);
  c.covariance.assign(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) c.covariance[i * d + i] = stddev * stddev;
  return c;
}

GmmTarget::GmmTarget(std::size_t dimension, std::vector<std::vector<Component>> classes)
    : dimension_(dimension), classes_(std::move(classes)) {
  if (dimension_ == 0) throw ContractError("GmmTarget: dimension must be positive");
  if (classes_.empty()) throw ContractError("GmmTarget: need at least one class");
  const auto d = static_cast<Eigen::Index>(dimension_);
  for (std::size_t y = 0; y < classes_.size(); ++y) {
    const auto& comps = classes_[y];
    const std::string where = "GmmTarget: class " + std::to_string(y);
    if (comps.empty()) throw ContractError(where + " has no components");
    double total = 0.0;
    std::vector<Factor> factors;
    for (const Component& c : comps) {
      if (!(c.weight > 0.0) || !std::isfinite(c.weight)) throw ContractError(where + ": weights must be positive");
      total += c.weight;
      if (c.mean.size() != dimension_) throw ContractError(where + ": mean dimension mismatch");
      if (!std::all_of(c.mean.begin(), c.mean.end(), [](double v) { return std::isfinite(v); }))
        throw ContractError(where + ": mean must be finite");
      if (c.covariance.size() != dimension_ * dimension_)
        throw ContractError(where + ": covariance must be d x d");
      const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> sigma =
          Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
              c.covariance.data(), d, d);
      if (!sigma.allFinite() || !sigma.isApprox(sigma.transpose(), 0.0))
        throw ContractError(where + ": covariance must be finite and symmetric");
      const Eigen::LLT<MatrixXd> llt(sigma);
      const MatrixXd lower = llt.matrixL().toDenseMatrix();
      if (llt.info() != Eigen::Success || !(lower.diagonal().minCoeff() > 1e-12))
        throw ContractError(where + ": covariance must be positive definite");
      Factor f;
      f.cholesky.resize(dimension_ * dimension_);
      f.precision.resize(dimension_ * dimension_);
      const MatrixXd precision = llt.solve(MatrixXd::Identity(d, d));
      for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
          f.cholesky[static_cast<std::size_t>(i * d + j)] = lower(i, j);
          f.precision[static_cast<std::size_t>(i * d + j)] = precision(i, j);
        }
      factors.push_back(std::move(f));
    }
    if (std::abs(total - 1.0) > 1e-12) throw ContractError(where + ": component weights must sum to 1");
    factors_.push_back(std::move(factors));
  }
}

void GmmTarget::check_class(int y) const {
  if (y < 0 || static_cast<std::size_t>(y) >= classes_.size())
    throw ContractError("GmmTarget: class id " + std::to_string(y) + " out of range");
}

const std::vector<Component>& GmmTarget::components(int y) const {
  check_class(y);
  return classes_[static_cast<std::size_t>(y)];
}

std::size_t GmmTarget::total_components() const {
  std::size_t n = 0;
  for (const auto& c : classes_) n += c.size();
  return n;
}

double GmmTarget::log_density(std::span<const double> z, int y, double alpha_bar) const {
  check_class(y);
  double lse = 0.0;
  responsibilities(noised_terms(classes_[static_cast<std::size_t>(y)], dimension_, z, alpha_bar), &lse);
  return lse;
}

std::vector<double> GmmTarget::score(std::span<const double> z, int y, double alpha_bar) const {
  check_class(y);
  const auto terms = noised_terms(classes_[static_cast<std::size_t>(y)], dimension_, z, alpha_bar);
  const auto resp = responsibilities(terms, nullptr);
  std::vector<double> out(dimension_, 0.0);
  for (std::size_t k = 0; k < terms.size(); ++k)
    for (std::size_t i = 0; i < dimension_; ++i)
      out[i] += resp[k] * terms[k].component_score(static_cast<Eigen::Index>(i));
  return out;
}

std::vector<double> GmmTarget::exact_eps(std::span<const double> z, int y, double alpha_bar) const {
  std::vector<double> eps = score(z, y, alpha_bar);
  const double factor = -std::sqrt(1.0 - alpha_bar);
  for (double& v : eps) v *= factor;
  return eps;
}

std::vector<double> GmmTarget::exact_eps_vjp(std::span<const double> z, int y, double alpha_bar,
                                             std::span<const double> v) const {
  check_class(y);
  if (v.size() != dimension_) throw ContractError("exact_eps_vjp: cotangent dimension mismatch");
  const auto terms = noised_terms(classes_[static_cast<std::size_t>(y)], dimension_, z, alpha_bar);
  const auto resp = responsibilities(terms, nullptr);
  const auto d = static_cast<Eigen::Index>(dimension_);
  const VectorXd vv = Eigen::Map<const VectorXd>(v.data(), d);
  // Hessian of log p applied to v:
  //   sum_k r_k (-P_k v + g_k g_k.v) - gbar gbar.v,  g_k = component score.
  VectorXd gbar = VectorXd::Zero(d);
  VectorXd hv = VectorXd::Zero(d);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const VectorXd& g = terms[k].component_score;
    gbar += resp[k] * g;
    hv += resp[k] * (-(terms[k].precision * vv) + g * g.dot(vv));
  }
  hv -= gbar * gbar.dot(vv);
  const double factor = -std::sqrt(1.0 - alpha_bar);
  std::vector<double> out(dimension_);
  for (Eigen::Index i = 0; i < d; ++i) out[static_cast<std::size_t>(i)] = factor * hv(i);
  return out;
}

double GmmTarget::mahalanobis(std::span<const double> x, int y, std::size_t k) const {
  check_class(y);
  const auto& comps = classes_[static_cast<std::size_t>(y)];
  if (k >= comps.size()) throw ContractError("mahalanobis: component index out of range");
  if (x.size() != dimension_) throw ContractError("mahalanobis: point dimension mismatch");
  const auto& precision = factors_[static_cast<std::size_t>(y)][k].precision;
  double q = 0.0;
  for (std::size_t i = 0; i < dimension_; ++i)
    for (std::size_t j = 0; j < dimension_; ++j)
      q += (x[i] - comps[k].mean[i]) * precision[i * dimension_ + j] * (x[j] - comps[k].mean[j]);
  return std::sqrt(std::max(q, 0.0));
}

namespace {

// Twelve modes on a circle of radius 4. Classes own contiguous arcs of four
// modes, or alternate around the circle when `interleaved`.
GmmTarget ring_scenario(bool interleaved) {
  constexpr int kClasses = 3;
  constexpr int kModes = 12;
  constexpr int kPerClass = kModes / kClasses;
  constexpr double kRadius = 4.0;
  constexpr double kSigma = 0.35;
  std::vector<std::vector<Component>> classes(kClasses);
  for (int j = 0; j < kModes; ++j) {
    const double angle = 2.0 * std::numbers::pi * (j + 0.5) / kModes;
    const int y = interleaved ? j % kClasses : j / kPerClass;
    classes[y].push_back(
        Component::isotropic(1.0 / kPerClass, {kRadius * std::cos(angle), kRadius * std::sin(angle)}, kSigma));
  }
  return GmmTarget(2, std::move(classes));
}

}  // namespace

GmmTarget default_scenario() { return ring_scenario(false); }

GmmTarget builtin_scenario(const std::string& name) {
  if (name == "default") return default_scenario();
  if (name == "interleaved") return ring_scenario(true);
  if (name == "standard_normal") return GmmTarget(2, {{Component::isotropic(1.0, {0.0, 0.0}, 1.0)}});
  if (name == "two_clusters")
    return GmmTarget(2, {{Component::isotropic(1.0, {-4.0, 0.0}, 1.0)}, {Component::isotropic(1.0, {4.0, 0.0}, 1.0)}});
  throw ContractError("unknown scenario '" + name + "'");
}

std::vector<std::string> builtin_scenario_names() { return {"default", "interleaved", "standard_normal", "two_clusters"}; }

std::vector<LabeledPoint> sample_target(const GmmTarget& target, std::size_t n_per_class, std::uint64_t seed) {
  if (n_per_class == 0) throw ContractError("sample_target: n_per_class must be positive");
  std::mt19937_64 rng(seed);
  std::vector<LabeledPoint> out;
  out.reserve(n_per_class * target.num_classes());
  for (std::size_t y = 0; y < target.num_classes(); ++y)
    for (std::size_t i = 0; i < n_per_class; ++i) out.push_back({target.draw(rng, static_cast<int>(y)), static_cast<int>(y)});
  return out;
}

}  // namespace acs::gmm
