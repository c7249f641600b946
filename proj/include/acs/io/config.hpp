// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "acs/adversary/discriminator.hpp"
#include "acs/curriculum/curriculum.hpp"
#include "acs/diffusion/schedule.hpp"
#include "acs/evaluation/evaluation.hpp"
#include "acs/gmm/target.hpp"

namespace acs::io {

inline constexpr int kConfigSchemaVersion = 1;

struct TargetSpec {
  /// Built-in scenario name; empty when `components` is explicit.
  std::string scenario = "default";
  std::size_t dimension = 0;
  std::vector<std::vector<gmm::Component>> classes;
};

struct ScheduleSpec {
  std::size_t steps = 50;
  double final_alpha_bar = 1e-3;
  /// Stochastic sampling pulls guided trajectories back onto the data
  /// manifold; eta = 0 gives deterministic DDIM.
  double eta = 1.0;
};

enum class DenoiserSource { kAnalytic, kLearned };

struct DenoiserSpec {
  DenoiserSource kind = DenoiserSource::kAnalytic;
  std::vector<std::size_t> hidden{64, 64};
  numeric::Activation activation = numeric::Activation::kTanh;
  std::size_t train_per_class = 2000;
  std::uint64_t data_seed = 11;
  numeric::OptimizerConfig optimizer{0.01, 0.9, 3000, 512, 5};
};

struct PlanSpec {
  std::vector<std::size_t> sizes{5, 5, 10, 30, 50};
  double guidance = 0.05;
  /// Overrides `guidance` when non-empty; element 0 must be 0.
  std::vector<double> guidance_per_curriculum;
  std::uint64_t seed = 2025;
  bool gradient_through_denoiser = false;
};

struct EvaluationSpec {
  evaluation::EvalConfig eval;
  double coverage_radius = 2.0;
  std::size_t oracle_train_per_class = 1000;
  std::size_t scatter_real_per_class = 200;
  /// Largest accepted drop in mean class log-density of guided samples
  /// relative to unguided ones, in nats.
  double fidelity_bound = 2.0;
};

struct SweepSpec {
  std::vector<double> guidance_grid{0.0, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0, 10.0};
  /// Curriculum sizes used by the guidance sweep.
  std::vector<std::size_t> sizes{1, 1, 1, 1};
  std::vector<std::size_t> curricula_grid{1, 2, 3, 4};
  std::size_t budget = 4;
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
};

/// Fully resolved run configuration.
struct RunConfig {
  TargetSpec target;
  ScheduleSpec schedule;
  DenoiserSpec denoiser;
  PlanSpec plan;
  adversary::DiscriminatorConfig discriminator;
  EvaluationSpec evaluation;
  SweepSpec sweep;
};

RunConfig default_config();

/// Parses and validates. Unknown keys, type errors and invariant violations
/// raise ConfigError carrying the offending line.
RunConfig parse_config(std::string_view yaml_text);
RunConfig load_config(const std::filesystem::path& path);
/// Canonical YAML with every field explicit. parse_config(emit_config(c))
/// reproduces c exactly.
std::string emit_config(const RunConfig& config);

/// Throws ConfigError on any invariant violation of the referenced types.
void validate_config(const RunConfig& config);

gmm::GmmTarget make_target(const RunConfig& config);
diffusion::NoiseSchedule make_schedule(const RunConfig& config);
curriculum::CurriculumPlan make_plan(const RunConfig& config);

}  // namespace acs::io
