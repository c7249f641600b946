// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "acs/adversary/discriminator.hpp"
#include "acs/diffusion/denoiser.hpp"
#include "acs/diffusion/schedule.hpp"
#include "acs/sampler/sampler.hpp"

namespace acs::curriculum {

/// Partition of the per-class budget into sequential curricula.
struct CurriculumPlan {
  std::vector<std::size_t> sizes;  // samples per class in each curriculum
  std::vector<double> guidance;    // g_i per curriculum; guidance[0] must be 0
  std::uint64_t base_seed = 0;
  adversary::DiscriminatorConfig discriminator;
  bool gradient_through_denoiser = false;

  /// g_0 = 0 and g_i = g for i >= 1.
  static CurriculumPlan with_global_guidance(std::vector<std::size_t> sizes, double g, std::uint64_t base_seed,
                                             adversary::DiscriminatorConfig discriminator = {});

  std::size_t curricula() const noexcept { return sizes.size(); }
  std::size_t budget_per_class() const noexcept;
  /// Per-class samples in curricula [0, i).
  std::size_t offset(std::size_t i) const;
  void validate() const;
};

struct DistilledSample {
  gmm::LabeledPoint point;
  sampler::TrajectoryRecord record;
  std::size_t curriculum = 0;
  std::size_t index = 0;  // position within its class inside the curriculum

  friend bool operator==(const DistilledSample&, const DistilledSample&) = default;
};

struct CurriculumRecord {
  std::vector<DistilledSample> samples;  // class-major, then index
  double g = 0.0;
  /// Training-set fingerprint of the discriminator that guided this
  /// curriculum; empty for the unguided first curriculum.
  std::string discriminator_fingerprint;
  std::uint64_t discriminator_seed = 0;
  double discriminator_training_accuracy = 0.0;
  std::optional<adversary::Discriminator> discriminator;
};

/// S = union of S_i, with per-sample provenance.
struct DistilledDataset {
  CurriculumPlan plan;
  std::size_t num_classes = 0;
  std::size_t dimension = 0;
  std::vector<CurriculumRecord> curricula;

  std::vector<gmm::LabeledPoint> points() const;
  std::vector<gmm::LabeledPoint> points_of(std::size_t curriculum) const;
  /// Points of curricula [0, end).
  std::vector<gmm::LabeledPoint> points_before(std::size_t end) const;
  std::size_t count(std::size_t curriculum, int y) const;
  std::size_t total_per_class(int y) const;
};

/// Seed of the `ordinal`-th sample of class y counted across all curricula.
/// Runs of equal budget therefore share initial noise sample for sample,
/// whatever the split into curricula.
std::uint64_t sample_seed(std::uint64_t base_seed, int y, std::size_t ordinal);
std::uint64_t discriminator_seed(std::uint64_t base_seed, std::size_t curriculum, std::uint64_t config_seed);

/// Called after each curriculum completes.
using ProgressFn = std::function<void(std::size_t curriculum, const CurriculumRecord&)>;

/// Curriculum 0 is sampled without guidance. For i >= 1 a fresh
/// discriminator is trained on S_0..S_{i-1} and frozen while the n_i samples
/// per class of S_i are drawn with adversarial guidance of strength g_i.
/// `workers` > 1 samples trajectories of one curriculum concurrently; the
/// result does not depend on it.
DistilledDataset run_acs(const CurriculumPlan& plan, const diffusion::Denoiser& denoiser,
                         const diffusion::NoiseSchedule& schedule, std::size_t num_classes, std::size_t workers = 1,
                         const ProgressFn& progress = {});

/// Union of the first k curricula, k in [1, N_c].
DistilledDataset nested_subset(const DistilledDataset& dataset, std::size_t k);

/// Checks accounting, provenance seeds, and discriminator scope
/// fingerprints. Throws RuntimeError describing the first violation.
void validate_dataset(const DistilledDataset& dataset);

/// SHA-256 over (curriculum, class, index, seed, coordinates) of every sample.
std::string content_hash(const DistilledDataset& dataset);

}  // namespace acs::curriculum
