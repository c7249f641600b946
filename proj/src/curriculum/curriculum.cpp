// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include "acs/curriculum/curriculum.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <string>
#include <thread>

#include "acs/errors.hpp"
#include "acs/hash.hpp"
#include "acs/numeric/rng.hpp"

namespace acs::curriculum {

CurriculumPlan CurriculumPlan::with_global_guidance(std::vector<std::size_t> sizes, double g, std::uint64_t base_seed,
                                                    adversary::DiscriminatorConfig discriminator) {
  CurriculumPlan plan;
  plan.guidance.assign(sizes.size(), g);
  if (!plan.guidance.empty()) plan.guidance[0] = 0.0;
  plan.sizes = std::move(sizes);
  plan.base_seed = base_seed;
  plan.discriminator = std::move(discriminator);
  return plan;
}

std::size_t CurriculumPlan::budget_per_class() const noexcept {
  return std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
}

std::size_t CurriculumPlan::offset(std::size_t i) const {
  if (i > sizes.size()) throw ContractError("plan: curriculum index out of range");
  return std::accumulate(sizes.begin(), sizes.begin() + static_cast<std::ptrdiff_t>(i), std::size_t{0});
}

void CurriculumPlan::validate() const {
  if (sizes.empty()) throw ConfigError("plan: at least one curriculum is required");
  if (std::any_of(sizes.begin(), sizes.end(), [](std::size_t n) { return n == 0; }))
    throw ConfigError("plan: every curriculum size must be positive");
  if (guidance.size() != sizes.size()) throw ConfigError("plan: one guidance value per curriculum is required");
  if (guidance[0] != 0.0)
    throw ConfigError("plan: the first curriculum is sampled without adversarial guidance, so g_0 must be 0");
  for (double g : guidance)
    if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("plan: guidance values must be finite and non-negative");
  discriminator.optimizer.validate();
}

std::vector<gmm::LabeledPoint> DistilledDataset::points_before(std::size_t end) const {
  std::vector<gmm::LabeledPoint> out;
  for (std::size_t i = 0; i < std::min(end, curricula.size()); ++i)
    for (const auto& s : curricula[i].samples) out.push_back(s.point);
  return out;
}

std::vector<gmm::LabeledPoint> DistilledDataset::points() const { return points_before(curricula.size()); }

std::vector<gmm::LabeledPoint> DistilledDataset::points_of(std::size_t curriculum) const {
  if (curriculum >= curricula.size()) throw ContractError("points_of: curriculum out of range");
  std::vector<gmm::LabeledPoint> out;
  for (const auto& s : curricula[curriculum].samples) out.push_back(s.point);
  return out;
}

std::size_t DistilledDataset::count(std::size_t curriculum, int y) const {
  if (curriculum >= curricula.size()) throw ContractError("count: curriculum out of range");
  const auto& samples = curricula[curriculum].samples;
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [y](const DistilledSample& s) { return s.point.y == y; }));
}

std::size_t DistilledDataset::total_per_class(int y) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < curricula.size(); ++i) n += count(i, y);
  return n;
}

std::uint64_t sample_seed(std::uint64_t base_seed, int y, std::size_t ordinal) {
  return numeric::derive_seed({base_seed, 0x73616d70ULL, static_cast<std::uint64_t>(y), ordinal});
}

std::uint64_t discriminator_seed(std::uint64_t base_seed, std::size_t curriculum, std::uint64_t config_seed) {
  return numeric::derive_seed({base_seed, 0x64697363ULL, curriculum, config_seed});
}

namespace {

struct Job {
  int y;
  std::size_t index;
};

std::vector<DistilledSample> sample_curriculum(std::size_t curriculum, std::size_t per_class, std::size_t offset,
                                               std::size_t num_classes, std::uint64_t base_seed, const diffusion::Denoiser& denoiser,
                                               const diffusion::NoiseSchedule& schedule,
                                               const std::optional<sampler::Guide>& guide, std::size_t workers) {
  std::vector<Job> jobs;
  for (std::size_t y = 0; y < num_classes; ++y)
    for (std::size_t j = 0; j < per_class; ++j) jobs.push_back({static_cast<int>(y), j});
  std::vector<DistilledSample> out(jobs.size());
  auto run = [&](std::size_t i) {
    const Job& job = jobs[i];
    sampler::Sample s =
        sampler::sample_trajectory(job.y, denoiser, schedule, guide, sample_seed(base_seed, job.y, offset + job.index));
    out[i] = {std::move(s.point), std::move(s.record), curriculum, job.index};
  };
  workers = std::clamp<std::size_t>(workers, 1, jobs.size());
  if (workers == 1) {
    for (std::size_t i = 0; i < jobs.size(); ++i) run(i);
    return out;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < jobs.size(); i += workers) run(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace

DistilledDataset run_acs(const CurriculumPlan& plan, const diffusion::Denoiser& denoiser,
                         const diffusion::NoiseSchedule& schedule, std::size_t num_classes, std::size_t workers,
                         const ProgressFn& progress) {
  plan.validate();
  if (num_classes == 0 || denoiser.num_classes() < num_classes)
    throw ContractError("run_acs: denoiser does not cover every class");
  DistilledDataset dataset;
  dataset.plan = plan;
  dataset.num_classes = num_classes;
  dataset.dimension = denoiser.dimension();
  for (std::size_t i = 0; i < plan.curricula(); ++i) {
    CurriculumRecord record;
    record.g = plan.guidance[i];
    std::optional<sampler::Guide> guide;
    if (i > 0) {
      const std::vector<gmm::LabeledPoint> seen = dataset.points_before(i);
      adversary::DiscriminatorConfig config = plan.discriminator;
      config.optimizer.seed = discriminator_seed(plan.base_seed, i, plan.discriminator.optimizer.seed);
      adversary::DiscriminatorTraining trained;
      try {
        trained = adversary::train_discriminator(seen, num_classes, config);
      } catch (const ConfigError& e) {
        throw RuntimeError("run_acs: discriminator training for curriculum " + std::to_string(i) +
                           " failed: " + e.what());
      }
      record.discriminator_fingerprint = trained.discriminator.fingerprint;
      record.discriminator_seed = config.optimizer.seed;
      record.discriminator_training_accuracy = trained.training_accuracy;
      record.discriminator = std::move(trained.discriminator);
      sampler::GuidanceConfig guidance;
      guidance.g = record.g;
      guidance.gradient_through_denoiser = plan.gradient_through_denoiser;
      guide = sampler::Guide{&*record.discriminator, guidance};
    }
    record.samples =
        sample_curriculum(i, plan.sizes[i], plan.offset(i), num_classes, plan.base_seed, denoiser, schedule, guide, workers);
    dataset.curricula.push_back(std::move(record));
    if (progress) progress(i, dataset.curricula.back());
  }
  return dataset;
}

DistilledDataset nested_subset(const DistilledDataset& dataset, std::size_t k) {
  if (k == 0 || k > dataset.curricula.size())
    throw ContractError("nested_subset: k must lie in [1, " + std::to_string(dataset.curricula.size()) + "]");
  DistilledDataset out;
  out.plan = dataset.plan;
  out.plan.sizes.resize(k);
  out.plan.guidance.resize(k);
  out.num_classes = dataset.num_classes;
  out.dimension = dataset.dimension;
  out.curricula.assign(dataset.curricula.begin(), dataset.curricula.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

void validate_dataset(const DistilledDataset& dataset) {
  const auto& plan = dataset.plan;
  if (dataset.curricula.size() != plan.curricula())
    throw RuntimeError("dataset: curriculum count does not match the plan");
  for (std::size_t i = 0; i < dataset.curricula.size(); ++i) {
    const auto& record = dataset.curricula[i];
    const std::string where = "dataset: curriculum " + std::to_string(i);
    for (std::size_t y = 0; y < dataset.num_classes; ++y) {
      if (dataset.count(i, static_cast<int>(y)) != plan.sizes[i])
        throw RuntimeError(where + " class " + std::to_string(y) + " has the wrong sample count");
    }
    if (record.samples.size() != plan.sizes[i] * dataset.num_classes)
      throw RuntimeError(where + " contains samples of unknown classes");
    for (const auto& s : record.samples) {
      if (s.curriculum != i) throw RuntimeError(where + ": sample provenance names another curriculum");
      if (s.record.seed != sample_seed(plan.base_seed, s.point.y, plan.offset(i) + s.index))
        throw RuntimeError(where + ": sample seed does not match its provenance");
      if (s.point.x.size() != dataset.dimension) throw RuntimeError(where + ": sample dimension mismatch");
    }
    if (i == 0) {
      if (!record.discriminator_fingerprint.empty())
        throw RuntimeError("dataset: the first curriculum must be unguided");
    } else if (record.discriminator_fingerprint != adversary::training_fingerprint(dataset.points_before(i))) {
      throw RuntimeError(where + ": discriminator was not trained on exactly the preceding curricula");
    }
  }
}

std::string content_hash(const DistilledDataset& dataset) {
  Sha256 h;
  for (const auto& record : dataset.curricula)
    for (const auto& s : record.samples) {
      h.update(static_cast<std::int64_t>(s.curriculum));
      h.update(static_cast<std::int64_t>(s.point.y));
      h.update(static_cast<std::int64_t>(s.index));
      h.update(static_cast<std::int64_t>(s.record.seed));
      for (double v : s.point.x) h.update(v);
    }
  return h.hex_digest();
}

}  // namespace acs::curriculum
