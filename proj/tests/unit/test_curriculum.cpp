// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <memory>
#include <set>
#include <vector>

#include "acs/curriculum/curriculum.hpp"
#include "acs/errors.hpp"

namespace acs::curriculum {
namespace {

struct Fixture : ::testing::Test {
  std::shared_ptr<const gmm::GmmTarget> target = std::make_shared<const gmm::GmmTarget>(gmm::default_scenario());
  diffusion::Denoiser denoiser = diffusion::Denoiser::analytic(target);
  diffusion::NoiseSchedule schedule = diffusion::NoiseSchedule::cosine(50, 1e-3, 1.0);
  adversary::DiscriminatorConfig disc{{16}, numeric::Activation::kRelu, {0.05, 0.9, 60, 16, 0}};

  DistilledDataset run(std::vector<std::size_t> sizes, double g, std::uint64_t seed, std::size_t workers = 1) {
    return run_acs(CurriculumPlan::with_global_guidance(std::move(sizes), g, seed, disc), denoiser, schedule, 3,
                   workers);
  }
};

TEST(Plan, Validation) {
  EXPECT_NO_THROW(CurriculumPlan::with_global_guidance({1, 2}, 0.1, 0).validate());
  EXPECT_THROW(CurriculumPlan::with_global_guidance({}, 0.1, 0).validate(), ConfigError);
  EXPECT_THROW(CurriculumPlan::with_global_guidance({1, 0}, 0.1, 0).validate(), ConfigError);
  auto plan = CurriculumPlan::with_global_guidance({1, 2}, 0.1, 0);
  plan.guidance[0] = 0.1;
  try {
    plan.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("without adversarial guidance"), std::string::npos);
  }
  plan.guidance = {0.0, -1.0};
  EXPECT_THROW(plan.validate(), ConfigError);
  plan.guidance = {0.0};
  EXPECT_THROW(plan.validate(), ConfigError);
}

TEST(Plan, Offsets) {
  const auto plan = CurriculumPlan::with_global_guidance({5, 5, 10, 30, 50}, 0.1, 0);
  EXPECT_EQ(plan.budget_per_class(), 100u);
  EXPECT_EQ(plan.offset(0), 0u);
  EXPECT_EQ(plan.offset(2), 10u);
  EXPECT_EQ(plan.offset(5), 100u);
  EXPECT_THROW(plan.offset(6), ContractError);
}

TEST(Seeds, DistinctAcrossClassesAndOrdinals) {
  std::set<std::uint64_t> seen;
  for (int y = 0; y < 3; ++y)
    for (std::size_t k = 0; k < 100; ++k) seen.insert(sample_seed(9, y, k));
  EXPECT_EQ(seen.size(), 300u);
  EXPECT_NE(sample_seed(9, 0, 0), sample_seed(10, 0, 0));
  EXPECT_NE(discriminator_seed(9, 1, 0), discriminator_seed(9, 2, 0));
}

TEST_F(Fixture, Accounting) {
  const auto ds = run({2, 3}, 0.1, 4);
  EXPECT_EQ(ds.points().size(), 15u);
  for (int y = 0; y < 3; ++y) {
    EXPECT_EQ(ds.count(0, y), 2u);
    EXPECT_EQ(ds.count(1, y), 3u);
    EXPECT_EQ(ds.total_per_class(y), 5u);
  }
  EXPECT_NO_THROW(validate_dataset(ds));
  EXPECT_EQ(ds.curricula[0].g, 0.0);
  EXPECT_EQ(ds.curricula[1].g, 0.1);
  EXPECT_TRUE(ds.curricula[0].discriminator_fingerprint.empty());
  EXPECT_EQ(ds.curricula[1].discriminator_fingerprint, adversary::training_fingerprint(ds.points_of(0)));
  for (const auto& s : ds.curricula[1].samples) EXPECT_EQ(s.record.guidance_norms.size(), 50u);
  for (const auto& s : ds.curricula[0].samples) EXPECT_TRUE(s.record.guidance_norms.empty());
}

TEST_F(Fixture, SingleCurriculumIsPlainSampling) {
  const auto ds = run({4}, 0.5, 12);
  for (const auto& s : ds.curricula[0].samples) {
    const auto plain = sampler::sample_trajectory(s.point.y, denoiser, schedule, std::nullopt,
                                                  sample_seed(12, s.point.y, s.index));
    EXPECT_EQ(s.point, plain.point);
  }
}

TEST_F(Fixture, DeterministicAndWorkerIndependent) {
  const auto a = run({2, 2, 2}, 0.1, 5, 1);
  const auto b = run({2, 2, 2}, 0.1, 5, 3);
  EXPECT_EQ(content_hash(a), content_hash(b));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a.curricula[i].samples, b.curricula[i].samples);
  EXPECT_NE(content_hash(a), content_hash(run({2, 2, 2}, 0.1, 6)));
}

TEST_F(Fixture, FirstCurriculumMatchesUnguidedBaseline) {
  const auto full = run({2, 3, 4}, 0.2, 7);
  const auto base = run({2}, 0.0, 7);
  EXPECT_EQ(full.curricula[0].samples, base.curricula[0].samples);
}

TEST_F(Fixture, NestedSubsetsArePrefixes) {
  const auto ds = run({1, 1, 2}, 0.1, 8);
  std::size_t previous = 0;
  for (std::size_t k = 1; k <= 3; ++k) {
    const auto sub = nested_subset(ds, k);
    const auto pts = sub.points();
    EXPECT_GT(pts.size(), previous);
    const auto all = ds.points_before(k);
    EXPECT_EQ(pts.size(), all.size());
    previous = pts.size();
    EXPECT_NO_THROW(validate_dataset(sub));
  }
  EXPECT_EQ(content_hash(nested_subset(ds, 3)), content_hash(ds));
  EXPECT_THROW(nested_subset(ds, 0), ContractError);
  EXPECT_THROW(nested_subset(ds, 4), ContractError);
}

TEST_F(Fixture, ValidationDetectsTampering) {
  const auto ds = run({1, 2}, 0.1, 3);
  auto bad = ds;
  bad.curricula[1].samples[0].record.seed ^= 1;
  EXPECT_THROW(validate_dataset(bad), RuntimeError);
  bad = ds;
  bad.curricula[1].discriminator_fingerprint = "deadbeef";
  EXPECT_THROW(validate_dataset(bad), RuntimeError);
  bad = ds;
  bad.curricula[1].samples.pop_back();
  EXPECT_THROW(validate_dataset(bad), RuntimeError);
  bad = ds;
  bad.curricula[0].samples[0].point.x[0] += 1.0;
  EXPECT_THROW(validate_dataset(bad), RuntimeError);  // S_1's discriminator no longer matches
  bad = ds;
  bad.curricula[0].discriminator_fingerprint = "x";
  EXPECT_THROW(validate_dataset(bad), RuntimeError);
}

TEST_F(Fixture, ContentHashCoversCoordinates) {
  const auto ds = run({2}, 0.0, 3);
  auto other = ds;
  other.curricula[0].samples[1].point.x[1] = std::nextafter(other.curricula[0].samples[1].point.x[1], 1e9);
  EXPECT_NE(content_hash(ds), content_hash(other));
}

TEST_F(Fixture, ProgressCallbackSeesEachCurriculum) {
  std::vector<std::size_t> seen;
  run_acs(CurriculumPlan::with_global_guidance({1, 1, 1}, 0.1, 1, disc), denoiser, schedule, 3, 1,
          [&](std::size_t i, const CurriculumRecord&) { seen.push_back(i); });
  EXPECT_EQ(seen, (std::vector<std::size_t>{0, 1, 2}));
}

}  // namespace
}  // namespace acs::curriculum
