// Copyright 2026 The ACS Distill Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <vector>

#include "acs/diffusion/denoiser.hpp"
#include "acs/diffusion/schedule.hpp"
#include "acs/errors.hpp"
#include "acs/gmm/target.hpp"
#include "acs/io/config.hpp"

namespace acs::diffusion {
namespace {

TEST(Schedule, CosineIsStrictlyDecreasingAndHitsFinalValue) {
  const auto s = NoiseSchedule::cosine(50, 1e-3);
  ASSERT_EQ(s.steps(), 50u);
  EXPECT_EQ(s.alpha_bar(0), 1.0);
  for (std::size_t t = 1; t <= 50; ++t) {
    EXPECT_LT(s.alpha_bar(t), s.alpha_bar(t - 1));
    EXPECT_GT(s.alpha_bar(t), 0.0);
    EXPECT_EQ(s.sigma(t), 0.0);
  }
  EXPECT_NEAR(s.alpha_bar(50), 1e-3, 1e-12);
}

TEST(Schedule, CosineFormula) {
  const auto s = NoiseSchedule::cosine(10, 0.01);
  const double scale = std::acos(std::sqrt(0.01)) / (std::numbers::pi / 2);
  for (std::size_t t = 0; t <= 10; ++t) {
    const double c = std::cos(t / 10.0 * std::numbers::pi / 2 * scale);
    EXPECT_NEAR(s.alpha_bar(t), c * c, 1e-12);
  }
}

TEST(Schedule, SigmaFollowsEta) {
  const auto s = NoiseSchedule::from_alpha_bars({0.9, 0.5, 0.1}, 0.5);
  for (std::size_t t = 1; t <= 3; ++t) {
    const double a = s.alpha_bar(t), ap = s.alpha_bar(t - 1);
    EXPECT_NEAR(s.sigma(t), 0.5 * std::sqrt((1 - ap) / (1 - a)) * std::sqrt(1 - a / ap), 1e-15);
  }
}

TEST(Schedule, RejectsInvalidSequences) {
  EXPECT_THROW(NoiseSchedule::from_alpha_bars({0.9, 0.9}), ContractError);
  EXPECT_THROW(NoiseSchedule::from_alpha_bars({0.5, 0.7}), ContractError);
  EXPECT_THROW(NoiseSchedule::from_alpha_bars({0.5, 0.0}), ContractError);
  EXPECT_THROW(NoiseSchedule::from_alpha_bars({1.0}), ContractError);
  EXPECT_THROW(NoiseSchedule::from_alpha_bars({}), ContractError);
  EXPECT_THROW(NoiseSchedule::from_alpha_bars({0.5}, 1.5), ContractError);
  EXPECT_THROW(NoiseSchedule::cosine(0), ContractError);
  EXPECT_THROW(NoiseSchedule::cosine(10, 1.0), ContractError);
  EXPECT_THROW(NoiseSchedule::cosine(10).sigma(0), ContractError);
  EXPECT_THROW(NoiseSchedule::cosine(10).alpha_bar(11), ContractError);
}

TEST(ForwardNoise, Examples) {
  const auto s = NoiseSchedule::from_alpha_bars({0.25});
  const std::vector<double> z0{2.0};
  EXPECT_EQ(forward_noise(z0, 0, std::vector<double>{5.0}, s)[0], 2.0);
  EXPECT_DOUBLE_EQ(forward_noise(z0, 1, std::vector<double>{0.0}, s)[0], 1.0);
  EXPECT_NEAR(forward_noise(z0, 1, std::vector<double>{1.0}, s)[0], 1.866025, 1e-6);
}

TEST(Denoiser, AnalyticMatchesTargetAndChecksArguments) {
  auto target = std::make_shared<const gmm::GmmTarget>(gmm::default_scenario());
  const auto d = Denoiser::analytic(target);
  const auto s = NoiseSchedule::cosine(50);
  const std::vector<double> z{0.5, -1.0};
  EXPECT_EQ(d.eval(z, 10, 1, s), target->exact_eps(z, 1, s.alpha_bar(10)));
  EXPECT_THROW(d.eval(z, 0, 1, s), ContractError);
  EXPECT_THROW(d.eval(z, 51, 1, s), ContractError);
  EXPECT_THROW(d.eval(z, 10, 3, s), ContractError);
  EXPECT_THROW(d.eval(std::vector<double>{1.0}, 10, 0, s), ContractError);
}

TEST(Denoiser, ConditioningInputLayout) {
  const auto in = conditioning_input(std::vector<double>{0.5, -1.0}, 5, 10, 2, 3);
  EXPECT_EQ(in.storage(), (std::vector<double>{0.5, -1.0, 0.0, 0.0, 1.0, 0.5}));
}

TEST(Denoiser, LearnedVjpMatchesFiniteDifferences) {
  auto model = std::make_shared<const numeric::MlpModel>(
      numeric::MlpModel::initialize({2 + 3 + 1, 16, 2}, numeric::Activation::kTanh, 3));
  const auto d = Denoiser::learned(model);
  const auto s = NoiseSchedule::cosine(20);
  numeric::Rng rng(1);
  for (int probe = 0; probe < 50; ++probe) {
    const auto z = numeric::standard_normal(rng, 2);
    const auto v = numeric::standard_normal(rng, 2);
    const std::size_t t = 1 + probe % 20;
    const auto vjp = d.eval_vjp(z, t, probe % 3, s, v);
    for (int i = 0; i < 2; ++i) {
      auto up = z, dn = z;
      up[i] += 1e-5;
      dn[i] -= 1e-5;
      const auto eu = d.eval(up, t, probe % 3, s), ed = d.eval(dn, t, probe % 3, s);
      const double fd = (v[0] * (eu[0] - ed[0]) + v[1] * (eu[1] - ed[1])) / 2e-5;
      EXPECT_NEAR(vjp[i], fd, 1e-4 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(Denoiser, LearnedOnStandardNormalApproachesAnalyticOptimum) {
  const auto target = gmm::builtin_scenario("standard_normal");
  const auto defaults = io::default_config().denoiser;
  const auto data = gmm::sample_target(target, defaults.train_per_class, defaults.data_seed);
  const auto schedule = NoiseSchedule::cosine(50);
  auto model = numeric::MlpModel::initialize({2 + 1 + 1, 64, 64, 2}, defaults.activation, 1);
  const auto trained = train_denoiser(data, model, schedule, defaults.optimizer);
  EXPECT_LT(trained.final_heldout_loss, trained.initial_heldout_loss);

  numeric::Rng rng(12);
  double mae = 0.0;
  for (int probe = 0; probe < 50; ++probe) {
    const auto z = numeric::standard_normal(rng, 2);
    const std::size_t t = 1 + (probe * 7) % 50;
    const auto got = trained.denoiser.eval(z, t, 0, schedule);
    const double k = std::sqrt(1.0 - schedule.alpha_bar(t));
    for (int i = 0; i < 2; ++i) mae += std::abs(got[i] - k * z[i]);
  }
  EXPECT_LT(mae / 100.0, 0.1);
}

TEST(Denoiser, TrainingIsDeterministicAndReducesLoss) {
  const auto target = gmm::default_scenario();
  const auto data = gmm::sample_target(target, 200, 4);
  const auto schedule = NoiseSchedule::cosine(50);
  const auto model = numeric::MlpModel::initialize({2 + 3 + 1, 32, 2}, numeric::Activation::kTanh, 2);
  const numeric::OptimizerConfig opt{0.01, 0.9, 300, 64, 8};
  const auto a = train_denoiser(data, model, schedule, opt);
  const auto b = train_denoiser(data, model, schedule, opt);
  EXPECT_EQ(*a.model, *b.model);
  EXPECT_EQ(a.loss_history, b.loss_history);
  EXPECT_LT(a.final_heldout_loss, a.initial_heldout_loss);
}

TEST(Denoiser, TrainingRejectsMissingClasses) {
  const auto target = gmm::default_scenario();
  auto data = gmm::sample_target(target, 10, 4);
  data.resize(10);  // class 0 only
  const auto model = numeric::MlpModel::initialize({2 + 3 + 1, 8, 2}, numeric::Activation::kTanh, 2);
  EXPECT_THROW(train_denoiser(data, model, NoiseSchedule::cosine(10), {0.01, 0.9, 10, 4, 0}), ContractError);
}

}  // namespace
}  // namespace acs::diffusion
