// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "iwf/experiments.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "iwf/waterfill.hpp"

namespace iwf {
namespace {

TEST(StrongInterferenceA, ReferenceIsTwoThirdsSplitAndFixedPoint) {
  auto s = scenario_strong_interference_a();
  ASSERT_TRUE(s.reference_equilibrium);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR((*s.reference_equilibrium)(i, 0) / s.network.power_budget(i), 2.0 / 3.0, 1e-15);
  }
  EXPECT_NEAR(certify(s.network).spectral_radius, 2.0, 1e-9);
  std::vector<double> ones(3, 1.0);
  EXPECT_LT(fixed_point_residual(s.network, *s.reference_equilibrium, ones), 1e-8);
  EXPECT_EQ(s.network.noise_floor(0, 1), 11.0);
}

TEST(StrongInterferenceB, NoReferenceAndLambdaSweep) {
  auto s = scenario_strong_interference_b();
  EXPECT_FALSE(s.reference_equilibrium);
  EXPECT_EQ(s.network.gain(0, 2, 0), 4.0);
  EXPECT_EQ(s.network.gain(2, 0, 1), 5.0);
  EXPECT_EQ(s.algorithms.size(), 6u);
}

TEST(RandomWeakNetwork, ContractiveDeterministicAndShaped) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    auto net = random_weak_network(10, 64, seed);
    EXPECT_EQ(net.num_users(), 10u);
    EXPECT_EQ(net.num_channels(), 64u);
    EXPECT_LE(certify(net).spectral_radius, 0.9 + 1e-9);
    EXPECT_EQ(net, random_weak_network(10, 64, seed));
    for (std::size_t i = 0; i < 10; ++i) {
      EXPECT_EQ(net.power_budget(i), 10.0);
      for (std::size_t k = 0; k < 64; ++k) {
        EXPECT_GE(net.gain(i, i, k), 0.5);
        EXPECT_LT(net.gain(i, i, k), 1.5);
        EXPECT_GE(net.noise_floor(i, k), 0.001);
        EXPECT_LT(net.noise_floor(i, k), 0.01);
        EXPECT_TRUE(std::isinf(net.power_mask(i, k)));
      }
    }
  }
  EXPECT_NE(random_weak_network(3, 3, 1), random_weak_network(3, 3, 2));
  EXPECT_EQ(random_weak_network(2, 4, 1, 3.0).power_mask(1, 3), 3.0);
}

TEST(RandomWeakNetwork, RejectsInvalidSizes) {
  EXPECT_THROW(random_weak_network(0, 3, 1), std::invalid_argument);
  EXPECT_THROW(random_weak_network(3, 0, 1), std::invalid_argument);
}

TEST(Scenarios, CannedNamesAndValidation) {
  EXPECT_EQ(canned_scenario("strong-a").name, "strong-a");
  EXPECT_EQ(canned_scenario("random-weak", 3).network, random_weak_network(10, 64, 3));
  EXPECT_THROW(canned_scenario("strong-c"), std::invalid_argument);

  auto s = scenario_strong_interference_a();
  s.reference_equilibrium = PowerProfile(3, 2, 5.0);
  EXPECT_THROW(validate_scenario(s), std::invalid_argument);
}

TEST(Histogram, MassSumsToOne) {
  std::vector<double> v{-1.0, 0.0, 0.5, 0.5, 2.0};
  auto h = make_histogram(v, 4);
  ASSERT_EQ(h.edges.size(), 5u);
  EXPECT_EQ(h.edges.front(), -1.0);
  EXPECT_EQ(h.edges.back(), 2.0);
  EXPECT_NEAR(std::accumulate(h.mass.begin(), h.mass.end(), 0.0), 1.0, 1e-15);
  EXPECT_EQ(h.mass[3], 0.2);  // max lands in the last bin
  auto flat = make_histogram(std::vector<double>(5, 0.0), 3);
  EXPECT_NEAR(std::accumulate(flat.mass.begin(), flat.mass.end(), 0.0), 1.0, 1e-15);
}

BiasStudyOptions small_study() {
  BiasStudyOptions o;
  o.num_users = 3;
  o.num_channels = 6;
  o.samples_per_estimate = 50;
  o.repetitions = 12;
  o.seed = 7;
  o.bins = 10;
  return o;
}

TEST(BiasStudy, ZeroVarianceGivesZeroMeans) {
  auto o = small_study();
  o.ier_db = INFINITY;
  auto r = bias_study(o);
  for (double m : r.sample_means) EXPECT_EQ(m, 0.0);
}

TEST(BiasStudy, SingleSampleEqualsOneBiasDraw) {
  auto o = small_study();
  o.samples_per_estimate = 1;
  o.repetitions = 2;
  auto r = bias_study(o);
  // Recompute repetition 1 from the documented seeding scheme.
  const std::uint64_t rep_seed = derive_seed(o.seed, 1);
  auto net = random_weak_network(3, 6, derive_seed(rep_seed, 0), o.mask, o.budget);
  Rng rng(derive_seed(rep_seed, 1));
  PowerProfile p(3, 6);
  for (std::size_t i = 0; i < 3; ++i) {
    double total = 0.0;
    for (std::size_t k = 0; k < 6; ++k) total += (p(i, k) = rng.uniform());
    for (std::size_t k = 0; k < 6; ++k) p(i, k) = std::min(o.mask, o.budget * p(i, k) / total);
  }
  for (std::size_t i = 0; i < 3; ++i) {
    auto ipn = true_ipn(net, p, i);
    std::vector<double> eps(6);
    for (std::size_t k = 0; k < 6; ++k) {
      eps[k] = std::sqrt(variance_from_ier(ipn[k], o.ier_db)) * rng.normal();
    }
    auto noisy = noisy_best_response(net, p, i, eps).power;
    auto exact = best_response(net, p, i).power;
    for (std::size_t k = 0; k < 6; ++k) {
      EXPECT_NEAR(r.sample_means[18 + i * 6 + k], noisy[k] - exact[k], 1e-12);
    }
  }
}

TEST(BiasStudy, IndependentOfThreadCountAndSeeded) {
  auto o = small_study();
  o.threads = 1;
  auto a = bias_study(o);
  o.threads = 3;
  auto b = bias_study(o);
  EXPECT_EQ(a.sample_means, b.sample_means);
  EXPECT_EQ(a.histogram.mass, b.histogram.mass);
  o.seed = 8;
  EXPECT_NE(bias_study(o).sample_means, a.sample_means);
  EXPECT_NEAR(std::accumulate(a.histogram.mass.begin(), a.histogram.mass.end(), 0.0), 1.0,
              1e-12);
}

TEST(BiasStudy, SpreadShrinksWithMoreSamples) {
  auto o = small_study();
  o.samples_per_estimate = 10;
  const double coarse = bias_study(o).stddev;
  o.samples_per_estimate = 1000;
  const double fine = bias_study(o).stddev;
  EXPECT_LT(fine, coarse);
}

TEST(BiasStudy, HistogramSymmetricAboutZero) {
  BiasStudyOptions o;
  o.samples_per_estimate = 10000;
  o.repetitions = 20;
  o.seed = 21;
  auto r = bias_study(o);
  EXPECT_NEAR(std::accumulate(r.histogram.mass.begin(), r.histogram.mass.end(), 0.0), 1.0,
              1e-12);
  EXPECT_LT(std::abs(r.skewness), 0.1);
}

TEST(BiasStudy, RejectsZeroSamples) {
  auto o = small_study();
  o.samples_per_estimate = 0;
  EXPECT_THROW(bias_study(o), std::invalid_argument);
}

TEST(Lemma4, NoiseFreeHarmonicIsOneOverTPlusOne) {
  for (std::size_t steps : {1u, 10u, 1000u, 100000u}) {
    auto r = lemma4_recursion(StepSizeSchedule::harmonic(), 0.0, steps, 0, 1.0);
    ASSERT_EQ(r.trajectory.size(), steps + 1);
    const double expected = 1.0 / static_cast<double>(steps + 1);
    EXPECT_NEAR(r.trajectory.back(), expected, 1e-12 * expected);
    EXPECT_NEAR(r.final_abs, expected, 1e-12 * expected);
  }
}

TEST(Lemma4, ZeroStartZeroNoiseStaysZero) {
  auto r = lemma4_recursion(StepSizeSchedule::harmonic(), 0.0, 500, 0, 0.0);
  for (double w : r.trajectory) EXPECT_EQ(w, 0.0);
}

TEST(Lemma4, SeededAndShrinking) {
  auto a = lemma4_recursion(StepSizeSchedule::harmonic(), 1.0, 10000, 3);
  auto b = lemma4_recursion(StepSizeSchedule::harmonic(), 1.0, 10000, 3);
  EXPECT_EQ(a.trajectory, b.trajectory);
  EXPECT_LT(a.final_abs, 0.1);
  EXPECT_THROW(lemma4_recursion(StepSizeSchedule::constant(0.5), 1.0, 10, 0),
               std::invalid_argument);
}

}  // namespace
}  // namespace iwf
