// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "iwf/algorithms.hpp"
#include "iwf/network.hpp"
#include "iwf/noise.hpp"

namespace iwf {

/// Where a scenario's network came from; generated networks serialize as
/// their generator call instead of the full gain tensor.
struct NetworkSource {
  enum class Kind { kInline, kRandomWeak };
  Kind kind = Kind::kInline;
  std::uint64_t seed = 0;
  double mask = kUnbounded;

  bool operator==(const NetworkSource&) const = default;
};

struct Scenario {
  std::string name;
  NetworkModel network;
  NetworkSource source;
  NoiseModel noise;
  std::vector<Algorithm> algorithms;
  std::optional<PowerProfile> start;
  std::optional<PowerProfile> reference_equilibrium;
  /// Reference recomputed from the network rather than stored.
  bool reference_is_fixed_point = false;
  std::size_t max_iters = 5000;
  double tol = 1e-5;
  std::size_t window = 0;
  std::size_t decimation = 1;

  RunOptions run_options() const;
  bool operator==(const Scenario&) const = default;
};

/// Throws std::invalid_argument when the algorithms, noise, start or
/// reference are inconsistent with the network, or when the reference is not
/// a fixed point of the exact operator (residual >= 1e-6).
void validate_scenario(const Scenario& scenario);

/// Three users, two channels, every H(k) = [[1,0,2],[2,1,0],[0,2,1]].
/// Channel-1 noise `noise_power`, channel-2 noise `noise_power` + 10, budget
/// 10, no masks. Reference: every user at (20/3, 10/3).
Scenario scenario_strong_interference_a(double noise_power = 1.0);

/// Three users, two channels, H(1) = [[1,2,4],[4,1,2],[2,4,1]],
/// H(2) = [[2,3,5],[3,2,5],[5,3,2]], equal noise on both channels, budget 10.
/// No reference; runs a relaxed-step sweep.
Scenario scenario_strong_interference_b(double noise_power = 1.0);

/// Random network with spectral radius of the gain matrix <= 0.9.
///
/// Direct gains ~ U(0.5, 1.5); cross gains ~ U(0, 0.5), then all cross gains
/// are multiplied by min(1, 0.9 / rho) so the certificate is contractive.
/// Noise floors ~ U(0.001, 0.01), which puts the per-channel SNR of a uniform
/// allocation around 12-22 dB and leaves interference as the dominant IPN
/// term. Draw order: gains by (tx, rx, channel), then noise floors by
/// (user, channel), all from one Rng seeded with `seed`.
NetworkModel random_weak_network(std::size_t num_users, std::size_t num_channels,
                                 std::uint64_t seed, double mask = kUnbounded,
                                 double budget = 10.0);

/// 10 users, 64 channels, IER 20 dB noise, the three algorithm families and
/// the noise-free fixed point as reference. Traces keep every 50th iterate.
Scenario scenario_random_weak(std::uint64_t seed = 1);

/// Canned scenario by CLI name ("strong-a", "strong-b", "random-weak").
/// Throws std::invalid_argument for unknown names.
Scenario canned_scenario(const std::string& name, std::uint64_t seed = 1);

struct Histogram {
  std::vector<double> edges;
  std::vector<double> mass;
};

/// Equal-width bins over [min, max] of `values`; masses sum to 1.
Histogram make_histogram(const std::vector<double>& values, std::size_t bins);

struct BiasStudyOptions {
  std::size_t num_users = 10;
  std::size_t num_channels = 32;
  double ier_db = 10.0;
  std::size_t samples_per_estimate = 1000;
  std::size_t repetitions = 1000;
  std::uint64_t seed = 0;
  double budget = 10.0;
  double mask = 3.0;
  std::size_t bins = 50;
  /// Worker threads; 0 uses the hardware concurrency.
  unsigned threads = 0;
};

struct BiasStudyResult {
  /// M_i(k) per repetition, ordered (repetition, user, channel).
  std::vector<double> sample_means;
  Histogram histogram;
  std::size_t samples_per_estimate = 0;
  std::size_t repetitions = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double skewness = 0.0;
};

/// Conditional-bias experiment of the noisy water-filling response.
///
/// Each repetition draws a random weak network (seeded per repetition) and a
/// random feasible profile (p_i = min(mask, budget * u / sum u), u uniform),
/// then averages L bias samples noisy-minus-exact response with
/// epsilon ~ N(0, IPN * 10^(-IER/10)). Repetitions run in parallel; results
/// do not depend on the thread count.
BiasStudyResult bias_study(const BiasStudyOptions& options);

struct Lemma4Result {
  std::vector<double> trajectory;
  double final_abs = 0.0;
};

/// w^t = (1 - alpha_t) w^{t-1} + alpha_t xi^t for t = 1..T with
/// xi^t ~ N(0, variance) i.i.d.; trajectory holds w^0..w^T.
Lemma4Result lemma4_recursion(const StepSizeSchedule& schedule, double variance,
                              std::size_t steps, std::uint64_t seed,
                              double initial = 1.0);

}  // namespace iwf
