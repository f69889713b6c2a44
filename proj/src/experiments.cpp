// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "iwf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <utility>

#include "iwf/analysis.hpp"
#include "iwf/random.hpp"
#include "iwf/waterfill.hpp"

namespace iwf {
namespace {

constexpr double kTargetRadius = 0.9;
constexpr double kReferenceResidual = 1e-6;

// Builds a gain tensor from per-channel N x N matrices [tx][rx].
std::vector<double> gains_from_channel_matrices(
    const std::vector<std::vector<std::vector<double>>>& per_channel) {
  const std::size_t kk = per_channel.size();
  const std::size_t n = per_channel.front().size();
  std::vector<double> gain(n * n * kk);
  for (std::size_t k = 0; k < kk; ++k) {
    for (std::size_t tx = 0; tx < n; ++tx) {
      for (std::size_t rx = 0; rx < n; ++rx) {
        gain[(tx * n + rx) * kk + k] = per_channel[k][tx][rx];
      }
    }
  }
  return gain;
}

}  // namespace

RunOptions Scenario::run_options() const {
  RunOptions options;
  options.max_iters = max_iters;
  options.tol = tol;
  options.window = window;
  options.decimation = decimation;
  options.start = start;
  options.reference = reference_equilibrium;
  return options;
}

void validate_scenario(const Scenario& scenario) {
  if (scenario.max_iters == 0) throw std::invalid_argument("max_iters must be >= 1");
  if (scenario.decimation == 0) throw std::invalid_argument("decimation must be >= 1");
  if (!(scenario.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (scenario.window == 1) throw std::invalid_argument("window must be 0 (auto) or >= 2");
  if (scenario.window > scenario.max_iters) {
    throw std::invalid_argument("window longer than max_iters");
  }
  scenario.noise.validate();
  if (scenario.noise.kind == NoiseKind::kGaussianFixedVariance &&
      (scenario.noise.variance.rows() != scenario.network.num_users() ||
       scenario.noise.variance.cols() != scenario.network.num_channels())) {
    throw std::invalid_argument("noise variance must be N x K");
  }
  for (const auto& algorithm : scenario.algorithms) algorithm.validate();
  if (scenario.start) check_feasible(scenario.network, *scenario.start);
  if (scenario.reference_equilibrium) {
    const auto& ref = *scenario.reference_equilibrium;
    check_feasible(scenario.network, ref);
    auto w = norm_weight(certify(scenario.network), scenario.network.num_users());
    const double residual = fixed_point_residual(scenario.network, ref, w);
    if (!(residual < kReferenceResidual)) {
      throw std::invalid_argument("reference equilibrium is not a fixed point (residual " +
                                  std::to_string(residual) + ")");
    }
  }
}

Scenario scenario_strong_interference_a(double noise_power) {
  const std::vector<std::vector<double>> h = {{1, 0, 2}, {2, 1, 0}, {0, 2, 1}};
  const std::size_t n = 3;
  const std::size_t kk = 2;
  const double budget = 10.0;
  Matrix noise(n, kk);
  for (std::size_t i = 0; i < n; ++i) {
    noise(i, 0) = noise_power;
    noise(i, 1) = noise_power + budget;
  }
  NetworkModel network(n, kk, gains_from_channel_matrices({h, h}), std::move(noise),
                       std::vector<double>(n, budget), Matrix(n, kk, kUnbounded));

  PowerProfile reference(n, kk);
  for (std::size_t i = 0; i < n; ++i) {
    reference(i, 0) = 2.0 * budget / 3.0;
    reference(i, 1) = budget / 3.0;
  }
  Scenario s{.name = "strong-a",
             .network = std::move(network),
             .source = {},
             .noise = NoiseModel::none(),
             .algorithms = {Algorithm::iwf(), Algorithm::aiwf()},
             .start = std::nullopt,
             .reference_equilibrium = std::move(reference)};
  validate_scenario(s);
  return s;
}

Scenario scenario_strong_interference_b(double noise_power) {
  const std::vector<std::vector<double>> h1 = {{1, 2, 4}, {4, 1, 2}, {2, 4, 1}};
  const std::vector<std::vector<double>> h2 = {{2, 3, 5}, {3, 2, 5}, {5, 3, 2}};
  const std::size_t n = 3;
  const std::size_t kk = 2;
  NetworkModel network(n, kk, gains_from_channel_matrices({h1, h2}),
                       Matrix(n, kk, noise_power), std::vector<double>(n, 10.0),
                       Matrix(n, kk, kUnbounded));
  Scenario s{.name = "strong-b",
             .network = std::move(network),
             .source = {},
             .noise = NoiseModel::none(),
             .algorithms = {Algorithm::iwf(), Algorithm::riwf(0.4), Algorithm::riwf(0.5),
                            Algorithm::riwf(0.7), Algorithm::riwf(0.9), Algorithm::aiwf()},
             .start = std::nullopt,
             .reference_equilibrium = std::nullopt};
  validate_scenario(s);
  return s;
}

NetworkModel random_weak_network(std::size_t num_users, std::size_t num_channels,
                                 std::uint64_t seed, double mask, double budget) {
  if (num_users == 0 || num_channels == 0) {
    throw std::invalid_argument("random_weak_network: sizes must be positive");
  }
  const std::size_t n = num_users;
  const std::size_t kk = num_channels;
  Rng rng(seed);
  std::vector<double> gain(n * n * kk);
  for (std::size_t tx = 0; tx < n; ++tx) {
    for (std::size_t rx = 0; rx < n; ++rx) {
      for (std::size_t k = 0; k < kk; ++k) {
        gain[(tx * n + rx) * kk + k] =
            tx == rx ? rng.uniform(0.5, 1.5) : rng.uniform(0.0, 0.5);
      }
    }
  }
  Matrix noise(n, kk);
  for (double& v : noise.data()) v = rng.uniform(0.001, 0.01);

  auto build = [&](std::vector<double> g) {
    return NetworkModel(n, kk, std::move(g), noise, std::vector<double>(n, budget),
                        Matrix(n, kk, mask));
  };
  NetworkModel draft = build(gain);
  const double radius = spectral_radius(build_gain_matrix(draft).entries);
  if (radius <= kTargetRadius) return draft;

  const double factor = kTargetRadius / radius * (1.0 - 1e-12);
  for (std::size_t tx = 0; tx < n; ++tx) {
    for (std::size_t rx = 0; rx < n; ++rx) {
      if (tx == rx) continue;
      for (std::size_t k = 0; k < kk; ++k) gain[(tx * n + rx) * kk + k] *= factor;
    }
  }
  return build(std::move(gain));
}

Scenario scenario_random_weak(std::uint64_t seed) {
  NetworkModel network = random_weak_network(10, 64, seed);
  PowerProfile reference = solve_fixed_point(network);
  Scenario s{.name = "random-weak",
             .network = std::move(network),
             .source = {NetworkSource::Kind::kRandomWeak, seed, kUnbounded},
             .noise = NoiseModel::gaussian_ier(20.0, seed),
             .algorithms = {Algorithm::iwf(), Algorithm::riwf(0.5), Algorithm::aiwf()},
             .start = std::nullopt,
             .reference_equilibrium = std::move(reference),
             .reference_is_fixed_point = true,
             .decimation = 50};
  validate_scenario(s);
  return s;
}

Scenario canned_scenario(const std::string& name, std::uint64_t seed) {
  if (name == "strong-a") return scenario_strong_interference_a();
  if (name == "strong-b") return scenario_strong_interference_b();
  if (name == "random-weak") return scenario_random_weak(seed);
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

Histogram make_histogram(const std::vector<double>& values, std::size_t bins) {
  if (values.empty()) throw std::invalid_argument("histogram of no values");
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  auto [min_it, max_it] = std::minmax_element(values.begin(), values.end());
  double lo = *min_it;
  double hi = *max_it;
  if (hi <= lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) {
    h.edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
  }
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
    ++counts[std::min(b, bins - 1)];
  }
  h.mass.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    h.mass[b] = static_cast<double>(counts[b]) / static_cast<double>(values.size());
  }
  return h;
}

namespace {

// M_i(k) for one repetition, written to `out` (N * K entries).
void bias_repetition(const BiasStudyOptions& opt, std::size_t rep, std::span<double> out) {
  const std::size_t n = opt.num_users;
  const std::size_t kk = opt.num_channels;
  const std::uint64_t rep_seed = derive_seed(opt.seed, rep);
  NetworkModel network =
      random_weak_network(n, kk, derive_seed(rep_seed, 0), opt.mask, opt.budget);
  Rng rng(derive_seed(rep_seed, 1));

  PowerProfile profile(n, kk);
  for (std::size_t i = 0; i < n; ++i) {
    auto row = profile.user(i);
    double total = 0.0;
    for (double& u : row) {
      u = rng.uniform();
      total += u;
    }
    for (std::size_t k = 0; k < kk; ++k) {
      row[k] = std::min(network.power_mask(i, k), opt.budget * row[k] / total);
    }
  }

  const double ratio = std::pow(10.0, -opt.ier_db / 10.0);
  std::vector<double> ipn(kk), stddev(kk), exact(kk), noisy_ipn(kk), noisy(kk), acc(kk);
  for (std::size_t i = 0; i < n; ++i) {
    true_ipn_into(network, profile, i, ipn);
    for (std::size_t k = 0; k < kk; ++k) stddev[k] = std::sqrt(ipn[k] * ratio);
    const double budget = network.power_budget(i);
    auto mask = network.mask_row(i);
    water_level_solve_into(ipn, budget, mask, exact);
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t l = 0; l < opt.samples_per_estimate; ++l) {
      for (std::size_t k = 0; k < kk; ++k) noisy_ipn[k] = ipn[k] + stddev[k] * rng.normal();
      water_level_solve_into(noisy_ipn, budget, mask, noisy);
      for (std::size_t k = 0; k < kk; ++k) acc[k] += noisy[k] - exact[k];
    }
    for (std::size_t k = 0; k < kk; ++k) {
      out[i * kk + k] = acc[k] / static_cast<double>(opt.samples_per_estimate);
    }
  }
}

}  // namespace

BiasStudyResult bias_study(const BiasStudyOptions& options) {
  if (options.samples_per_estimate == 0) {
    throw std::invalid_argument("bias_study: L must be >= 1");
  }
  if (options.repetitions == 0) throw std::invalid_argument("bias_study: repetitions must be >= 1");
  const std::size_t block = options.num_users * options.num_channels;
  BiasStudyResult result;
  result.samples_per_estimate = options.samples_per_estimate;
  result.repetitions = options.repetitions;
  result.sample_means.assign(block * options.repetitions, 0.0);

  unsigned workers = options.threads != 0 ? options.threads
                                          : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, options.repetitions));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t rep = next++; rep < options.repetitions; rep = next++) {
      bias_repetition(options, rep,
                      std::span<double>(result.sample_means).subspan(rep * block, block));
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  const auto& m = result.sample_means;
  const double count = static_cast<double>(m.size());
  double mean = 0.0;
  for (double v : m) mean += v;
  mean /= count;
  double m2 = 0.0;
  double m3 = 0.0;
  for (double v : m) {
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= count;
  m3 /= count;
  result.mean = mean;
  result.stddev = std::sqrt(m2);
  result.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  result.histogram = make_histogram(m, options.bins);
  return result;
}

Lemma4Result lemma4_recursion(const StepSizeSchedule& schedule, double variance,
                              std::size_t steps, std::uint64_t seed, double initial) {
  Algorithm::aiwf(schedule).validate();
  if (!(variance >= 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("lemma4_recursion: variance must be finite and >= 0");
  }
  Lemma4Result result;
  result.trajectory.resize(steps + 1);
  result.trajectory[0] = initial;
  Rng rng(seed);
  const double sd = std::sqrt(variance);
  double w = initial;
  for (std::size_t t = 1; t <= steps; ++t) {
    const double alpha = schedule.alpha(t);
    const double xi = variance > 0.0 ? sd * rng.normal() : 0.0;
    w = (1.0 - alpha) * w + alpha * xi;
    result.trajectory[t] = w;
  }
  result.final_abs = std::abs(w);
  return result;
}

}  // namespace iwf
