// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iwf/analysis.hpp"
#include "iwf/network.hpp"
#include "iwf/noise.hpp"

namespace iwf {

enum class ScheduleKind { kHarmonic, kPowerDecay, kConstant };

std::string_view to_string(ScheduleKind kind);
ScheduleKind parse_schedule_kind(std::string_view name);

/// Step sizes alpha_t of the averaged iteration.
///   harmonic:    1 / (t + 1)
///   power_decay: min(1, a / (t + b)^gamma), gamma in (0.5, 1]
///   constant:    lambda (relaxed iteration only)
struct StepSizeSchedule {
  ScheduleKind kind = ScheduleKind::kHarmonic;
  double gamma = 1.0;
  double a = 1.0;
  double b = 1.0;
  double lambda = 1.0;

  static StepSizeSchedule harmonic();
  static StepSizeSchedule power_decay(double a, double b, double gamma);
  static StepSizeSchedule constant(double lambda);

  double alpha(std::size_t t) const;
  void validate() const;

  bool operator==(const StepSizeSchedule&) const = default;
};

enum class AlgorithmKind { kIwf, kRiwf, kAiwf };

std::string_view to_string(AlgorithmKind kind);
AlgorithmKind parse_algorithm_kind(std::string_view name);

struct Algorithm {
  AlgorithmKind kind = AlgorithmKind::kIwf;
  double lambda = 1.0;
  StepSizeSchedule schedule;

  static Algorithm iwf();
  static Algorithm riwf(double lambda);
  static Algorithm aiwf(StepSizeSchedule schedule = StepSizeSchedule::harmonic());

  /// Short label used in file names and reports: "iwf", "riwf-0.4",
  /// "aiwf-harmonic", "aiwf-power-decay".
  std::string tag() const;
  void validate() const;

  bool operator==(const Algorithm&) const = default;
};

/// One synchronous water-filling step, exact when the error is zero.
PowerProfile iwf_step(const NetworkModel& model, const PowerProfile& profile,
                      const ErrorSample& error);

/// (1 - lambda) p + lambda Phi(p), 0 < lambda <= 1.
PowerProfile riwf_step(const NetworkModel& model, const PowerProfile& profile,
                       const ErrorSample& error, double lambda);

/// Averaged step: Phi(p) at t = 0, (1 - alpha_t) p + alpha_t Phi(p) after.
/// Rejects the constant schedule.
PowerProfile aiwf_step(const NetworkModel& model, const PowerProfile& profile,
                       const ErrorSample& error, std::size_t t,
                       const StepSizeSchedule& schedule);

/// min(budget / K, mask) on every channel.
PowerProfile default_start(const NetworkModel& model);

struct RunOptions {
  std::size_t max_iters = 5000;
  /// Detector tolerance on successive-iterate distances.
  double tol = 1e-5;
  /// Detector window; 0 picks max(2, max_iters / 5).
  std::size_t window = 0;
  /// Keep every m-th iterate; the last 50 are always kept.
  std::size_t decimation = 1;
  std::optional<PowerProfile> start;
  std::optional<PowerProfile> reference;
  bool keep_errors = false;
};

/// Record of a run. Stored iterates may be decimated; `iterations[s]` is the
/// time index of `iterates[s]`. `residuals` is never decimated:
/// residuals[t] = ||p^{t+1} - p^t|| in the block-maximum norm weighted by
/// `weight` (the certificate weight when contractive, else all-ones).
/// `water_levels[s]` are the levels of the operator output that produced
/// iterate s; for the start they are the exact best-response levels.
struct RunTrace {
  std::vector<std::size_t> iterations;
  std::vector<PowerProfile> iterates;
  std::vector<std::vector<double>> water_levels;
  std::vector<ErrorSample> errors_applied;
  std::vector<double> distance_to_reference;
  std::vector<double> residuals;
  std::vector<double> weight;
  ContractionCertificate certificate;
  Verdict verdict;
  bool converged = false;
  std::optional<std::size_t> convergence_iteration;
  std::string algorithm_tag;
  std::uint64_t seed = 0;
  StepSizeSchedule schedule;

  const PowerProfile& final_iterate() const { return iterates.back(); }
};

/// Runs `max_iters` steps of `algorithm` from the start profile with a fresh
/// error stream seeded by noise.seed, then classifies the residual sequence.
/// Throws std::invalid_argument for an infeasible start or max_iters == 0.
RunTrace run(const NetworkModel& model, const Algorithm& algorithm,
             const NoiseModel& noise, const RunOptions& options = {});

/// detect_convergence over the trace's residual sequence.
Verdict detect_convergence(const RunTrace& trace, std::size_t window, double tol);

/// Iterates the exact operator until the fixed-point residual drops below
/// `tol` or `max_iters` is reached; returns the last iterate.
PowerProfile solve_fixed_point(const NetworkModel& model, double tol = 1e-13,
                               std::size_t max_iters = 100000);

}  // namespace iwf
