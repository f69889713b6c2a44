// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "iwf/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "iwf/random.hpp"
#include "iwf/waterfill.hpp"

namespace iwf {
namespace {

constexpr std::size_t kAlwaysKeptTail = 50;

// (1 - alpha) * current + alpha * target, in place on `target`.
void blend_into(const PowerProfile& current, double alpha, PowerProfile& target) {
  auto cur = current.values().data();
  auto tgt = target.values().data();
  for (std::size_t idx = 0; idx < tgt.size(); ++idx) {
    tgt[idx] = (1.0 - alpha) * cur[idx] + alpha * tgt[idx];
  }
}

const Matrix* error_matrix(const ErrorSample& error) {
  return error.epsilon.empty() ? nullptr : &error.epsilon;
}

void check_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in (0, 1]");
  }
}

// Step weight applied at iteration t, or 1 for the plain iteration.
double step_weight(const Algorithm& algorithm, std::size_t t) {
  switch (algorithm.kind) {
    case AlgorithmKind::kIwf: return 1.0;
    case AlgorithmKind::kRiwf: return algorithm.lambda;
    case AlgorithmKind::kAiwf: return t == 0 ? 1.0 : algorithm.schedule.alpha(t);
  }
  return 1.0;
}

}  // namespace

std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::kHarmonic: return "harmonic";
    case ScheduleKind::kPowerDecay: return "power-decay";
    case ScheduleKind::kConstant: return "constant";
  }
  return "harmonic";
}

ScheduleKind parse_schedule_kind(std::string_view name) {
  for (auto kind : {ScheduleKind::kHarmonic, ScheduleKind::kPowerDecay,
                    ScheduleKind::kConstant}) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown schedule '" + std::string(name) + "'");
}

StepSizeSchedule StepSizeSchedule::harmonic() { return {}; }

StepSizeSchedule StepSizeSchedule::power_decay(double a, double b, double gamma) {
  StepSizeSchedule s;
  s.kind = ScheduleKind::kPowerDecay;
  s.a = a;
  s.b = b;
  s.gamma = gamma;
  return s;
}

StepSizeSchedule StepSizeSchedule::constant(double lambda) {
  StepSizeSchedule s;
  s.kind = ScheduleKind::kConstant;
  s.lambda = lambda;
  return s;
}

double StepSizeSchedule::alpha(std::size_t t) const {
  switch (kind) {
    case ScheduleKind::kHarmonic:
      return 1.0 / (static_cast<double>(t) + 1.0);
    case ScheduleKind::kPowerDecay:
      if (t == 0) return 1.0;
      return std::min(1.0, a / std::pow(static_cast<double>(t) + b, gamma));
    case ScheduleKind::kConstant:
      return lambda;
  }
  return 1.0;
}

void StepSizeSchedule::validate() const {
  switch (kind) {
    case ScheduleKind::kHarmonic:
      return;
    case ScheduleKind::kPowerDecay:
      if (!(gamma > 0.5 && gamma <= 1.0)) {
        throw std::invalid_argument("power-decay gamma must lie in (0.5, 1]");
      }
      if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw std::invalid_argument("power-decay a and b must be positive");
      }
      return;
    case ScheduleKind::kConstant:
      check_lambda(lambda);
      return;
  }
}

std::string_view to_string(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::kIwf: return "iwf";
    case AlgorithmKind::kRiwf: return "riwf";
    case AlgorithmKind::kAiwf: return "aiwf";
  }
  return "iwf";
}

AlgorithmKind parse_algorithm_kind(std::string_view name) {
  for (auto kind : {AlgorithmKind::kIwf, AlgorithmKind::kRiwf, AlgorithmKind::kAiwf}) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

Algorithm Algorithm::iwf() { return {}; }

Algorithm Algorithm::riwf(double lambda) {
  Algorithm a;
  a.kind = AlgorithmKind::kRiwf;
  a.lambda = lambda;
  a.schedule = StepSizeSchedule::constant(lambda);
  return a;
}

Algorithm Algorithm::aiwf(StepSizeSchedule schedule) {
  Algorithm a;
  a.kind = AlgorithmKind::kAiwf;
  a.schedule = schedule;
  return a;
}

std::string Algorithm::tag() const {
  switch (kind) {
    case AlgorithmKind::kIwf:
      return "iwf";
    case AlgorithmKind::kRiwf: {
      char buf[48];
      std::snprintf(buf, sizeof buf, "riwf-%g", lambda);
      return buf;
    }
    case AlgorithmKind::kAiwf:
      return "aiwf-" + std::string(to_string(schedule.kind));
  }
  return "iwf";
}

void Algorithm::validate() const {
  switch (kind) {
    case AlgorithmKind::kIwf:
      return;
    case AlgorithmKind::kRiwf:
      check_lambda(lambda);
      return;
    case AlgorithmKind::kAiwf:
      if (schedule.kind == ScheduleKind::kConstant) {
        throw std::invalid_argument(
            "aiwf needs a diminishing schedule; constant steps belong to riwf");
      }
      schedule.validate();
      return;
  }
}

PowerProfile iwf_step(const NetworkModel& model, const PowerProfile& profile,
                      const ErrorSample& error) {
  return stacked_response(model, profile, error_matrix(error)).profile;
}

PowerProfile riwf_step(const NetworkModel& model, const PowerProfile& profile,
                       const ErrorSample& error, double lambda) {
  check_lambda(lambda);
  auto next = stacked_response(model, profile, error_matrix(error)).profile;
  if (lambda != 1.0) blend_into(profile, lambda, next);
  return next;
}

PowerProfile aiwf_step(const NetworkModel& model, const PowerProfile& profile,
                       const ErrorSample& error, std::size_t t,
                       const StepSizeSchedule& schedule) {
  Algorithm::aiwf(schedule).validate();
  auto next = stacked_response(model, profile, error_matrix(error)).profile;
  if (t > 0) blend_into(profile, schedule.alpha(t), next);
  return next;
}

PowerProfile default_start(const NetworkModel& model) {
  const std::size_t kk = model.num_channels();
  PowerProfile p(model.num_users(), kk);
  for (std::size_t i = 0; i < model.num_users(); ++i) {
    const double share = model.power_budget(i) / static_cast<double>(kk);
    for (std::size_t k = 0; k < kk; ++k) p(i, k) = std::min(share, model.power_mask(i, k));
  }
  return p;
}

RunTrace run(const NetworkModel& model, const Algorithm& algorithm,
             const NoiseModel& noise, const RunOptions& options) {
  if (options.max_iters == 0) throw std::invalid_argument("run: max_iters must be >= 1");
  if (options.decimation == 0) throw std::invalid_argument("run: decimation must be >= 1");
  algorithm.validate();
  noise.validate();

  PowerProfile current = options.start ? *options.start : default_start(model);
  check_feasible(model, current);
  if (options.reference) check_dimensions(model, *options.reference);

  RunTrace trace;
  trace.algorithm_tag = algorithm.tag();
  trace.seed = noise.seed;
  trace.schedule = algorithm.schedule;
  trace.certificate = certify(model);
  trace.weight = norm_weight(trace.certificate, model.num_users());
  trace.residuals.reserve(options.max_iters);

  const std::size_t total = options.max_iters;
  auto keep = [&](std::size_t t) {
    return t % options.decimation == 0 || t + kAlwaysKeptTail > total;
  };
  auto record = [&](std::size_t t, const PowerProfile& p, std::vector<double> levels) {
    if (!keep(t)) return;
    trace.iterations.push_back(t);
    trace.iterates.push_back(p);
    trace.water_levels.push_back(std::move(levels));
    if (options.reference) {
      trace.distance_to_reference.push_back(
          profile_distance(p, *options.reference, trace.weight));
    }
  };

  record(0, current, stacked_response(model, current).water_levels);

  Rng rng(noise.seed);
  for (std::size_t t = 0; t < total; ++t) {
    ErrorSample error = sample(noise, model, current, t, rng);
    StackedResponse response =
        stacked_response(model, current, noise.kind == NoiseKind::kNone ? nullptr
                                                                        : &error.epsilon);
    PowerProfile next = std::move(response.profile);
    const double weight = step_weight(algorithm, t);
    if (weight != 1.0) blend_into(current, weight, next);

    trace.residuals.push_back(profile_distance(next, current, trace.weight));
    if (options.keep_errors && keep(t + 1)) trace.errors_applied.push_back(std::move(error));
    current = std::move(next);
    record(t + 1, current, std::move(response.water_levels));
  }

  const std::size_t window =
      options.window != 0 ? options.window : std::max<std::size_t>(2, total / 5);
  if (window <= trace.residuals.size()) {
    trace.verdict = detect_convergence(trace.residuals, window, options.tol);
  }
  trace.converged = trace.verdict.kind == VerdictKind::kConverged;
  if (trace.converged) trace.convergence_iteration = trace.verdict.iteration;
  return trace;
}

Verdict detect_convergence(const RunTrace& trace, std::size_t window, double tol) {
  return detect_convergence(trace.residuals, window, tol);
}

PowerProfile solve_fixed_point(const NetworkModel& model, double tol,
                               std::size_t max_iters) {
  auto cert = certify(model);
  auto w = norm_weight(cert, model.num_users());
  PowerProfile p = default_start(model);
  for (std::size_t t = 0; t < max_iters; ++t) {
    PowerProfile next = stacked_operator(model, p);
    const double step = profile_distance(next, p, w);
    p = std::move(next);
    if (step < tol) break;
  }
  return p;
}

}  // namespace iwf
