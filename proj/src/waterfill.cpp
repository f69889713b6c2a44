// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "iwf/waterfill.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace iwf {
namespace {

constexpr double kBudgetResidual = 1e-12;
constexpr int kMaxHalvings = 200;

double clamp_power(double level, double ipn, double mask) {
  double x = level - ipn;
  if (x <= 0.0) return 0.0;
  return x < mask ? x : mask;
}

void validate(std::span<const double> ipn, double budget, std::span<const double> mask) {
  if (ipn.empty()) throw std::invalid_argument("water_level_solve: empty ipn vector");
  if (mask.size() != ipn.size()) {
    throw std::invalid_argument("water_level_solve: mask and ipn sizes differ");
  }
  if (!std::isfinite(budget) || budget <= 0.0) {
    throw std::invalid_argument("water_level_solve: budget must be positive and finite");
  }
  for (std::size_t k = 0; k < ipn.size(); ++k) {
    if (!std::isfinite(ipn[k])) {
      throw std::invalid_argument("water_level_solve: ipn entry " + std::to_string(k) +
                                  " is not finite");
    }
    if (std::isnan(mask[k]) || mask[k] <= 0.0) {
      throw std::invalid_argument("water_level_solve: mask entry " + std::to_string(k) +
                                  " must be positive");
    }
  }
}

// Bisection on the level with Newton steps. fill(level) is piecewise linear
// and nondecreasing, so once the active set is right a Newton step lands on
// the root; a plain halving is taken whenever the Newton point leaves the
// bracket and on every third step.
double solve_level(std::span<const double> ipn, double budget,
                   std::span<const double> mask) {
  const std::size_t kk = ipn.size();
  auto [min_it, max_it] = std::minmax_element(ipn.begin(), ipn.end());
  double lo = *min_it;
  double hi = *max_it + budget;
  double level = lo + 0.5 * (hi - lo);

  for (int iter = 0; iter < kMaxHalvings; ++iter) {
    double fill = 0.0;
    std::size_t free_channels = 0;
    for (std::size_t k = 0; k < kk; ++k) {
      const double x = level - ipn[k];
      if (x >= mask[k]) {
        fill += mask[k];
      } else if (x > 0.0) {
        fill += x;
        ++free_channels;
      }
    }
    if (std::abs(fill - budget) <= kBudgetResidual) return level;
    if (fill > budget) {
      hi = level;
    } else {
      lo = level;
    }
    double next = lo + 0.5 * (hi - lo);
    if (free_channels > 0 && iter % 3 != 2) {
      const double newton = level + (budget - fill) / static_cast<double>(free_channels);
      if (newton > lo && newton < hi) next = newton;
    }
    if (next <= lo || next >= hi) return next;
    level = next;
  }
  return level;
}

}  // namespace

WaterLevel water_level_solve_into(std::span<const double> ipn, double budget,
                                  std::span<const double> mask, std::span<double> power) {
  validate(ipn, budget, mask);
  const std::size_t kk = ipn.size();

  bool all_masked = true;
  double mask_total = 0.0;
  for (double m : mask) {
    if (std::isinf(m)) {
      all_masked = false;
      break;
    }
    mask_total += m;
  }
  if (all_masked && mask_total <= budget) {
    double level = ipn[0] + mask[0];
    for (std::size_t k = 0; k < kk; ++k) {
      level = std::max(level, ipn[k] + mask[k]);
      power[k] = mask[k];
    }
    return {level, true};
  }

  const double level = solve_level(ipn, budget, mask);
  for (std::size_t k = 0; k < kk; ++k) power[k] = clamp_power(level, ipn[k], mask[k]);
  return {level, false};
}

WaterFillResult water_level_solve(std::span<const double> ipn, double budget,
                                  std::span<const double> mask) {
  WaterFillResult result;
  result.power.assign(ipn.size(), 0.0);
  auto wl = water_level_solve_into(ipn, budget, mask, result.power);
  result.water_level = wl.level;
  result.saturated = wl.saturated;
  return result;
}

WaterFillResult best_response(const NetworkModel& model, const PowerProfile& profile,
                              std::size_t i) {
  auto ipn = true_ipn(model, profile, i);
  return water_level_solve(ipn, model.power_budget(i), model.mask_row(i));
}

WaterFillResult noisy_best_response(const NetworkModel& model,
                                    const PowerProfile& profile, std::size_t i,
                                    std::span<const double> epsilon_i) {
  auto ipn = true_ipn(model, profile, i);
  if (epsilon_i.size() != ipn.size()) {
    throw std::invalid_argument("noisy_best_response: epsilon has wrong length");
  }
  for (std::size_t k = 0; k < ipn.size(); ++k) ipn[k] += epsilon_i[k];
  return water_level_solve(ipn, model.power_budget(i), model.mask_row(i));
}

StackedResponse stacked_response(const NetworkModel& model, const PowerProfile& profile,
                                 const Matrix* epsilon) {
  check_dimensions(model, profile);
  const std::size_t n = model.num_users();
  const std::size_t kk = model.num_channels();
  if (epsilon != nullptr && (epsilon->rows() != n || epsilon->cols() != kk)) {
    throw std::invalid_argument("stacked_operator: epsilon must be N x K");
  }
  StackedResponse out{PowerProfile(n, kk), std::vector<double>(n)};
  std::vector<double> ipn(kk);
  for (std::size_t i = 0; i < n; ++i) {
    true_ipn_into(model, profile, i, ipn);
    if (epsilon != nullptr) {
      auto e = epsilon->row(i);
      for (std::size_t k = 0; k < kk; ++k) ipn[k] += e[k];
    }
    out.water_levels[i] = water_level_solve_into(ipn, model.power_budget(i),
                                                 model.mask_row(i), out.profile.user(i))
                              .level;
  }
  return out;
}

PowerProfile stacked_operator(const NetworkModel& model, const PowerProfile& profile) {
  return stacked_response(model, profile, nullptr).profile;
}

PowerProfile stacked_operator(const NetworkModel& model, const PowerProfile& profile,
                              const Matrix& epsilon) {
  return stacked_response(model, profile, &epsilon).profile;
}

}  // namespace iwf
