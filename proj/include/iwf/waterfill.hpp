// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "iwf/network.hpp"

namespace iwf {

/// Best response of one user: power(k) = clamp(water_level - ipn(k), 0, mask(k)).
struct WaterFillResult {
  std::vector<double> power;
  double water_level = 0.0;
  /// Masks cap the total below (or exactly at) the budget; power == mask.
  bool saturated = false;
};

/// Level and saturation flag of an in-place solve.
struct WaterLevel {
  double level = 0.0;
  bool saturated = false;
};

/// Finds the water level that spends `budget` against `ipn` under per-channel
/// caps `mask` (kUnbounded allowed). Entries of `ipn` may be negative.
///
/// The fill map level -> sum_k clamp(level - ipn(k), 0, mask(k)) is continuous,
/// nondecreasing and piecewise linear. The level is bracketed in
/// [min ipn, max ipn + budget] and bisected; as soon as the bracket contains
/// no breakpoint the map is linear on it and the level is solved for directly.
/// Stops on a budget residual of 1e-12 or after 200 halvings.
WaterFillResult water_level_solve(std::span<const double> ipn, double budget,
                                  std::span<const double> mask);

/// Allocation-free variant; writes the powers into `power` (size K).
WaterLevel water_level_solve_into(std::span<const double> ipn, double budget,
                                  std::span<const double> mask, std::span<double> power);

/// Exact water-filling response of user `i` to the other users' powers.
WaterFillResult best_response(const NetworkModel& model, const PowerProfile& profile,
                              std::size_t i);

/// Response computed from the perturbed estimate ipn + epsilon_i. The water
/// level is re-solved on the perturbed values.
WaterFillResult noisy_best_response(const NetworkModel& model,
                                    const PowerProfile& profile, std::size_t i,
                                    std::span<const double> epsilon_i);

/// All users' responses to the same input profile, with their water levels.
struct StackedResponse {
  PowerProfile profile;
  std::vector<double> water_levels;
};

/// Synchronous (Jacobi) evaluation of every user's response. `epsilon` is an
/// N x K estimation-error matrix, or nullptr for the exact operator.
StackedResponse stacked_response(const NetworkModel& model, const PowerProfile& profile,
                                 const Matrix* epsilon = nullptr);

/// The exact water-filling operator applied to `profile`.
PowerProfile stacked_operator(const NetworkModel& model, const PowerProfile& profile);

/// The noisy water-filling operator applied to `profile`.
PowerProfile stacked_operator(const NetworkModel& model, const PowerProfile& profile,
                              const Matrix& epsilon);

}  // namespace iwf
