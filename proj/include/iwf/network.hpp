// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "iwf/matrix.hpp"

namespace iwf {

/// Mask value for a channel without a per-channel power cap.
inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// Absolute slack accepted on budget and mask constraints.
inline constexpr double kFeasibilityTolerance = 1e-9;

/// Static data of an N-user, K-channel interference game.
///
/// Gains are squared magnitudes. `gain(tx, rx, k)` is the gain from the
/// transmitter of user `tx` to the receiver of user `rx` on channel `k`;
/// the flat storage order is ((tx * N) + rx) * K + k. The direct-link
/// normalized quantities used by the water-filling operator are computed
/// once at construction.
class NetworkModel {
 public:
  NetworkModel(std::size_t num_users, std::size_t num_channels,
               std::vector<double> gain, Matrix noise_floor,
               std::vector<double> power_budget, Matrix power_mask);

  std::size_t num_users() const noexcept { return num_users_; }
  std::size_t num_channels() const noexcept { return num_channels_; }

  double gain(std::size_t tx, std::size_t rx, std::size_t k) const noexcept {
    return gain_[(tx * num_users_ + rx) * num_channels_ + k];
  }
  double noise_floor(std::size_t i, std::size_t k) const noexcept {
    return noise_floor_(i, k);
  }
  double power_budget(std::size_t i) const noexcept { return power_budget_[i]; }
  double power_mask(std::size_t i, std::size_t k) const noexcept {
    return power_mask_(i, k);
  }

  std::span<const double> gains() const noexcept { return gain_; }
  const Matrix& noise_floors() const noexcept { return noise_floor_; }
  std::span<const double> power_budgets() const noexcept { return power_budget_; }
  const Matrix& power_masks() const noexcept { return power_mask_; }
  std::span<const double> mask_row(std::size_t i) const noexcept {
    return power_mask_.row(i);
  }

  /// gain(j, i, k) / gain(i, i, k) without index checks; zero when j == i.
  double normalized_gain_unchecked(std::size_t j, std::size_t i,
                                   std::size_t k) const noexcept {
    return normalized_gain_[(j * num_users_ + i) * num_channels_ + k];
  }
  /// noise_floor(i, k) / gain(i, i, k).
  double normalized_noise(std::size_t i, std::size_t k) const noexcept {
    return normalized_noise_(i, k);
  }

  bool operator==(const NetworkModel& other) const;

 private:
  std::size_t num_users_;
  std::size_t num_channels_;
  std::vector<double> gain_;
  Matrix noise_floor_;
  std::vector<double> power_budget_;
  Matrix power_mask_;
  std::vector<double> normalized_gain_;
  Matrix normalized_noise_;
};

/// Stacked power allocation p, one row per user and one column per channel.
class PowerProfile {
 public:
  PowerProfile() = default;
  explicit PowerProfile(Matrix values);
  PowerProfile(std::size_t num_users, std::size_t num_channels, double fill = 0.0);

  std::size_t num_users() const noexcept { return values_.rows(); }
  std::size_t num_channels() const noexcept { return values_.cols(); }

  double& operator()(std::size_t i, std::size_t k) noexcept { return values_(i, k); }
  double operator()(std::size_t i, std::size_t k) const noexcept { return values_(i, k); }

  std::span<double> user(std::size_t i) noexcept { return values_.row(i); }
  std::span<const double> user(std::size_t i) const noexcept { return values_.row(i); }

  const Matrix& values() const noexcept { return values_; }
  Matrix& values() noexcept { return values_; }

  bool operator==(const PowerProfile&) const = default;

 private:
  Matrix values_;
};

/// Throws std::invalid_argument when the profile shape differs from the model.
void check_dimensions(const NetworkModel& model, const PowerProfile& profile);

/// True when every row lies in its user's feasible set, up to `tolerance`.
bool is_feasible(const NetworkModel& model, const PowerProfile& profile,
                 double tolerance = kFeasibilityTolerance);

/// Throws std::invalid_argument naming the first violated constraint.
void check_feasible(const NetworkModel& model, const PowerProfile& profile,
                    double tolerance = kFeasibilityTolerance);

/// |H_{j,i}(k)|^2 / |H_{i,i}(k)|^2. Rejects j == i and out-of-range indices.
double normalized_cross_gain(const NetworkModel& model, std::size_t j,
                             std::size_t i, std::size_t k);

/// Normalized interference plus noise seen by user `i` on every channel.
std::vector<double> true_ipn(const NetworkModel& model, const PowerProfile& profile,
                             std::size_t i);

/// Writes true_ipn into `out` (size K) without allocating.
void true_ipn_into(const NetworkModel& model, const PowerProfile& profile,
                   std::size_t i, std::span<double> out);

double sinr(const NetworkModel& model, const PowerProfile& profile, std::size_t i,
            std::size_t k);

/// Sum over channels of log(1 + SINR), natural log.
double rate(const NetworkModel& model, const PowerProfile& profile, std::size_t i);

}  // namespace iwf
