// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "iwf/network.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace iwf {
namespace {

std::string at(std::size_t i, std::size_t k) {
  return "(" + std::to_string(i) + ", " + std::to_string(k) + ")";
}

void check_user(const NetworkModel& model, std::size_t i) {
  if (i >= model.num_users()) {
    throw std::out_of_range("user index " + std::to_string(i) + " out of range");
  }
}

void check_channel(const NetworkModel& model, std::size_t k) {
  if (k >= model.num_channels()) {
    throw std::out_of_range("channel index " + std::to_string(k) + " out of range");
  }
}

}  // namespace

NetworkModel::NetworkModel(std::size_t num_users, std::size_t num_channels,
                           std::vector<double> gain, Matrix noise_floor,
                           std::vector<double> power_budget, Matrix power_mask)
    : num_users_(num_users),
      num_channels_(num_channels),
      gain_(std::move(gain)),
      noise_floor_(std::move(noise_floor)),
      power_budget_(std::move(power_budget)),
      power_mask_(std::move(power_mask)) {
  const std::size_t n = num_users_;
  const std::size_t kk = num_channels_;
  if (n == 0 || kk == 0) {
    throw std::invalid_argument("network needs at least one user and one channel");
  }
  if (gain_.size() != n * n * kk) {
    throw std::invalid_argument("gain tensor must hold N*N*K values");
  }
  if (noise_floor_.rows() != n || noise_floor_.cols() != kk) {
    throw std::invalid_argument("noise floor must be N x K");
  }
  if (power_budget_.size() != n) {
    throw std::invalid_argument("power budget must hold N values");
  }
  if (power_mask_.rows() != n || power_mask_.cols() != kk) {
    throw std::invalid_argument("power mask must be N x K");
  }
  for (double g : gain_) {
    if (!std::isfinite(g) || g < 0.0) {
      throw std::invalid_argument("gains must be finite and nonnegative");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(power_budget_[i]) || power_budget_[i] <= 0.0) {
      throw std::invalid_argument("power budget of user " + std::to_string(i) +
                                  " must be positive and finite");
    }
    for (std::size_t k = 0; k < kk; ++k) {
      if (!(this->gain(i, i, k) > 0.0)) {
        throw std::invalid_argument("direct gain " + at(i, k) + " must be positive");
      }
      double nf = noise_floor_(i, k);
      if (!std::isfinite(nf) || nf <= 0.0) {
        throw std::invalid_argument("noise floor " + at(i, k) + " must be positive");
      }
      double m = power_mask_(i, k);
      if (std::isnan(m) || m <= 0.0) {
        throw std::invalid_argument("power mask " + at(i, k) +
                                    " must be positive or unbounded");
      }
    }
  }

  normalized_gain_.assign(gain_.size(), 0.0);
  normalized_noise_ = Matrix(n, kk);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < kk; ++k) {
      const double direct = this->gain(i, i, k);
      normalized_noise_(i, k) = noise_floor_(i, k) / direct;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        normalized_gain_[(j * n + i) * kk + k] = this->gain(j, i, k) / direct;
      }
    }
  }
}

bool NetworkModel::operator==(const NetworkModel& other) const {
  return num_users_ == other.num_users_ && num_channels_ == other.num_channels_ &&
         gain_ == other.gain_ && noise_floor_ == other.noise_floor_ &&
         power_budget_ == other.power_budget_ && power_mask_ == other.power_mask_;
}

PowerProfile::PowerProfile(Matrix values) : values_(std::move(values)) {}

PowerProfile::PowerProfile(std::size_t num_users, std::size_t num_channels, double fill)
    : values_(num_users, num_channels, fill) {}

void check_dimensions(const NetworkModel& model, const PowerProfile& profile) {
  if (profile.num_users() != model.num_users() ||
      profile.num_channels() != model.num_channels()) {
    throw std::invalid_argument(
        "profile is " + std::to_string(profile.num_users()) + "x" +
        std::to_string(profile.num_channels()) + ", network is " +
        std::to_string(model.num_users()) + "x" + std::to_string(model.num_channels()));
  }
}

namespace {

// Empty string when feasible, otherwise a description of the violation.
std::string feasibility_violation(const NetworkModel& model,
                                  const PowerProfile& profile, double tolerance) {
  if (profile.num_users() != model.num_users() ||
      profile.num_channels() != model.num_channels()) {
    return "dimension mismatch";
  }
  for (std::size_t i = 0; i < model.num_users(); ++i) {
    double total = 0.0;
    for (std::size_t k = 0; k < model.num_channels(); ++k) {
      double p = profile(i, k);
      if (!std::isfinite(p) || p < -tolerance) {
        return "power " + at(i, k) + " is negative or not finite";
      }
      if (p > model.power_mask(i, k) + tolerance) {
        return "power " + at(i, k) + " exceeds its mask";
      }
      total += p;
    }
    if (total > model.power_budget(i) + tolerance) {
      return "user " + std::to_string(i) + " exceeds its power budget";
    }
  }
  return {};
}

}  // namespace

bool is_feasible(const NetworkModel& model, const PowerProfile& profile,
                 double tolerance) {
  return feasibility_violation(model, profile, tolerance).empty();
}

void check_feasible(const NetworkModel& model, const PowerProfile& profile,
                    double tolerance) {
  auto why = feasibility_violation(model, profile, tolerance);
  if (!why.empty()) throw std::invalid_argument("infeasible profile: " + why);
}

double normalized_cross_gain(const NetworkModel& model, std::size_t j, std::size_t i,
                             std::size_t k) {
  check_user(model, j);
  check_user(model, i);
  check_channel(model, k);
  if (j == i) {
    throw std::invalid_argument("normalized_cross_gain: j == i is not a cross link");
  }
  return model.normalized_gain_unchecked(j, i, k);
}

void true_ipn_into(const NetworkModel& model, const PowerProfile& profile,
                   std::size_t i, std::span<double> out) {
  const std::size_t n = model.num_users();
  const std::size_t kk = model.num_channels();
  for (std::size_t k = 0; k < kk; ++k) out[k] = model.normalized_noise(i, k);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    auto pj = profile.user(j);
    for (std::size_t k = 0; k < kk; ++k) {
      out[k] += model.normalized_gain_unchecked(j, i, k) * pj[k];
    }
  }
}

std::vector<double> true_ipn(const NetworkModel& model, const PowerProfile& profile,
                             std::size_t i) {
  check_dimensions(model, profile);
  check_user(model, i);
  std::vector<double> out(model.num_channels());
  true_ipn_into(model, profile, i, out);
  return out;
}

double sinr(const NetworkModel& model, const PowerProfile& profile, std::size_t i,
            std::size_t k) {
  check_dimensions(model, profile);
  check_user(model, i);
  check_channel(model, k);
  double denom = model.noise_floor(i, k);
  for (std::size_t j = 0; j < model.num_users(); ++j) {
    if (j != i) denom += model.gain(j, i, k) * profile(j, k);
  }
  return model.gain(i, i, k) * profile(i, k) / denom;
}

double rate(const NetworkModel& model, const PowerProfile& profile, std::size_t i) {
  double total = 0.0;
  for (std::size_t k = 0; k < model.num_channels(); ++k) {
    total += std::log1p(sinr(model, profile, i, k));
  }
  return total;
}

}  // namespace iwf
