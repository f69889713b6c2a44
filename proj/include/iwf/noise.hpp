// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "iwf/matrix.hpp"
#include "iwf/network.hpp"
#include "iwf/random.hpp"

namespace iwf {

enum class NoiseKind {
  kNone,
  kGaussianIer,
  kGaussianFixedVariance,
  kDiminishing,
  kSummable,
};

/// Config spelling of a noise kind ("none", "gaussian-ier", ...).
std::string_view to_string(NoiseKind kind);
/// Inverse of to_string; throws std::invalid_argument on unknown names.
NoiseKind parse_noise_kind(std::string_view name);

/// IPN estimation-error process.
///
/// gaussian_ier draws N(0, var) with var derived each iteration from the
/// current true IPN and `ier_db`. gaussian_fixed_variance uses `variance`
/// entrywise. diminishing and summable draw a uniformly random direction in
/// the stacked N*K space with Euclidean length scale / (t + 1)^decay_exponent,
/// so every per-user block norm stays under that envelope.
struct NoiseModel {
  NoiseKind kind = NoiseKind::kNone;
  double ier_db = 20.0;
  Matrix variance;
  double decay_exponent = 1.0;
  double scale = 1.0;
  std::uint64_t seed = 0;

  static NoiseModel none();
  static NoiseModel gaussian_ier(double ier_db, std::uint64_t seed);
  static NoiseModel gaussian_fixed_variance(Matrix variance, std::uint64_t seed);
  static NoiseModel diminishing(double scale, double decay_exponent, std::uint64_t seed);
  /// Default exponent 0.5: sum_t envelope_t / (t + 1) converges for any q > 0.
  static NoiseModel summable(double scale, std::uint64_t seed, double decay_exponent = 0.5);

  /// Throws std::invalid_argument when the parameters do not fit `kind`.
  void validate() const;

  bool operator==(const NoiseModel&) const = default;
};

struct ErrorSample {
  Matrix epsilon;
  std::size_t iteration = 0;
};

/// ipn_value * 10^(-ier_db / 10). Rejects nonpositive ipn_value.
double variance_from_ier(double ipn_value, double ier_db);

/// Envelope scale / (t + 1)^q of the deterministic-magnitude kinds.
double noise_envelope(const NoiseModel& model, std::size_t t);

/// Draws the error matrix for iteration `t` at the current `profile`.
ErrorSample sample(const NoiseModel& model, const NetworkModel& network,
                   const PowerProfile& profile, std::size_t t, Rng& rng);

}  // namespace iwf
