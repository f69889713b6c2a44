// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "iwf/matrix.hpp"
#include "iwf/network.hpp"

namespace iwf {

/// N x N matrix of worst-case normalized cross gains,
/// entries(i, j) = max_k gain(j, i, k) / gain(i, i, k) for i != j, zero diagonal.
struct GainMatrix {
  Matrix entries;
};

/// Contraction data of the exact water-filling operator. When `contractive`,
/// the operator shrinks distances by at least `beta` in the block-maximum
/// norm weighted by `weight`. `weight` and `beta` are empty / zero otherwise.
struct ContractionCertificate {
  double spectral_radius = 0.0;
  std::vector<double> weight;
  double beta = 0.0;
  bool contractive = false;
};

GainMatrix build_gain_matrix(const NetworkModel& model);

/// Largest eigenvalue modulus of a nonnegative square matrix.
///
/// Power iteration on m + cI with c the largest row sum: the shift makes the
/// Perron root strictly dominant for irreducible m, including periodic
/// (cyclic) patterns. Seeded with the all-ones vector; relative tolerance
/// 1e-10 (checked over successive estimates), at most 1e5 iterations.
double spectral_radius(const Matrix& m);

/// w = (I - m)^-1 * 1 by partial-pivot elimination. Strictly positive with
/// m w = w - 1 < w. Throws std::domain_error when spectral_radius(m) >= 1.
std::vector<double> weight_vector(const GainMatrix& m);

/// max_i ||x_i||_2 / w_i over the rows x_i of `x`.
double weighted_block_max_norm(const Matrix& x, std::span<const double> w);

/// max_i (1 / w_i) sum_j |m(i, j)| w_j.
double weighted_max_matrix_norm(const Matrix& m, std::span<const double> w);

ContractionCertificate certify(const NetworkModel& model);

/// Weight used for distances in a run: the certificate weight when
/// contractive, all-ones otherwise.
std::vector<double> norm_weight(const ContractionCertificate& certificate,
                                std::size_t num_users);

/// ||Phi(p) - p|| in the weighted block-maximum norm.
double fixed_point_residual(const NetworkModel& model, const PowerProfile& profile,
                            std::span<const double> w);

/// Block-maximum distance between two profiles.
double profile_distance(const PowerProfile& a, const PowerProfile& b,
                        std::span<const double> w);

enum class VerdictKind { kConverged, kOscillating, kUndecided };

std::string_view to_string(VerdictKind kind);

struct Verdict {
  VerdictKind kind = VerdictKind::kUndecided;
  /// First iteration of the converged tail; meaningful for kConverged only.
  std::size_t iteration = 0;

  bool operator==(const Verdict&) const = default;
};

/// Classifies a run from its successive-iterate distances
/// (residuals[t] = ||p^{t+1} - p^t||).
///
/// converged_at(t): residuals stay below `tol` from t to the end, over at
/// least `window` entries (t is the earliest such start).
/// oscillating: over the final `window` entries the mean exceeds 10 * tol and
/// the least-squares slope of log(residual) is >= -1e-3 per iteration.
/// undecided otherwise. Throws std::invalid_argument if window < 2 or
/// window > residuals.size().
Verdict detect_convergence(std::span<const double> residuals, std::size_t window,
                           double tol);

}  // namespace iwf
