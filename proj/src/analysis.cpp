// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "iwf/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "iwf/waterfill.hpp"

namespace iwf {
namespace {

constexpr double kRadiusTolerance = 1e-10;
constexpr int kRadiusMaxIterations = 100000;
constexpr double kOscillationSlope = -1e-3;

void check_weight(std::span<const double> w, std::size_t expected) {
  if (w.size() != expected) {
    throw std::invalid_argument("weight length " + std::to_string(w.size()) +
                                " does not match " + std::to_string(expected) + " blocks");
  }
  for (double wi : w) {
    if (!(wi > 0.0)) throw std::invalid_argument("weights must be positive");
  }
}

// Solves a x = b in place by Gaussian elimination with partial pivoting.
std::vector<double> solve_linear(Matrix a, std::vector<double> b) {
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    if (a(pivot, col) == 0.0) throw std::domain_error("singular linear system");
    if (pivot != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(pivot, c));
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double acc = b[r];
    for (std::size_t c = r + 1; c < n; ++c) acc -= a(r, c) * x[c];
    x[r] = acc / a(r, r);
  }
  return x;
}

}  // namespace

GainMatrix build_gain_matrix(const NetworkModel& model) {
  const std::size_t n = model.num_users();
  GainMatrix out{Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      double worst = 0.0;
      for (std::size_t k = 0; k < model.num_channels(); ++k) {
        worst = std::max(worst, model.normalized_gain_unchecked(j, i, k));
      }
      out.entries(i, j) = worst;
    }
  }
  return out;
}

double spectral_radius(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("spectral_radius: non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 0.0;
  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = m(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument("spectral_radius: entries must be finite and nonnegative");
      }
      row_sum += v;
    }
    shift = std::max(shift, row_sum);
  }
  if (shift == 0.0) return 0.0;

  // Power iteration on m + shift*I. For positive x the ratios (Mx)_i / x_i
  // bracket the Perron root; stop once the bracket is tight. Reducible
  // matrices may never close it, then the growth factor is returned.
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  std::vector<double> y(n);
  double estimate = shift;
  for (int iter = 0; iter < kRadiusMaxIterations; ++iter) {
    double total = 0.0;
    double lower = std::numeric_limits<double>::infinity();
    double upper = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = shift * x[i];
      for (std::size_t j = 0; j < n; ++j) acc += m(i, j) * x[j];
      y[i] = acc;
      total += acc;
      lower = std::min(lower, acc / x[i]);
      upper = std::max(upper, acc / x[i]);
    }
    // x is nonnegative with unit sum, so `total` is the growth factor.
    estimate = total - shift;
    if (upper - lower <= kRadiusTolerance * std::max(upper - shift, 1e-300)) {
      estimate = 0.5 * (lower + upper) - shift;
      break;
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / total;
  }
  return std::max(estimate, 0.0);
}

std::vector<double> weight_vector(const GainMatrix& m) {
  const Matrix& g = m.entries;
  const double radius = spectral_radius(g);
  if (!(radius < 1.0)) {
    throw std::domain_error("weight_vector: spectral radius " + std::to_string(radius) +
                            " >= 1, no contraction certificate");
  }
  const std::size_t n = g.rows();
  Matrix a = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) -= g(i, j);
  }
  auto w = solve_linear(std::move(a), std::vector<double>(n, 1.0));
  for (double wi : w) {
    if (!(wi > 0.0)) throw std::domain_error("weight_vector: nonpositive weight");
  }
  return w;
}

double weighted_block_max_norm(const Matrix& x, std::span<const double> w) {
  check_weight(w, x.rows());
  double best = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double sq = 0.0;
    for (double v : x.row(i)) sq += v * v;
    best = std::max(best, std::sqrt(sq) / w[i]);
  }
  return best;
}

double weighted_max_matrix_norm(const Matrix& m, std::span<const double> w) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix norm: non-square matrix");
  check_weight(w, m.rows());
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += std::abs(m(i, j)) * w[j];
    best = std::max(best, acc / w[i]);
  }
  return best;
}

ContractionCertificate certify(const NetworkModel& model) {
  auto gain = build_gain_matrix(model);
  ContractionCertificate cert;
  cert.spectral_radius = spectral_radius(gain.entries);
  cert.contractive = cert.spectral_radius < 1.0;
  if (cert.contractive) {
    cert.weight = weight_vector(gain);
    cert.beta = weighted_max_matrix_norm(gain.entries, cert.weight);
  }
  return cert;
}

std::vector<double> norm_weight(const ContractionCertificate& certificate,
                                std::size_t num_users) {
  if (certificate.contractive) return certificate.weight;
  return std::vector<double>(num_users, 1.0);
}

double profile_distance(const PowerProfile& a, const PowerProfile& b,
                        std::span<const double> w) {
  if (a.num_users() != b.num_users() || a.num_channels() != b.num_channels()) {
    throw std::invalid_argument("profile_distance: shapes differ");
  }
  check_weight(w, a.num_users());
  double best = 0.0;
  for (std::size_t i = 0; i < a.num_users(); ++i) {
    double sq = 0.0;
    auto ra = a.user(i);
    auto rb = b.user(i);
    for (std::size_t k = 0; k < ra.size(); ++k) {
      const double d = ra[k] - rb[k];
      sq += d * d;
    }
    best = std::max(best, std::sqrt(sq) / w[i]);
  }
  return best;
}

double fixed_point_residual(const NetworkModel& model, const PowerProfile& profile,
                            std::span<const double> w) {
  return profile_distance(stacked_operator(model, profile), profile, w);
}

std::string_view to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::kConverged: return "converged";
    case VerdictKind::kOscillating: return "oscillating";
    case VerdictKind::kUndecided: return "undecided";
  }
  return "undecided";
}

Verdict detect_convergence(std::span<const double> residuals, std::size_t window,
                           double tol) {
  if (window < 2) throw std::invalid_argument("detect_convergence: window must be >= 2");
  if (window > residuals.size()) {
    throw std::invalid_argument("detect_convergence: window " + std::to_string(window) +
                                " longer than trace of " +
                                std::to_string(residuals.size()) + " residuals");
  }
  const std::size_t len = residuals.size();

  std::size_t tail_start = len;
  while (tail_start > 0 && residuals[tail_start - 1] < tol) --tail_start;
  if (len - tail_start >= window) return {VerdictKind::kConverged, tail_start};

  const std::size_t first = len - window;
  double mean = 0.0;
  for (std::size_t t = first; t < len; ++t) mean += residuals[t];
  mean /= static_cast<double>(window);
  if (mean > 10.0 * tol) {
    // Least-squares slope of log(residual) against iteration.
    const double x_mean = 0.5 * static_cast<double>(window - 1);
    double y_mean = 0.0;
    std::vector<double> y(window);
    for (std::size_t t = 0; t < window; ++t) {
      y[t] = std::log(std::max(residuals[first + t], 1e-300));
      y_mean += y[t];
    }
    y_mean /= static_cast<double>(window);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t t = 0; t < window; ++t) {
      const double dx = static_cast<double>(t) - x_mean;
      sxy += dx * (y[t] - y_mean);
      sxx += dx * dx;
    }
    if (sxy / sxx >= kOscillationSlope) return {VerdictKind::kOscillating, 0};
  }
  return {VerdictKind::kUndecided, 0};
}

}  // namespace iwf
