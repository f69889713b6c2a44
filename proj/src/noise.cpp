// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "iwf/noise.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

namespace iwf {

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::kNone: return "none";
    case NoiseKind::kGaussianIer: return "gaussian-ier";
    case NoiseKind::kGaussianFixedVariance: return "gaussian-fixed-variance";
    case NoiseKind::kDiminishing: return "diminishing";
    case NoiseKind::kSummable: return "summable";
  }
  throw std::invalid_argument("unknown noise kind");
}

NoiseKind parse_noise_kind(std::string_view name) {
  for (auto kind : {NoiseKind::kNone, NoiseKind::kGaussianIer,
                    NoiseKind::kGaussianFixedVariance, NoiseKind::kDiminishing,
                    NoiseKind::kSummable}) {
    if (to_string(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown noise kind '" + std::string(name) + "'");
}

NoiseModel NoiseModel::none() { return {}; }

NoiseModel NoiseModel::gaussian_ier(double ier_db, std::uint64_t seed) {
  NoiseModel m;
  m.kind = NoiseKind::kGaussianIer;
  m.ier_db = ier_db;
  m.seed = seed;
  return m;
}

NoiseModel NoiseModel::gaussian_fixed_variance(Matrix variance, std::uint64_t seed) {
  NoiseModel m;
  m.kind = NoiseKind::kGaussianFixedVariance;
  m.variance = std::move(variance);
  m.seed = seed;
  return m;
}

NoiseModel NoiseModel::diminishing(double scale, double decay_exponent,
                                   std::uint64_t seed) {
  NoiseModel m;
  m.kind = NoiseKind::kDiminishing;
  m.scale = scale;
  m.decay_exponent = decay_exponent;
  m.seed = seed;
  return m;
}

NoiseModel NoiseModel::summable(double scale, std::uint64_t seed, double decay_exponent) {
  NoiseModel m;
  m.kind = NoiseKind::kSummable;
  m.scale = scale;
  m.decay_exponent = decay_exponent;
  m.seed = seed;
  return m;
}

void NoiseModel::validate() const {
  switch (kind) {
    case NoiseKind::kNone:
      return;
    case NoiseKind::kGaussianIer:
      if (!std::isfinite(ier_db)) throw std::invalid_argument("ier_db must be finite");
      return;
    case NoiseKind::kGaussianFixedVariance:
      for (double v : variance.data()) {
        if (!std::isfinite(v) || v < 0.0) {
          throw std::invalid_argument("variance entries must be finite and nonnegative");
        }
      }
      return;
    case NoiseKind::kDiminishing:
    case NoiseKind::kSummable:
      if (!(decay_exponent > 0.0) || !std::isfinite(decay_exponent)) {
        throw std::invalid_argument("decay_exponent must be positive");
      }
      if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw std::invalid_argument("noise scale must be positive");
      }
      return;
  }
  throw std::invalid_argument("unknown noise kind");
}

double variance_from_ier(double ipn_value, double ier_db) {
  if (!(ipn_value > 0.0)) {
    throw std::invalid_argument("variance_from_ier: ipn must be positive");
  }
  return ipn_value * std::pow(10.0, -ier_db / 10.0);
}

double noise_envelope(const NoiseModel& model, std::size_t t) {
  return model.scale / std::pow(static_cast<double>(t) + 1.0, model.decay_exponent);
}

ErrorSample sample(const NoiseModel& model, const NetworkModel& network,
                   const PowerProfile& profile, std::size_t t, Rng& rng) {
  const std::size_t n = network.num_users();
  const std::size_t kk = network.num_channels();
  ErrorSample out{Matrix(n, kk), t};
  Matrix& eps = out.epsilon;

  switch (model.kind) {
    case NoiseKind::kNone:
      break;
    case NoiseKind::kGaussianIer: {
      check_dimensions(network, profile);
      const double ratio = std::pow(10.0, -model.ier_db / 10.0);
      std::vector<double> ipn(kk);
      for (std::size_t i = 0; i < n; ++i) {
        true_ipn_into(network, profile, i, ipn);
        for (std::size_t k = 0; k < kk; ++k) {
          eps(i, k) = rng.normal() * std::sqrt(ipn[k] * ratio);
        }
      }
      break;
    }
    case NoiseKind::kGaussianFixedVariance:
      if (model.variance.rows() != n || model.variance.cols() != kk) {
        throw std::invalid_argument("noise variance must be N x K");
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < kk; ++k) {
          eps(i, k) = rng.normal() * std::sqrt(model.variance(i, k));
        }
      }
      break;
    case NoiseKind::kDiminishing:
    case NoiseKind::kSummable: {
      double norm2 = 0.0;
      for (double& e : eps.data()) {
        e = rng.normal();
        norm2 += e * e;
      }
      const double length = noise_envelope(model, t);
      const double factor = norm2 > 0.0 ? length / std::sqrt(norm2) : 0.0;
      for (double& e : eps.data()) e *= factor;
      break;
    }
    default:
      throw std::invalid_argument("unknown noise kind");
  }
  return out;
}

}  // namespace iwf
