// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "iwf/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "iwf/config.hpp"

namespace iwf {

std::string csv_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << kTraceCsvHeader << '\n';
  const bool has_reference = !trace.distance_to_reference.empty();
  for (std::size_t s = 0; s < trace.iterates.size(); ++s) {
    const std::size_t t = trace.iterations[s];
    const auto& p = trace.iterates[s];
    const std::string residual = csv_double(t == 0 ? 0.0 : trace.residuals[t - 1]);
    const std::string distance =
        has_reference ? csv_double(trace.distance_to_reference[s]) : std::string();
    for (std::size_t i = 0; i < p.num_users(); ++i) {
      const std::string level = csv_double(trace.water_levels[s][i]);
      for (std::size_t k = 0; k < p.num_channels(); ++k) {
        out << t << ',' << i << ',' << k << ',' << csv_double(p(i, k)) << ',' << level << ','
            << residual << ',' << distance << '\n';
      }
    }
  }
}

void write_histogram_csv(std::ostream& out, const Histogram& histogram) {
  out << kHistogramCsvHeader << '\n';
  for (std::size_t b = 0; b < histogram.mass.size(); ++b) {
    out << csv_double(histogram.edges[b]) << ',' << csv_double(histogram.edges[b + 1]) << ','
        << csv_double(histogram.mass[b]) << '\n';
  }
}

std::string format_certificate(const ContractionCertificate& c) {
  std::ostringstream out;
  out << "spectral_radius = " << format_double(c.spectral_radius) << '\n'
      << "contractive = " << (c.contractive ? "true" : "false") << '\n';
  if (c.contractive) {
    out << "beta = " << format_double(c.beta) << '\n' << "weight =";
    for (double w : c.weight) out << ' ' << format_double(w);
    out << '\n';
  }
  return out.str();
}

std::string format_run_summary(const Scenario& scenario, const std::vector<RunTrace>& traces) {
  std::ostringstream out;
  const auto& net = scenario.network;
  const RunOptions opts = scenario.run_options();
  out << "scenario = " << scenario.name << '\n'
      << "users = " << net.num_users() << '\n'
      << "channels = " << net.num_channels() << '\n'
      << "noise = " << to_string(scenario.noise.kind) << '\n'
      << "seed = " << scenario.noise.seed << '\n'
      << "max_iters = " << opts.max_iters << '\n'
      << "tol = " << format_double(opts.tol) << '\n'
      << "window = " << (opts.window == 0 ? std::max<std::size_t>(2, opts.max_iters / 5)
                                          : opts.window)
      << '\n'
      << '\n'
      << "[certificate]\n";
  out << format_certificate(certify(net));
  for (const auto& trace : traces) {
    out << '\n' << '[' << trace.algorithm_tag << "]\n";
    out << "verdict = " << to_string(trace.verdict.kind) << '\n';
    if (trace.convergence_iteration) {
      out << "convergence_iteration = " << *trace.convergence_iteration << '\n';
    }
    out << "final_residual = " << format_double(trace.residuals.back()) << '\n';
    out << "fixed_point_residual = "
        << format_double(fixed_point_residual(net, trace.final_iterate(), trace.weight)) << '\n';
    if (!trace.distance_to_reference.empty()) {
      out << "initial_distance = " << format_double(trace.distance_to_reference.front()) << '\n'
          << "final_distance = " << format_double(trace.distance_to_reference.back()) << '\n';
    }
  }
  return out.str();
}

}  // namespace iwf
