// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "iwf/algorithms.hpp"
#include "iwf/analysis.hpp"
#include "iwf/experiments.hpp"

namespace iwf {

inline constexpr const char* kTraceCsvHeader =
    "iteration,user,channel,power,water_level,residual,distance_to_reference";
inline constexpr const char* kHistogramCsvHeader = "bin_lower,bin_upper,mass";

/// Fixed 17 significant digits ("%.17g"); "inf" for +infinity.
std::string csv_double(double value);

/// One row per stored (iteration, user, channel). `residual` is the weighted
/// distance to the previous iterate (0 at iteration 0); `distance_to_reference`
/// is left empty when the run had no reference.
void write_trace_csv(std::ostream& out, const RunTrace& trace);

void write_histogram_csv(std::ostream& out, const Histogram& histogram);

/// rho, contractive flag and, when contractive, beta and the weight vector.
std::string format_certificate(const ContractionCertificate& certificate);

std::string format_run_summary(const Scenario& scenario, const std::vector<RunTrace>& traces);

}  // namespace iwf
