// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "iwf/report.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

namespace iwf {
namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(CsvDouble, SeventeenSignificantDigits) {
  EXPECT_EQ(csv_double(0.1), "0.10000000000000001");
  EXPECT_EQ(csv_double(2.0), "2");
  EXPECT_EQ(csv_double(kUnbounded), "inf");
  EXPECT_EQ(std::stod(csv_double(20.0 / 3.0)), 20.0 / 3.0);
}

TEST(TraceCsv, HeaderRowsAndColumns) {
  auto s = scenario_strong_interference_a();
  auto o = s.run_options();
  o.max_iters = 4;
  auto trace = run(s.network, Algorithm::iwf(), s.noise, o);
  std::ostringstream out;
  write_trace_csv(out, trace);
  auto rows = lines(out.str());
  ASSERT_EQ(rows.size(), 1u + 5 * 3 * 2);
  EXPECT_EQ(rows[0], kTraceCsvHeader);
  EXPECT_EQ(rows[1], "0,0,0,5,21,0,2.3570226039551585");
  // iteration 1 residual is the first successive-iterate distance
  EXPECT_EQ(rows[7].substr(0, 6), "1,0,0,");
  EXPECT_NE(rows[7].find("," + csv_double(trace.residuals[0]) + ","), std::string::npos);
}

TEST(TraceCsv, EmptyDistanceWithoutReference) {
  auto s = scenario_strong_interference_b();
  auto o = s.run_options();
  o.max_iters = 2;
  auto trace = run(s.network, Algorithm::iwf(), s.noise, o);
  std::ostringstream out;
  write_trace_csv(out, trace);
  for (const auto& row : lines(out.str())) {
    if (row == kTraceCsvHeader) continue;
    EXPECT_EQ(row.back(), ',');
  }
}

TEST(TraceCsv, ByteIdenticalAcrossRuns) {
  auto s = scenario_random_weak(2);
  auto o = s.run_options();
  o.max_iters = 60;
  std::ostringstream a, b;
  write_trace_csv(a, run(s.network, Algorithm::aiwf(), s.noise, o));
  write_trace_csv(b, run(s.network, Algorithm::aiwf(), s.noise, o));
  EXPECT_EQ(a.str(), b.str());
}

TEST(HistogramCsv, Rows) {
  Histogram h{{-1.0, 0.0, 1.0}, {0.25, 0.75}};
  std::ostringstream out;
  write_histogram_csv(out, h);
  EXPECT_EQ(out.str(), "bin_lower,bin_upper,mass\n-1,0,0.25\n0,1,0.75\n");
}

TEST(Summary, IncludesCertificateAndVerdicts) {
  auto s = scenario_strong_interference_a();
  std::vector<RunTrace> traces;
  for (const auto& a : s.algorithms) traces.push_back(run(s.network, a, s.noise, s.run_options()));
  const auto text = format_run_summary(s, traces);
  EXPECT_NE(text.find("spectral_radius = 2\ncontractive = false"), std::string::npos);
  EXPECT_NE(text.find("[iwf]\nverdict = oscillating"), std::string::npos);
  EXPECT_NE(text.find("[aiwf-harmonic]\nverdict = converged"), std::string::npos);
  EXPECT_NE(text.find("final_distance = "), std::string::npos);
}

TEST(Summary, ContractiveCertificateListsBetaAndWeight) {
  ContractionCertificate c{0.5, {2.0, 2.0}, 0.5, true};
  EXPECT_EQ(format_certificate(c),
            "spectral_radius = 0.5\ncontractive = true\nbeta = 0.5\nweight = 2 2\n");
}

}  // namespace
}  // namespace iwf
