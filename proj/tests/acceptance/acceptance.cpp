// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Usage: iwf_acceptance [criterion...]; no arguments runs
// all eleven. Prints one PASS/FAIL line per criterion and exits with the
// number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unistd.h>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "iwf/algorithms.hpp"
#include "iwf/analysis.hpp"
#include "iwf/experiments.hpp"
#include "iwf/waterfill.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace iwf;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// 1: noise-free IWF reaches a fixed-point residual below 1e-8.
Outcome fixed_point_residual_criterion() {
  auto net = random_weak_network(10, 64, 1);
  RunOptions o;
  o.max_iters = 5000;
  o.decimation = 5000;
  auto trace = run(net, Algorithm::iwf(), NoiseModel::none(), o);
  const double residual = fixed_point_residual(net, trace.final_iterate(), trace.weight);
  std::size_t first_below = 0;
  while (first_below < trace.residuals.size() && trace.residuals[first_below] >= 1e-8) {
    ++first_below;
  }
  return {trace.certificate.contractive && residual < 1e-8,
          "residual " + fmt("%.3g", residual) + ", step size below 1e-8 from t=" +
              std::to_string(first_below)};
}

// 2: scenario A, averaged iteration converges to the two-thirds split while
// the plain iteration oscillates.
Outcome scenario_a_criterion() {
  auto s = scenario_strong_interference_a();
  const auto opts = s.run_options();
  auto avg = run(s.network, Algorithm::aiwf(), NoiseModel::none(), opts);
  auto plain = run(s.network, Algorithm::iwf(), NoiseModel::none(), opts);
  double worst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    worst = std::max(worst, std::abs(avg.final_iterate()(i, 0) - 20.0 / 3.0));
  }
  const bool pass = avg.converged && worst < 1e-3 &&
                    plain.verdict.kind == VerdictKind::kOscillating;
  return {pass, "aiwf " + std::string(to_string(avg.verdict.kind)) + " (max ch1 error " +
                    fmt("%.3g", worst) + "), iwf " + std::string(to_string(plain.verdict.kind))};
}

// 3: relaxed iteration on scenario B converges for small lambda only.
Outcome scenario_b_criterion() {
  auto s = scenario_strong_interference_b();
  const auto opts = s.run_options();
  bool pass = true;
  std::string detail;
  for (double lambda : {0.4, 0.5, 0.7, 0.9, 1.0}) {
    auto trace = run(s.network, Algorithm::riwf(lambda), s.noise, opts);
    const auto want = lambda <= 0.5 ? VerdictKind::kConverged : VerdictKind::kOscillating;
    pass = pass && trace.verdict.kind == want;
    detail += fmt("%g:", lambda) + std::string(to_string(trace.verdict.kind)) + " ";
  }
  detail.pop_back();
  return {pass, detail};
}

// 4: averaged iteration under IPN noise approaches the noise-free fixed point.
Outcome noise_robustness_criterion() {
  auto net = random_weak_network(10, 64, 1);
  const PowerProfile reference = solve_fixed_point(net);
  RunOptions o;
  o.max_iters = 2000;
  o.decimation = 2000;
  o.reference = reference;
  const std::size_t window = o.max_iters / 5;
  auto tail_mean = [&](const RunTrace& t) {
    double s = 0.0;
    for (std::size_t k = t.residuals.size() - window; k < t.residuals.size(); ++k) {
      s += t.residuals[k];
    }
    return s / static_cast<double>(window);
  };
  bool pass = true;
  std::string detail;
  for (double ier : {20.0, 15.0}) {
    int close = 0, separated = 0;
    double worst_ratio = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      auto noise = NoiseModel::gaussian_ier(ier, seed);
      auto avg = run(net, Algorithm::aiwf(), noise, o);
      auto plain = run(net, Algorithm::iwf(), noise, o);
      const double ratio = avg.distance_to_reference.back() / avg.distance_to_reference.front();
      worst_ratio = std::max(worst_ratio, ratio);
      if (ratio < 0.05) ++close;
      if (tail_mean(plain) > 10.0 * tail_mean(avg)) ++separated;
    }
    pass = pass && close >= 19 && separated == 20;
    detail += fmt("%g dB: ", ier) + std::to_string(close) + "/20 below 5% (worst " +
              fmt("%.2f%%", 100.0 * worst_ratio) + "), iwf/aiwf tail separation " +
              std::to_string(separated) + "/20; ";
  }
  detail.resize(detail.size() - 2);
  return {pass, detail};
}

// 5: contraction inequality on random pairs.
Outcome contraction_criterion() {
  Rng rng(5);
  std::size_t violations = 0, pairs = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto net = random_weak_network(10, 16, 500 + seed, seed % 2 ? 3.0 : kUnbounded);
    auto cert = certify(net);
    if (!cert.contractive) return {false, "network not contractive"};
    for (int pair = 0; pair < 1000; ++pair, ++pairs) {
      auto p1 = testutil::random_feasible(net, rng);
      auto p2 = testutil::random_feasible(net, rng);
      const double lhs =
          profile_distance(stacked_operator(net, p1), stacked_operator(net, p2), cert.weight);
      const double rhs = cert.beta * profile_distance(p1, p2, cert.weight);
      worst = std::max(worst, lhs / rhs);
      // relative slack covers rounding only
      if (lhs > rhs * (1.0 + 1e-12)) ++violations;
    }
  }
  return {violations == 0, std::to_string(violations) + " violations in " +
                               std::to_string(pairs) + " pairs, max ratio lhs/rhs " +
                               fmt("%.4f", worst)};
}

// 6: best response equals the constrained least-squares projection.
Outcome projection_criterion() {
  Rng rng(6);
  double worst = 0.0;
  int instances = 0;
  for (int trial = 0; trial < 300; ++trial, ++instances) {
    const std::size_t kk = 1 + trial % 6;
    const double mask = trial % 3 == 0 ? kUnbounded : rng.uniform(0.3, 4.0);
    auto net = testutil::random_network(3, kk, 6000 + trial, 1.5, mask);
    auto p = testutil::random_feasible(net, rng);
    const std::size_t i = trial % 3;
    auto ipn = true_ipn(net, p, i);
    std::vector<double> m(net.mask_row(i).begin(), net.mask_row(i).end());
    auto expected = oracle::projection(ipn, net.power_budget(i), m);
    auto got = best_response(net, p, i).power;
    if (expected.size() != kk) return {false, "oracle found no feasible point"};
    for (std::size_t k = 0; k < kk; ++k) worst = std::max(worst, std::abs(got[k] - expected[k]));
  }
  return {worst < 1e-6,
          std::to_string(instances) + " instances, max component error " + fmt("%.3g", worst)};
}

// 7: spectral radius against the characteristic polynomial.
Outcome spectral_criterion() {
  const double rho_a = certify(scenario_strong_interference_a().network).spectral_radius;
  Rng rng(7);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + trial % 4;
    Matrix m(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        m(r, c) = (trial % 2 == 0 && r == c) ? 0.0 : rng.uniform(0.0, 2.0);
      }
    }
    std::vector<double> dense(m.data().begin(), m.data().end());
    worst = std::max(worst, std::abs(spectral_radius(m) - oracle::spectral_radius(dense, n)));
  }
  const bool pass = std::abs(rho_a - 2.0) <= 1e-9 && worst <= 1e-8;
  return {pass, "scenario A rho " + fmt("%.12g", rho_a) + ", max deviation on 1000 matrices " +
                    fmt("%.3g", worst)};
}

// 8: harmonic averaged iterate equals the running mean of operator outputs.
Outcome average_identity_criterion() {
  auto net = random_weak_network(10, 64, 8);
  RunOptions o;
  o.max_iters = 1000;
  o.keep_errors = true;
  auto trace = run(net, Algorithm::aiwf(), NoiseModel::gaussian_ier(15.0, 8), o);
  Matrix sum(10, 64);
  double worst = 0.0;
  for (std::size_t t = 0; t < o.max_iters; ++t) {
    auto out = stacked_operator(net, trace.iterates[t], trace.errors_applied[t].epsilon);
    for (std::size_t j = 0; j < sum.size(); ++j) sum.data()[j] += out.values().data()[j];
    const auto& next = trace.iterates[t + 1].values().data();
    for (std::size_t j = 0; j < sum.size(); ++j) {
      worst = std::max(worst, std::abs(next[j] - sum.data()[j] / static_cast<double>(t + 1)));
    }
  }
  return {worst <= 1e-10, "max deviation over 1000 steps " + fmt("%.3g", worst)};
}

// 9: spread of averaged bias shrinks like 1/sqrt(L).
Outcome bias_criterion() {
  std::vector<double> sd;
  std::string detail;
  bool mean_ok = true;
  for (std::size_t l : {1000u, 10000u, 100000u}) {
    BiasStudyOptions o;
    o.samples_per_estimate = l;
    o.repetitions = 200;
    o.seed = 9;
    auto r = bias_study(o);
    const double se = r.stddev / std::sqrt(static_cast<double>(r.sample_means.size()));
    mean_ok = mean_ok && std::abs(r.mean) <= 4.0 * se;
    sd.push_back(r.stddev);
    detail += "L=" + std::to_string(l) + " std " + fmt("%.4g", r.stddev) + " mean " +
              fmt("%.2g", r.mean) + " skewness " + fmt("%.2f", r.skewness) + "; ";
  }
  const double r1 = sd[0] / sd[1], r2 = sd[1] / sd[2];
  const bool pass = sd[0] > sd[1] && sd[1] > sd[2] && r1 >= 2.0 && r1 <= 4.5 && r2 >= 2.0 &&
                    r2 <= 4.5 && mean_ok;
  detail += "ratios " + fmt("%.3f", r1) + ", " + fmt("%.3f", r2);
  return {pass, detail};
}

// 10: scalar averaging recursion tends to zero.
Outcome lemma4_criterion() {
  constexpr std::size_t kT = 100000;
  int small = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    if (lemma4_recursion(StepSizeSchedule::harmonic(), 1.0, kT, seed).final_abs < 0.05) ++small;
  }
  const double w = lemma4_recursion(StepSizeSchedule::harmonic(), 0.0, kT, 0, 1.0).trajectory.back();
  const double expected = 1.0 / static_cast<double>(kT + 1);
  const double rel = std::abs(w - expected) / expected;
  return {small >= 95 && rel <= 1e-12,
          std::to_string(small) + "/100 runs below 0.05; noise-free w^T relative error " +
              fmt("%.2g", rel)};
}

// 11: CLI output is byte-identical across invocations.
Outcome determinism_criterion() {
#ifndef IWF_SIM_PATH
  return {false, "built without the iwf-sim tool"};
#else
  const fs::path root = fs::temp_directory_path() / ("iwf-acceptance-" + std::to_string(::getpid()));
  const std::vector<std::string> commands = {
      "run strong-a --seed 3",
      "run random-weak --seed 4 --max-iters 300 --algos iwf,riwf,aiwf --lambda 0.5",
      "run strong-b --noise gaussian-ier --ier-db 15 --seed 5 --max-iters 400",
      "certificate random-weak --seed 6",
      "config strong-b",
      "bias-study -L 200 --repetitions 20 --seed 7 --channels 8 --out OUT/hist.csv",
      "lemma4 --steps 2000 --seed 8 --out OUT/lemma4.csv",
  };
  auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  std::size_t files = 0;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    std::vector<std::map<std::string, std::string>> outputs;
    for (int rep = 0; rep < 2; ++rep) {
      const fs::path dir = root / (std::to_string(c) + "-" + std::to_string(rep));
      fs::create_directories(dir);
      std::string cmd = commands[c];
      for (auto pos = cmd.find("OUT"); pos != std::string::npos; pos = cmd.find("OUT")) {
        cmd.replace(pos, 3, dir.string());
      }
      if (cmd.rfind("run", 0) == 0) cmd += " --out " + dir.string();
      const std::string full = std::string(IWF_SIM_PATH) + " " + cmd + " > " +
                               (dir / "stdout.txt").string() + " 2>&1";
      if (std::system(full.c_str()) != 0) {
        fs::remove_all(root);
        return {false, "command failed: " + cmd};
      }
      std::map<std::string, std::string> contents;
      for (const auto& entry : fs::directory_iterator(dir)) {
        contents[entry.path().filename().string()] = read(entry.path());
      }
      outputs.push_back(std::move(contents));
    }
    if (outputs[0] != outputs[1]) {
      fs::remove_all(root);
      return {false, "outputs differ for: " + commands[c]};
    }
    files += outputs[0].size();
  }
  fs::remove_all(root);
  return {true, std::to_string(commands.size()) + " commands, " + std::to_string(files) +
                    " files identical across two invocations"};
#endif
}

struct Criterion {
  const char* name;
  double time_limit_s;  // 0: no runtime bound
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, Criterion> criteria = {
      {1, {"fixed-point residual", 10, fixed_point_residual_criterion}},
      {2, {"scenario A equilibrium", 5, scenario_a_criterion}},
      {3, {"lambda sensitivity", 10, scenario_b_criterion}},
      {4, {"noise robustness", 60, noise_robustness_criterion}},
      {5, {"contraction property", 30, contraction_criterion}},
      {6, {"projection oracle", 0, projection_criterion}},
      {7, {"spectral certificate", 0, spectral_criterion}},
      {8, {"average identity", 0, average_identity_criterion}},
      {9, {"bias study", 300, bias_criterion}},
      {10, {"averaging recursion", 0, lemma4_criterion}},
      {11, {"determinism", 0, determinism_criterion}},
  };
  std::vector<int> selected;
  for (int a = 1; a < argc; ++a) selected.push_back(std::atoi(argv[a]));
  if (selected.empty()) {
    for (const auto& [id, c] : criteria) selected.push_back(id);
  }

  int failures = 0;
  for (int id : selected) {
    auto it = criteria.find(id);
    if (it == criteria.end()) {
      std::printf("FAIL criterion %d: unknown criterion\n", id);
      ++failures;
      continue;
    }
    const auto& c = it->second;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = outcome.pass;
    std::string timing = fmt("%.2fs", secs);
    if (c.time_limit_s > 0) {
      timing += fmt(" of %gs", c.time_limit_s);
      if (secs >= c.time_limit_s) pass = false;
    }
    std::printf("%s criterion %d: %s: %s [%s]\n", pass ? "PASS" : "FAIL", id, c.name,
                outcome.detail.c_str(), timing.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
  return failures;
}
