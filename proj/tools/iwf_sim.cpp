// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

// iwf-sim: run water-filling scenarios and studies from the command line.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 runtime failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "iwf/config.hpp"
#include "iwf/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct ScenarioArgs {
  std::string scenario;
  std::string algos;
  std::string noise;
  std::optional<double> ier_db;
  std::vector<double> lambdas;
  std::string schedule;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> max_iters;
  std::optional<double> tol;
  std::vector<std::string> sets;
};

void add_scenario_options(CLI::App* cmd, ScenarioArgs& a, bool run_flags) {
  cmd->add_option("scenario,--scenario", a.scenario,
                  "Canned scenario (strong-a, strong-b, random-weak) or config file")
      ->required();
  cmd->add_option("--seed", a.seed, "Noise seed; also the generator seed of random networks");
  cmd->add_option("--set", a.sets, "Config override section.key=value (repeatable)");
  if (!run_flags) return;
  cmd->add_option("--algos", a.algos, "Comma-separated algorithm list, e.g. iwf,riwf,aiwf");
  cmd->add_option("--noise", a.noise, "Noise kind");
  cmd->add_option("--ier-db", a.ier_db, "Interference error ratio in dB");
  cmd->add_option("--lambda", a.lambdas, "Relaxation factor(s) for riwf");
  cmd->add_option("--schedule", a.schedule, "Step-size schedule for aiwf");
  cmd->add_option("--max-iters", a.max_iters, "Iterations per run");
  cmd->add_option("--tol", a.tol, "Convergence detector tolerance");
}

// Replaces "name:param" list items by the bare name so the shared key applies.
void strip_list_params(iwf::ConfigDocument& doc, const std::string& name) {
  auto list = doc.get("algorithms", "list").value_or("iwf, aiwf");
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(list);
  std::string out;
  bool seen = false;
  while (std::getline(in, item, ',')) {
    item = std::string(item.begin() + item.find_first_not_of(' '),
                       item.begin() + item.find_last_not_of(' ') + 1);
    if (item == name || item.rfind(name + ":", 0) == 0) {
      if (seen) continue;
      seen = true;
      item = name;
    }
    if (!out.empty()) out += ", ";
    out += item;
  }
  doc.set("algorithms", "list", out);
}

iwf::ConfigDocument resolve_config(const ScenarioArgs& a) {
  iwf::ConfigDocument doc;
  if (fs::exists(a.scenario)) {
    doc = iwf::load_config_file(a.scenario);
  } else {
    try {
      doc = iwf::config_from_scenario(iwf::canned_scenario(a.scenario));
    } catch (const std::invalid_argument&) {
      throw iwf::ConfigError("no canned scenario or config file named '" + a.scenario + "'");
    }
  }
  if (a.seed) {
    doc.set("noise", "seed", std::to_string(*a.seed));
    if (doc.get("network", "generator").value_or("inline") == "random-weak") {
      doc.set("network", "generator_seed", std::to_string(*a.seed));
    }
  }
  if (!a.algos.empty()) doc.set("algorithms", "list", a.algos);
  if (!a.noise.empty()) doc.set("noise", "kind", a.noise);
  if (a.ier_db) doc.set("noise", "ier_db", iwf::format_double(*a.ier_db));
  if (!a.lambdas.empty()) {
    std::string values;
    for (double l : a.lambdas) values += (values.empty() ? "" : " ") + iwf::format_double(l);
    doc.set("algorithms", "riwf.lambda", values);
    strip_list_params(doc, "riwf");
  }
  if (!a.schedule.empty()) {
    doc.set("algorithms", "aiwf.schedule", a.schedule);
    strip_list_params(doc, "aiwf");
  }
  if (a.max_iters) doc.set("run", "max_iters", std::to_string(*a.max_iters));
  if (a.tol) doc.set("run", "tol", iwf::format_double(*a.tol));
  for (const auto& s : a.sets) doc.apply_override(s);
  return doc;
}

fs::path output_dir(const std::string& flag, const iwf::ConfigDocument* doc) {
  if (!flag.empty()) return flag;
  if (doc) {
    if (auto d = doc->get("output", "dir")) return *d;
  }
  if (const char* env = std::getenv("IWF_OUT_DIR"); env && *env) return env;
  return ".";
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
}

int cmd_run(const ScenarioArgs& a, const std::string& out_flag) {
  const auto doc = resolve_config(a);
  const auto scenario = iwf::scenario_from_config(doc);
  const fs::path dir = output_dir(out_flag, &doc);
  const std::string prefix = doc.get("output", "prefix").value_or(scenario.name);
  fs::create_directories(dir);

  const auto options = scenario.run_options();
  std::vector<std::future<iwf::RunTrace>> jobs;
  for (const auto& algorithm : scenario.algorithms) {
    jobs.push_back(std::async(std::launch::async, [&, algorithm] {
      return iwf::run(scenario.network, algorithm, scenario.noise, options);
    }));
  }
  std::vector<iwf::RunTrace> traces;
  for (auto& job : jobs) traces.push_back(job.get());

  for (const auto& trace : traces) {
    std::ostringstream csv;
    iwf::write_trace_csv(csv, trace);
    write_file(dir / (prefix + "-" + trace.algorithm_tag + ".csv"), csv.str());
  }
  const std::string summary = iwf::format_run_summary(scenario, traces);
  write_file(dir / (prefix + "-summary.txt"), summary);
  std::cout << summary;
  return 0;
}

int cmd_certificate(const ScenarioArgs& a) {
  const auto scenario = iwf::scenario_from_config(resolve_config(a));
  std::cout << iwf::format_certificate(iwf::certify(scenario.network));
  return 0;
}

int cmd_config(const ScenarioArgs& a) {
  std::cout << iwf::serialize_scenario(iwf::scenario_from_config(resolve_config(a)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Iterative water-filling simulator"};
  app.require_subcommand(1);

  ScenarioArgs run_args;
  std::string run_out;
  auto* run = app.add_subcommand("run", "Run every listed algorithm and write traces");
  add_scenario_options(run, run_args, true);
  run->add_option("--out", run_out, "Output directory (default: $IWF_OUT_DIR or .)");

  ScenarioArgs cert_args;
  auto* cert = app.add_subcommand("certificate", "Print the contraction certificate");
  add_scenario_options(cert, cert_args, false);

  ScenarioArgs config_args;
  auto* config = app.add_subcommand("config", "Print the resolved scenario config");
  add_scenario_options(config, config_args, true);

  iwf::BiasStudyOptions bias;
  std::string bias_out;
  auto* bias_cmd = app.add_subcommand("bias-study", "Histogram of averaged response bias");
  bias_cmd->add_option("-L,--samples", bias.samples_per_estimate, "Error draws averaged per estimate")
      ->check(CLI::PositiveNumber);
  bias_cmd->add_option("--repetitions", bias.repetitions, "Random networks and profiles")->check(CLI::PositiveNumber);
  bias_cmd->add_option("--seed", bias.seed, "Base seed");
  bias_cmd->add_option("--ier-db", bias.ier_db, "Interference error ratio in dB");
  bias_cmd->add_option("--users", bias.num_users, "Users per network")->check(CLI::PositiveNumber);
  bias_cmd->add_option("--channels", bias.num_channels, "Channels per network")->check(CLI::PositiveNumber);
  bias_cmd->add_option("--bins", bias.bins, "Histogram bins")->check(CLI::PositiveNumber);
  bias_cmd->add_option("--threads", bias.threads, "Worker threads, 0 for all cores");
  bias_cmd->add_option("--out", bias_out, "Histogram CSV path")->required();

  std::size_t steps = 100000;
  std::uint64_t lemma_seed = 0;
  double variance = 1.0;
  double initial = 1.0;
  std::string lemma_out;
  auto* lemma = app.add_subcommand("lemma4", "Averaged zero-mean noise recursion");
  lemma->add_option("--steps", steps, "Iterations T")->check(CLI::PositiveNumber);
  lemma->add_option("--seed", lemma_seed, "Noise seed");
  lemma->add_option("--variance", variance, "Noise variance")->check(CLI::NonNegativeNumber);
  lemma->add_option("--initial", initial, "Starting value w0");
  lemma->add_option("--out", lemma_out, "Trajectory CSV path (iteration,w)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run) return cmd_run(run_args, run_out);
    if (*cert) return cmd_certificate(cert_args);
    if (*config) return cmd_config(config_args);
    if (*bias_cmd) {
      const auto result = iwf::bias_study(bias);
      std::ostringstream csv;
      iwf::write_histogram_csv(csv, result.histogram);
      const fs::path path = bias_out;
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      write_file(path, csv.str());
      std::cout << "mean = " << iwf::format_double(result.mean) << '\n'
                << "stddev = " << iwf::format_double(result.stddev) << '\n'
                << "skewness = " << iwf::format_double(result.skewness) << '\n';
      return 0;
    }
    if (*lemma) {
      const auto result = iwf::lemma4_recursion(iwf::StepSizeSchedule::harmonic(), variance,
                                                steps, lemma_seed, initial);
      if (!lemma_out.empty()) {
        std::ostringstream csv;
        csv << "iteration,w\n";
        for (std::size_t t = 0; t < result.trajectory.size(); ++t) {
          csv << t << ',' << iwf::csv_double(result.trajectory[t]) << '\n';
        }
        write_file(lemma_out, csv.str());
      }
      std::cout << "final_abs = " << iwf::format_double(result.final_abs) << '\n';
      return 0;
    }
  } catch (const iwf::ConfigError& e) {
    std::cerr << "iwf-sim: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "iwf-sim: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
