// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "iwf/algorithms.hpp"
#include "iwf/analysis.hpp"
#include "iwf/config.hpp"
#include "iwf/experiments.hpp"
#include "iwf/network.hpp"
#include "iwf/noise.hpp"
#include "iwf/waterfill.hpp"

namespace py = pybind11;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_array(const iwf::Matrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

Array to_array(std::span<const double> v) {
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

iwf::Matrix to_matrix(const Array& a, const char* what) {
  if (a.ndim() != 2) throw py::value_error(std::string(what) + " must be 2-D");
  return iwf::Matrix(a.shape(0), a.shape(1),
                     std::vector<double>(a.data(), a.data() + a.size()));
}

std::vector<double> to_vector(const Array& a) {
  return std::vector<double>(a.data(), a.data() + a.size());
}

iwf::PowerProfile to_profile(const Array& a) { return iwf::PowerProfile(to_matrix(a, "profile")); }

std::optional<iwf::PowerProfile> to_optional_profile(const std::optional<Array>& a) {
  if (!a) return std::nullopt;
  return to_profile(*a);
}

iwf::NetworkModel make_network(const Array& gain, const Array& noise_floor,
                               const Array& budget, const std::optional<Array>& mask) {
  if (gain.ndim() != 3 || gain.shape(0) != gain.shape(1)) {
    throw py::value_error("gain must have shape (N, N, K), indexed [tx, rx, k]");
  }
  const std::size_t n = gain.shape(0);
  const std::size_t kk = gain.shape(2);
  iwf::Matrix m = mask ? to_matrix(*mask, "mask") : iwf::Matrix(n, kk, iwf::kUnbounded);
  return iwf::NetworkModel(n, kk, to_vector(gain), to_matrix(noise_floor, "noise_floor"),
                           to_vector(budget), std::move(m));
}

Array gain_tensor(const iwf::NetworkModel& net) {
  const std::size_t n = net.num_users();
  Array out({n, n, net.num_channels()});
  std::copy(net.gains().begin(), net.gains().end(), out.mutable_data());
  return out;
}

Array stack_iterates(const iwf::RunTrace& t) {
  if (t.iterates.empty()) return Array(0);
  const std::size_t n = t.iterates[0].num_users();
  const std::size_t kk = t.iterates[0].num_channels();
  Array out({t.iterates.size(), n, kk});
  double* dst = out.mutable_data();
  for (const auto& p : t.iterates) {
    dst = std::copy(p.values().data().begin(), p.values().data().end(), dst);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Iterative water-filling simulator core";

  py::register_exception<iwf::ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<iwf::NetworkModel>(m, "NetworkModel")
      .def(py::init(&make_network), py::arg("gain"), py::arg("noise_floor"),
           py::arg("budget"), py::arg("mask") = py::none())
      .def_property_readonly("num_users", &iwf::NetworkModel::num_users)
      .def_property_readonly("num_channels", &iwf::NetworkModel::num_channels)
      .def_property_readonly("gain", &gain_tensor)
      .def_property_readonly("noise_floor",
                             [](const iwf::NetworkModel& n) { return to_array(n.noise_floors()); })
      .def_property_readonly("budget",
                             [](const iwf::NetworkModel& n) { return to_array(n.power_budgets()); })
      .def_property_readonly("mask",
                             [](const iwf::NetworkModel& n) { return to_array(n.power_masks()); })
      .def("__eq__", [](const iwf::NetworkModel& a, const iwf::NetworkModel& b) { return a == b; });

  py::class_<iwf::StepSizeSchedule>(m, "Schedule")
      .def_static("harmonic", &iwf::StepSizeSchedule::harmonic)
      .def_static("power_decay", &iwf::StepSizeSchedule::power_decay, py::arg("a"),
                  py::arg("b"), py::arg("gamma"))
      .def("alpha", &iwf::StepSizeSchedule::alpha)
      .def_property_readonly("kind", [](const iwf::StepSizeSchedule& s) {
        return std::string(iwf::to_string(s.kind));
      });

  py::class_<iwf::Algorithm>(m, "Algorithm")
      .def_static("iwf", &iwf::Algorithm::iwf)
      .def_static("riwf", &iwf::Algorithm::riwf, py::arg("lam"))
      .def_static("aiwf", &iwf::Algorithm::aiwf,
                  py::arg("schedule") = iwf::StepSizeSchedule::harmonic())
      .def_property_readonly("tag", &iwf::Algorithm::tag)
      .def("__repr__", [](const iwf::Algorithm& a) { return "<Algorithm " + a.tag() + ">"; });

  py::class_<iwf::NoiseModel>(m, "NoiseModel")
      .def_static("none", &iwf::NoiseModel::none)
      .def_static("gaussian_ier", &iwf::NoiseModel::gaussian_ier, py::arg("ier_db"),
                  py::arg("seed") = 0)
      .def_static(
          "gaussian_fixed_variance",
          [](const Array& variance, std::uint64_t seed) {
            return iwf::NoiseModel::gaussian_fixed_variance(to_matrix(variance, "variance"),
                                                            seed);
          },
          py::arg("variance"), py::arg("seed") = 0)
      .def_static("diminishing", &iwf::NoiseModel::diminishing, py::arg("scale"),
                  py::arg("decay_exponent") = 1.0, py::arg("seed") = 0)
      .def_static("summable", &iwf::NoiseModel::summable, py::arg("scale"), py::arg("seed") = 0,
                  py::arg("decay_exponent") = 0.5)
      .def_property_readonly("kind",
                             [](const iwf::NoiseModel& n) { return std::string(iwf::to_string(n.kind)); })
      .def_readwrite("seed", &iwf::NoiseModel::seed);

  py::class_<iwf::ContractionCertificate>(m, "Certificate")
      .def_readonly("spectral_radius", &iwf::ContractionCertificate::spectral_radius)
      .def_readonly("weight", &iwf::ContractionCertificate::weight)
      .def_readonly("beta", &iwf::ContractionCertificate::beta)
      .def_readonly("contractive", &iwf::ContractionCertificate::contractive);

  py::class_<iwf::RunTrace>(m, "RunTrace")
      .def_readonly("iterations", &iwf::RunTrace::iterations)
      .def_property_readonly("iterates", &stack_iterates)
      .def_readonly("water_levels", &iwf::RunTrace::water_levels)
      .def_property_readonly("residuals",
                             [](const iwf::RunTrace& t) { return to_array(t.residuals); })
      .def_property_readonly(
          "distance_to_reference",
          [](const iwf::RunTrace& t) { return to_array(t.distance_to_reference); })
      .def_readonly("weight", &iwf::RunTrace::weight)
      .def_readonly("certificate", &iwf::RunTrace::certificate)
      .def_property_readonly("verdict",
                             [](const iwf::RunTrace& t) { return std::string(iwf::to_string(t.verdict.kind)); })
      .def_readonly("converged", &iwf::RunTrace::converged)
      .def_readonly("convergence_iteration", &iwf::RunTrace::convergence_iteration)
      .def_readonly("algorithm_tag", &iwf::RunTrace::algorithm_tag)
      .def_property_readonly("final_iterate",
                             [](const iwf::RunTrace& t) { return to_array(t.final_iterate().values()); });

  py::class_<iwf::Scenario>(m, "Scenario")
      .def_readonly("name", &iwf::Scenario::name)
      .def_readonly("network", &iwf::Scenario::network)
      .def_readonly("noise", &iwf::Scenario::noise)
      .def_readonly("algorithms", &iwf::Scenario::algorithms)
      .def_property_readonly("reference",
                             [](const iwf::Scenario& s) -> std::optional<Array> {
                               if (!s.reference_equilibrium) return std::nullopt;
                               return to_array(s.reference_equilibrium->values());
                             })
      .def("__eq__", [](const iwf::Scenario& a, const iwf::Scenario& b) { return a == b; });

  m.def(
      "water_level_solve",
      [](const Array& ipn, double budget, const std::optional<Array>& mask) {
        auto ipn_v = to_vector(ipn);
        auto mask_v = mask ? to_vector(*mask) : std::vector<double>(ipn_v.size(), iwf::kUnbounded);
        auto r = iwf::water_level_solve(ipn_v, budget, mask_v);
        return py::make_tuple(to_array(r.power), r.water_level, r.saturated);
      },
      py::arg("ipn"), py::arg("budget"), py::arg("mask") = py::none(),
      "Returns (power, water_level, saturated).");

  m.def(
      "true_ipn",
      [](const iwf::NetworkModel& net, const Array& p, std::size_t i) {
        return to_array(iwf::true_ipn(net, to_profile(p), i));
      },
      py::arg("network"), py::arg("profile"), py::arg("user"));

  m.def(
      "best_response",
      [](const iwf::NetworkModel& net, const Array& p, std::size_t i) {
        auto r = iwf::best_response(net, to_profile(p), i);
        return py::make_tuple(to_array(r.power), r.water_level, r.saturated);
      },
      py::arg("network"), py::arg("profile"), py::arg("user"));

  m.def(
      "stacked_operator",
      [](const iwf::NetworkModel& net, const Array& p, const std::optional<Array>& eps) {
        auto profile = to_profile(p);
        if (eps) return to_array(iwf::stacked_operator(net, profile, to_matrix(*eps, "epsilon")).values());
        return to_array(iwf::stacked_operator(net, profile).values());
      },
      py::arg("network"), py::arg("profile"), py::arg("epsilon") = py::none());

  m.def(
      "spectral_radius", [](const Array& a) { return iwf::spectral_radius(to_matrix(a, "matrix")); },
      py::arg("matrix"));
  m.def("certify", &iwf::certify, py::arg("network"));
  m.def(
      "fixed_point_residual",
      [](const iwf::NetworkModel& net, const Array& p, const std::optional<std::vector<double>>& w) {
        auto weight = w ? *w : std::vector<double>(net.num_users(), 1.0);
        return iwf::fixed_point_residual(net, to_profile(p), weight);
      },
      py::arg("network"), py::arg("profile"), py::arg("weight") = py::none());
  m.def(
      "detect_convergence",
      [](const std::vector<double>& r, std::size_t window, double tol) {
        auto v = iwf::detect_convergence(r, window, tol);
        return py::make_tuple(std::string(iwf::to_string(v.kind)), v.iteration);
      },
      py::arg("residuals"), py::arg("window"), py::arg("tol"));

  m.def(
      "default_start",
      [](const iwf::NetworkModel& net) { return to_array(iwf::default_start(net).values()); },
      py::arg("network"));
  m.def(
      "solve_fixed_point",
      [](const iwf::NetworkModel& net, double tol, std::size_t max_iters) {
        return to_array(iwf::solve_fixed_point(net, tol, max_iters).values());
      },
      py::arg("network"), py::arg("tol") = 1e-13, py::arg("max_iters") = 100000);

  m.def(
      "run",
      [](const iwf::NetworkModel& net, const iwf::Algorithm& algorithm, const iwf::NoiseModel& noise,
         std::size_t max_iters, double tol, std::size_t window, std::size_t decimation,
         const std::optional<Array>& start, const std::optional<Array>& reference) {
        iwf::RunOptions o;
        o.max_iters = max_iters;
        o.tol = tol;
        o.window = window;
        o.decimation = decimation;
        o.start = to_optional_profile(start);
        o.reference = to_optional_profile(reference);
        py::gil_scoped_release release;
        return iwf::run(net, algorithm, noise, o);
      },
      py::arg("network"), py::arg("algorithm"), py::arg("noise") = iwf::NoiseModel::none(),
      py::arg("max_iters") = 5000, py::arg("tol") = 1e-5, py::arg("window") = 0,
      py::arg("decimation") = 1, py::arg("start") = py::none(), py::arg("reference") = py::none());

  m.def(
      "run_scenario",
      [](const iwf::Scenario& s) {
        const auto o = s.run_options();
        std::vector<iwf::RunTrace> traces;
        py::gil_scoped_release release;
        for (const auto& a : s.algorithms) traces.push_back(iwf::run(s.network, a, s.noise, o));
        return traces;
      },
      py::arg("scenario"));

  m.def("random_weak_network", &iwf::random_weak_network, py::arg("num_users"),
        py::arg("num_channels"), py::arg("seed"), py::arg("mask") = iwf::kUnbounded,
        py::arg("budget") = 10.0);
  m.def("canned_scenario", &iwf::canned_scenario, py::arg("name"), py::arg("seed") = 1);
  m.def("parse_scenario", [](const std::string& text) { return iwf::parse_scenario(text); },
        py::arg("text"));
  m.def("serialize_scenario", &iwf::serialize_scenario, py::arg("scenario"));

  m.def(
      "bias_study",
      [](std::size_t samples, std::size_t repetitions, std::uint64_t seed, double ier_db,
         std::size_t users, std::size_t channels, std::size_t bins) {
        iwf::BiasStudyOptions o;
        o.samples_per_estimate = samples;
        o.repetitions = repetitions;
        o.seed = seed;
        o.ier_db = ier_db;
        o.num_users = users;
        o.num_channels = channels;
        o.bins = bins;
        iwf::BiasStudyResult r;
        {
          py::gil_scoped_release release;
          r = iwf::bias_study(o);
        }
        py::dict d;
        d["mean"] = r.mean;
        d["stddev"] = r.stddev;
        d["skewness"] = r.skewness;
        d["sample_means"] = to_array(r.sample_means);
        d["edges"] = to_array(r.histogram.edges);
        d["mass"] = to_array(r.histogram.mass);
        return d;
      },
      py::arg("samples"), py::arg("repetitions"), py::arg("seed") = 0, py::arg("ier_db") = 10.0,
      py::arg("users") = 10, py::arg("channels") = 32, py::arg("bins") = 50);

  m.def(
      "lemma4_recursion",
      [](double variance, std::size_t steps, std::uint64_t seed, double initial) {
        auto r = iwf::lemma4_recursion(iwf::StepSizeSchedule::harmonic(), variance, steps, seed,
                                       initial);
        return to_array(r.trajectory);
      },
      py::arg("variance"), py::arg("steps"), py::arg("seed") = 0, py::arg("initial") = 1.0,
      "Trajectory w^0..w^T of the harmonic averaging recursion.");
}
