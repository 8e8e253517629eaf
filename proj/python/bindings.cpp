// Copyright 2026 The sorkin-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "sorkin_lab/commands.hpp"
#include "sorkin_lab/detection.hpp"
#include "sorkin_lab/dynamics.hpp"
#include "sorkin_lab/protocol.hpp"
#include "sorkin_lab/version.hpp"

namespace py = pybind11;
using namespace sorkin;

namespace {

Vector3 ket_vector(const QutritState& s) { return s.vector(); }

Readout readout_from(bool exact, const DetectionParams& det) {
  return exact ? Readout{} : Readout{det};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Qutrit third-order interference simulator";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "SorkinLabError", PyExc_RuntimeError);
  py::register_exception<NonUnitaryError>(m, "NonUnitaryError", base.ptr());
  py::register_exception<NormalizationError>(m, "NormalizationError", base.ptr());
  py::register_exception<DegenerateProtocolError>(m, "DegenerateProtocolError", base.ptr());
  py::register_exception<NotQuantumRegimeError>(m, "NotQuantumRegimeError", base.ptr());
  py::register_exception<UnphysicalParameterError>(m, "UnphysicalParameterError", base.ptr());
  py::register_exception<InsufficientBatchesError>(m, "InsufficientBatchesError", base.ptr());
  py::register_exception<IntegrationError>(m, "IntegrationError", base.ptr());
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());

  py::enum_<Channel>(m, "Channel").value("MW1", Channel::MW1).value("MW2", Channel::MW2);

  py::class_<ProbabilityRule>(m, "ProbabilityRule")
      .def_static("born", &ProbabilityRule::born)
      .def_static("exponent_deformed", &ProbabilityRule::exponent_deformed, py::arg("epsilon"))
      .def_static("additive_triple", &ProbabilityRule::additive_triple, py::arg("epsilon"))
      .def_static("parse", &ProbabilityRule::parse, py::arg("text"))
      .def_property_readonly("epsilon", &ProbabilityRule::epsilon)
      .def_property_readonly("is_born", &ProbabilityRule::is_born)
      .def_property_readonly("label", &ProbabilityRule::label)
      .def_property_readonly("description", &ProbabilityRule::description)
      .def("__repr__", [](const ProbabilityRule& r) { return "ProbabilityRule('" + r.label() + "')"; });

  py::class_<TargetAmplitudes>(m, "TargetAmplitudes")
      .def(py::init([](double a, double b, double c) { return TargetAmplitudes{a, b, c}; }),
           py::arg("a"), py::arg("b"), py::arg("c"))
      .def_static("reference", &TargetAmplitudes::reference)
      .def_readwrite("a", &TargetAmplitudes::a)
      .def_readwrite("b", &TargetAmplitudes::b)
      .def_readwrite("c", &TargetAmplitudes::c);

  py::class_<MeasurementSpec>(m, "MeasurementSpec")
      .def(py::init([](double t1, double t2) { return MeasurementSpec{t1, t2}; }), py::arg("theta1"),
           py::arg("theta2"))
      .def_static("m1", &MeasurementSpec::m1)
      .def_static("m2", &MeasurementSpec::m2)
      .def_readwrite("theta1", &MeasurementSpec::theta1)
      .def_readwrite("theta2", &MeasurementSpec::theta2);

  py::class_<DetectionParams>(m, "DetectionParams")
      .def(py::init<>())
      .def_readwrite("mu_bright", &DetectionParams::mu_bright)
      .def_readwrite("contrast", &DetectionParams::contrast)
      .def_readwrite("mu_background", &DetectionParams::mu_background)
      .def_readwrite("shots", &DetectionParams::shots)
      .def_property(
          "shared_reference",
          [](const DetectionParams& d) { return d.reference == ReferenceMode::SharedPerBatch; },
          [](DetectionParams& d, bool shared) {
            d.reference = shared ? ReferenceMode::SharedPerBatch : ReferenceMode::PerEstimate;
          });

  py::class_<HamiltonianParams>(m, "HamiltonianParams")
      .def(py::init<>())
      .def_readwrite("zero_field_splitting_hz", &HamiltonianParams::zero_field_splitting_hz)
      .def_readwrite("gyromagnetic_hz_per_gauss", &HamiltonianParams::gyromagnetic_hz_per_gauss)
      .def_readwrite("field_gauss", &HamiltonianParams::field_gauss)
      .def_readwrite("rabi_frequency_hz", &HamiltonianParams::rabi_frequency_hz)
      .def_readwrite("t2star_s", &HamiltonianParams::t2star_s);

  py::class_<SecondOrderTerms>(m, "SecondOrderTerms")
      .def_readonly("ab", &SecondOrderTerms::ab)
      .def_readonly("ac", &SecondOrderTerms::ac)
      .def_readonly("bc", &SecondOrderTerms::bc);

  py::class_<SorkinReport>(m, "SorkinReport")
      .def_readonly("p", &SorkinReport::p)
      .def_readonly("q_a", &SorkinReport::q_a)
      .def_readonly("q_b", &SorkinReport::q_b)
      .def_readonly("q_c", &SorkinReport::q_c)
      .def_readonly("second_order", &SorkinReport::second_order)
      .def_readonly("i2", &SorkinReport::i2)
      .def_readonly("i3", &SorkinReport::i3)
      .def_readonly("kappa", &SorkinReport::kappa)
      .def_property_readonly("simulated", [](const SorkinReport& r) {
        return r.provenance.mode == Provenance::Mode::Simulated;
      });

  py::class_<KappaEstimate>(m, "KappaEstimate")
      .def_readonly("per_batch_kappa", &KappaEstimate::per_batch_kappa)
      .def_readonly("mean", &KappaEstimate::mean)
      .def_readonly("std", &KappaEstimate::std_dev)
      .def_readonly("stderr", &KappaEstimate::std_error)
      .def_readonly("ci95", &KappaEstimate::ci95);

  py::class_<SensitivityRow>(m, "SensitivityRow")
      .def_readonly("epsilon", &SensitivityRow::epsilon)
      .def_readonly("kappa_mean", &SensitivityRow::kappa_mean)
      .def_readonly("kappa_std", &SensitivityRow::kappa_std)
      .def_readonly("detected", &SensitivityRow::detected)
      .def_readonly("detection_fraction", &SensitivityRow::detection_fraction);

  py::class_<SensitivityTable>(m, "SensitivityTable")
      .def_readonly("rows", &SensitivityTable::rows)
      .def_readonly("smallest_detected", &SensitivityTable::smallest_detected)
      .def_readonly("threshold_crossing", &SensitivityTable::threshold_crossing);

  m.def("rotation_r1", [](double theta) { return rotation_r1(theta).matrix(); }, py::arg("theta"));
  m.def("rotation_r2", [](double theta) { return rotation_r2(theta).matrix(); }, py::arg("theta"));
  m.def("measurement_ket", [](const MeasurementSpec& s) { return ket_vector(measurement_ket(s)); },
        py::arg("spec"));
  m.def(
      "prepare_states",
      [](const TargetAmplitudes& t) {
        std::vector<Vector3> out;
        for (const auto& s : prepare_states(t)) out.push_back(s.vector());
        return out;
      },
      py::arg("amplitudes"), "Seven prepared states as (c_plus, c_zero, c_minus) vectors.");
  m.def("true_probabilities", &true_probabilities, py::arg("amplitudes"), py::arg("spec"),
        py::arg("rule") = ProbabilityRule::born());
  m.def("analyze_probabilities",
        [](const ProbabilityVector& p, const TargetAmplitudes& t) { return analyze_probabilities(p, t); },
        py::arg("p"), py::arg("amplitudes"));
  m.def("sorkin_term",
        [](int order, const std::vector<Complex>& w) { return sorkin_term(order, w); }, py::arg("order"),
        py::arg("weights"));

  m.def(
      "run_protocol_batch",
      [](const TargetAmplitudes& t, const MeasurementSpec& s, const ProbabilityRule& rule, bool exact,
         const DetectionParams& det, std::uint64_t seed) {
        return run_protocol_batch(t, s, rule, readout_from(exact, det), seed);
      },
      py::arg("amplitudes"), py::arg("spec"), py::arg("rule") = ProbabilityRule::born(),
      py::arg("exact") = true, py::arg("detection") = DetectionParams{}, py::arg("seed") = 0);
  m.def(
      "run_batches",
      [](const TargetAmplitudes& t, const MeasurementSpec& s, const ProbabilityRule& rule, bool exact,
         const DetectionParams& det, std::size_t batches, std::uint64_t seed, unsigned threads) {
        py::gil_scoped_release release;
        return run_batches(t, s, rule, readout_from(exact, det), batches, seed, threads);
      },
      py::arg("amplitudes"), py::arg("spec"), py::arg("rule") = ProbabilityRule::born(),
      py::arg("exact") = false, py::arg("detection") = DetectionParams{}, py::arg("batches") = 50,
      py::arg("seed") = 1, py::arg("threads") = 0);
  m.def(
      "estimate_kappa",
      [](const std::vector<SorkinReport>& reports, std::uint64_t seed, std::size_t resamples) {
        return estimate_kappa(reports, seed, resamples);
      },
      py::arg("reports"), py::arg("bootstrap_seed") = 0,
      py::arg("resamples") = kDefaultBootstrapResamples);
  m.def(
      "sensitivity_scan",
      [](const TargetAmplitudes& t, const MeasurementSpec& s, const std::string& family,
         const std::vector<double>& eps, bool exact, const DetectionParams& det, std::size_t batches,
         std::uint64_t seed, std::size_t trials) {
        RuleFamily f;
        if (family == "triple") {
          f = RuleFamily::AdditiveTriple;
        } else if (family == "exponent") {
          f = RuleFamily::ExponentDeformed;
        } else {
          throw ArgumentError("family must be 'triple' or 'exponent'");
        }
        py::gil_scoped_release release;
        return sensitivity_scan(t, s, f, eps, readout_from(exact, det), batches, seed, trials);
      },
      py::arg("amplitudes"), py::arg("spec"), py::arg("family"), py::arg("eps_grid"),
      py::arg("exact") = false, py::arg("detection") = DetectionParams{}, py::arg("batches") = 50,
      py::arg("seed") = 1, py::arg("trials") = 1);

  m.def(
      "solve_schedule",
      [](const TargetAmplitudes& t, double rabi_hz) {
        const auto plan = solve_schedule(t, rabi_hz);
        py::list rows;
        for (std::size_t i = 0; i < kExperiments; ++i) {
          py::list pulses;
          for (const auto& s : plan.schedules[i].segments) {
            pulses.append(py::make_tuple(s.channel, s.angle, s.duration_s(rabi_hz)));
          }
          py::dict row;
          row["mw1"] = plan.angles(i).mw1;
          row["mw2"] = plan.angles(i).mw2;
          row["global_sign"] = plan.global_sign[i];
          row["pulses"] = pulses;
          rows.append(row);
        }
        return rows;
      },
      py::arg("amplitudes"), py::arg("rabi_frequency_hz") = 5e6,
      "Per experiment: total angles, global sign and (channel, angle, duration_s) pulses.");
  m.def(
      "rwa_fidelity",
      [](const HamiltonianParams& h, Channel ch, double angle) {
        py::gil_scoped_release release;
        return rwa_fidelity(h, PulseSegment{ch, angle});
      },
      py::arg("params"), py::arg("channel"), py::arg("angle"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the sorkin-lab command line in-process; returns (exit_code, stdout, stderr).");
}
