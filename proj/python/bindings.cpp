// SPDX-License-Identifier: Apache-2.0
#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "delaykit/channel.hpp"
#include "delaykit/cli.hpp"
#include "delaykit/fbl.hpp"
#include "delaykit/ibl.hpp"
#include "delaykit/mc.hpp"
#include "delaykit/specfun.hpp"
#include "delaykit/validate.hpp"

namespace py = pybind11;
using namespace delaykit;

namespace {

py::array_t<double> to_array(const mc::EmpiricalDistribution& d) {
  const auto& s = d.sorted_samples();
  py::array_t<double> out(static_cast<py::ssize_t>(s.size()));
  std::copy(s.begin(), s.end(), out.mutable_data());
  return out;
}

MomentMethod method_from(const std::string& name) {
  if (name == "theorem1") return MomentMethod::theorem1;
  if (name == "theorem2") return MomentMethod::theorem2;
  throw py::value_error("method must be 'theorem1' or 'theorem2'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Delay analysis core";

  py::class_<ChannelModel>(m, "ChannelModel")
      .def(py::init([](int antennas, double avg_snr) {
             ChannelModel c{antennas, avg_snr};
             c.validate();
             return c;
           }),
           py::arg("antennas") = 8, py::arg("avg_snr") = 10.0)
      .def_readwrite("antennas", &ChannelModel::antennas)
      .def_readwrite("avg_snr", &ChannelModel::avg_snr);

  py::class_<LinkConfig>(m, "LinkConfig")
      .def(py::init([](double bits, double bandwidth_hz) {
             LinkConfig c{bits, bandwidth_hz};
             c.validate();
             return c;
           }),
           py::arg("payload_bits") = 1000.0, py::arg("bandwidth_hz") = 200e3)
      .def_readwrite("payload_bits", &LinkConfig::payload_bits)
      .def_readwrite("bandwidth_hz", &LinkConfig::bandwidth_hz);

  py::class_<FblConfig>(m, "FblConfig")
      .def(py::init([](double bits, double bandwidth_hz, double bler) {
             FblConfig c{bits, bandwidth_hz, bler};
             c.validate();
             return c;
           }),
           py::arg("payload_bits") = 200.0, py::arg("bandwidth_hz") = 200e3, py::arg("bler") = 1e-7)
      .def_readwrite("payload_bits", &FblConfig::payload_bits)
      .def_readwrite("bandwidth_hz", &FblConfig::bandwidth_hz)
      .def_readwrite("bler", &FblConfig::bler);

  py::class_<SeriesParams>(m, "SeriesParams")
      .def(py::init([](int terms, double tol) {
             SeriesParams s{terms, tol};
             s.validate();
             return s;
           }),
           py::arg("lambert_terms") = 20, py::arg("early_stop_tol") = 1e-14)
      .def_readwrite("lambert_terms", &SeriesParams::lambert_terms)
      .def_readwrite("early_stop_tol", &SeriesParams::early_stop_tol);

  py::class_<RateMoments>(m, "RateMoments")
      .def_readonly("m1", &RateMoments::m1)
      .def_readonly("m2", &RateMoments::m2)
      .def_readonly("variance", &RateMoments::variance)
      .def_readonly("diagnostics", &RateMoments::diagnostics);

  py::class_<MomentReport>(m, "MomentReport")
      .def_readonly("mean_delay", &MomentReport::mean_delay)
      .def_readonly("jitter", &MomentReport::jitter)
      .def_readonly("heavy_tail", &MomentReport::heavy_tail)
      .def_readonly("jitter_clamped", &MomentReport::jitter_clamped)
      .def_readonly("diagnostics", &MomentReport::diagnostics)
      .def_property_readonly("method", [](const MomentReport& r) { return std::string(to_string(r.method)); });

  m.def("gaussian_q", &specfun::gaussian_q, py::arg("x"));
  m.def("gaussian_q_inv", [](double p) { return specfun::gaussian_q_inv(p); }, py::arg("p"));
  m.def("regularized_lower_gamma", [](double s, double x) { return specfun::regularized_lower_gamma(s, x); });
  m.def("regularized_upper_gamma", [](double s, double x) { return specfun::regularized_upper_gamma(s, x); });
  m.def("lambert_w0", [](double x) { return specfun::lambert_w0(x); }, py::arg("x"));

  m.def("snr_cdf", &snr_cdf, py::arg("model"), py::arg("x"));
  m.def("snr_pdf", &snr_pdf, py::arg("model"), py::arg("x"));

  m.def("ibl_delay_cdf", &ibl::delay_cdf, py::arg("model"), py::arg("link"), py::arg("t"));
  m.def("ibl_delay_pdf", &ibl::delay_pdf, py::arg("model"), py::arg("link"), py::arg("t"));
  m.def("ibl_delay_violation", &ibl::delay_violation, py::arg("model"), py::arg("link"), py::arg("tau_th"));
  m.def("rate_moments_exact", [](const ChannelModel& c, double b) { return ibl::rate_moments_exact(c, {b}); },
        py::arg("model"), py::arg("log_b") = 1000.0);
  m.def("rate_moments_highsnr", &ibl::rate_moments_highsnr, py::arg("model"));
  m.def("ibl_delay_moments",
        [](const ChannelModel& c, const LinkConfig& l, const RateMoments& rm, const std::string& method) {
          return ibl::delay_moments(c, l, rm, method_from(method));
        },
        py::arg("model"), py::arg("link"), py::arg("rate_moments"), py::arg("method") = "theorem2");

  m.def("exact_delay_sample", [](double g, const FblConfig& c) { return fbl::exact_delay_sample(SnrSample{g}, c); },
        py::arg("gamma"), py::arg("config"));
  m.def("delay_highsnr", [](double g, const FblConfig& c) { return fbl::delay_highsnr(SnrSample{g}, c); },
        py::arg("gamma"), py::arg("config"));
  m.def("delay_upper", [](double g, const FblConfig& c) { return fbl::delay_upper(SnrSample{g}, c); },
        py::arg("gamma"), py::arg("config"));
  m.def("approx_validity_threshold", &fbl::approx_validity_threshold, py::arg("config"));
  m.def("fbl_delay_cdf", &fbl::fbl_delay_cdf, py::arg("model"), py::arg("config"), py::arg("series"), py::arg("t"));
  m.def("fbl_delay_pdf", &fbl::fbl_delay_pdf, py::arg("model"), py::arg("config"), py::arg("series"), py::arg("t"));
  m.def("fbl_delay_cdf_highsnr", &fbl::fbl_delay_cdf_highsnr, py::arg("model"), py::arg("config"), py::arg("t"));
  m.def("fbl_delay_violation", &fbl::fbl_delay_violation, py::arg("model"), py::arg("config"), py::arg("tau_th"));
  m.def("fbl_delay_moments", &fbl::fbl_delay_moments, py::arg("model"), py::arg("config"), py::arg("rate_moments"));

  m.def("simulate_ibl",
        [](const ChannelModel& c, const LinkConfig& l, std::int64_t trials, std::uint64_t seed, int streams) {
          return to_array(mc::simulate_ibl(c, l, {trials, seed, streams}));
        },
        py::arg("model"), py::arg("link"), py::arg("trials") = 1'000'000, py::arg("seed") = 42, py::arg("streams") = 1,
        "Sorted per-draw Shannon delays in seconds.");
  m.def("simulate_fbl",
        [](const ChannelModel& c, const FblConfig& f, std::int64_t trials, std::uint64_t seed, int streams) {
          return to_array(mc::simulate_fbl(c, f, {trials, seed, streams}));
        },
        py::arg("model"), py::arg("config"), py::arg("trials") = 1'000'000, py::arg("seed") = 42,
        py::arg("streams") = 1, "Sorted per-draw finite-blocklength delays in seconds.");

  m.def("validate",
        [](std::int64_t trials, std::int64_t violation_trials, std::uint64_t seed, std::vector<int> criteria) {
          validate::ValidateOptions o;
          o.trials = trials;
          o.violation_trials = violation_trials;
          o.seed = seed;
          o.criteria = {criteria.begin(), criteria.end()};
          return validate::run_acceptance(o).to_json().dump();
        },
        py::arg("trials") = 100'000, py::arg("violation_trials") = 100'000, py::arg("seed") = 42,
        py::arg("criteria") = std::vector<int>{}, "Runs the acceptance checks; returns the JSON report.");

  m.def("run_cli",
        [](std::vector<std::string> args) {
          args.insert(args.begin(), "delaykit");
          std::ostringstream out, err;
          const int code = cli::run_cli(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command-line tool in process; returns (exit_code, stdout, stderr).");
}
