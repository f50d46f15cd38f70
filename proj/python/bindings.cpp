// SPDX-License-Identifier: Apache-2.0
//
// onebit: capacity of one-bit transceiver arrays in Rayleigh fading
// ------------------------------------------------------------------------

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "onebit/asymptotics.hpp"
#include "onebit/exact_finite.hpp"
#include "onebit/replica.hpp"
#include "onebit/sweep_contour.hpp"

namespace py = pybind11;
using namespace onebit;

namespace {

ChannelMatrix to_matrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty() || rows.front().empty()) throw std::invalid_argument("channel must be a non-empty n x m list");
  const std::size_t cols = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw std::invalid_argument("channel rows differ in length");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return ChannelMatrix(rows.size(), cols, std::move(flat));
}

ConditionalEntropy parse_conditional(const std::string& s) {
  if (s == "closed-form") return ConditionalEntropy::ClosedForm;
  if (s == "per-channel") return ConditionalEntropy::PerChannel;
  throw std::invalid_argument("conditional must be 'closed-form' or 'per-channel'");
}

// Flat view of a capacity result; the saddle fields are promoted.
py::dict result_dict(double rho, double alpha, const CapacityResult& r) {
  py::dict d;
  d["rho"] = rho;
  d["alpha"] = alpha;
  d["c_avg"] = r.c_avg;
  d["q"] = r.saddle.q;
  d["E"] = r.saddle.E;
  d["A"] = r.saddle.A;
  d["saturated"] = r.saddle.saturated;
  d["clipped"] = r.clipped;
  d["unclipped"] = r.unclipped;
  d["residual"] = r.saddle.residual;
  d["iterations"] = r.saddle.iterations;
  d["ambiguous"] = r.saddle.ambiguous;
  return d;
}

py::dict approx_dict(const RegimeApprox& a) {
  py::dict d;
  d["regime"] = std::string(to_string(a.regime));
  d["c_avg"] = a.c_avg;
  d["validity"] = a.validity_hint;
  return d;
}

py::dict contour_dict(const ContourPoint& p) {
  py::dict d;
  d["c_target"] = p.c_target;
  d["alpha"] = p.alpha;
  d["rho"] = p.rho ? py::object(py::float_(*p.rho)) : py::none();
  d["c_achieved"] = p.c_achieved;
  d["rho_approx"] = p.rho_approx ? py::object(py::float_(*p.rho_approx)) : py::none();
  d["note"] = p.note;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Capacity of one-bit transceiver arrays in Rayleigh fading";

  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);
  py::register_exception<BoundaryError>(m, "BoundaryError", PyExc_ValueError);
  py::register_exception<FeasibilityError>(m, "FeasibilityError", PyExc_ValueError);

  m.def("single_transceiver_capacity", [](double rho) { return single_transceiver_capacity(rho); },
        py::arg("rho"), "Capacity of one transceiver pair, bits per channel use.");

  m.def(
      "capacity",
      [](double rho, double alpha) { return result_dict(rho, alpha, capacity(SystemPoint(rho, alpha))); },
      py::arg("rho"), py::arg("alpha"),
      "Large-system capacity per transmitter at linear SNR rho and ratio alpha = N/M.");
  m.def(
      "capacity_db",
      [](double snr_db, double alpha) {
        const auto p = SystemPoint::from_db(snr_db, alpha);
        return result_dict(p.rho(), alpha, capacity(p));
      },
      py::arg("snr_db"), py::arg("alpha"));
  m.def("capacity_complex", [](double rho, double alpha) { return capacity_complex(SystemPoint(rho, alpha)); },
        py::arg("rho"), py::arg("alpha"), "I-Q capacity, twice the real-signal value.");

  m.def("saturation_alpha", [] { return saturation_alpha(); },
        "Smallest alpha at which the noise-free capacity reaches 1.");
  m.def("high_snr_capacity", [](double alpha) { return approx_dict(high_snr_capacity(alpha)); }, py::arg("alpha"));
  m.def("low_snr_capacity", [](double rho, double alpha) { return approx_dict(low_snr_capacity(SystemPoint(rho, alpha))); },
        py::arg("rho"), py::arg("alpha"));
  m.def("large_alpha_capacity",
        [](double rho, double alpha) { return approx_dict(large_alpha_capacity(SystemPoint(rho, alpha))); },
        py::arg("rho"), py::arg("alpha"));
  m.def("small_alpha_capacity",
        [](double rho, double alpha) { return approx_dict(small_alpha_capacity(SystemPoint(rho, alpha))); },
        py::arg("rho"), py::arg("alpha"));

  m.def(
      "output_distribution",
      [](const std::vector<std::vector<double>>& channel, double rho) {
        return output_distribution(to_matrix(channel), rho);
      },
      py::arg("channel"), py::arg("rho"),
      "Output probabilities for an n x m channel under uniform inputs; bit k set means receiver k reads -1.");
  m.def(
      "exact_capacity",
      [](std::size_t m_tx, std::size_t n_rx, double rho, std::size_t channels, std::uint64_t seed,
         const std::string& conditional, std::size_t output_samples, unsigned threads) {
        ExactOptions opts;
        opts.conditional = parse_conditional(conditional);
        opts.output_samples = output_samples;
        opts.threads = threads;
        ExactCapacityEstimate est;
        {
          py::gil_scoped_release release;
          est = exact_capacity(FiniteSystem(m_tx, n_rx, rho), channels, seed, opts);
        }
        py::dict d;
        d["mean"] = est.mean;
        d["std_err"] = est.std_err;
        d["channels"] = est.num_channels;
        d["seed"] = est.seed;
        d["method"] = std::string(to_string(est.method));
        d["conditional"] = std::string(to_string(est.conditional));
        d["rng"] = std::string(est.rng_algorithm);
        d["per_channel"] = est.per_channel;
        return d;
      },
      py::arg("m"), py::arg("n"), py::arg("rho"), py::arg("channels") = 100, py::arg("seed") = 1,
      py::arg("conditional") = "closed-form", py::arg("output_samples") = 4000, py::arg("threads") = 0,
      "Finite-size capacity per transmitter averaged over Rayleigh channel draws.");

  m.def(
      "sweep",
      [](const std::vector<double>& rho_grid, const std::vector<double>& alpha_grid, unsigned threads) {
        std::vector<SweepCell> cells;
        {
          py::gil_scoped_release release;
          cells = sweep(rho_grid, alpha_grid, {{}, threads});
        }
        py::list out;
        for (const auto& c : cells) {
          if (c.ok()) {
            auto d = result_dict(c.rho, c.alpha, *c.result);
            d["error"] = py::none();
            out.append(d);
          } else {
            py::dict d;
            d["rho"] = c.rho;
            d["alpha"] = c.alpha;
            d["c_avg"] = py::none();
            d["error"] = c.error;
            out.append(d);
          }
        }
        return out;
      },
      py::arg("rho_grid"), py::arg("alpha_grid"), py::arg("threads") = 0,
      "Capacity over the cross product, alpha outer; failed cells carry an error message.");

  m.def(
      "contour_point",
      [](double c_target, double alpha, double tol, bool with_approx) {
        ContourOptions opts;
        opts.tol = tol;
        opts.with_approx = with_approx;
        return contour_dict(contour_point(c_target, alpha, opts));
      },
      py::arg("c_target"), py::arg("alpha"), py::arg("tol") = 1e-4, py::arg("with_approx") = false);
  m.def(
      "contour",
      [](double c_target, double alpha_lo, double alpha_hi, std::size_t steps, bool with_approx) {
        ContourOptions opts;
        opts.with_approx = with_approx;
        std::vector<ContourPoint> pts;
        {
          py::gil_scoped_release release;
          pts = contour(c_target, alpha_lo, alpha_hi, steps, opts);
        }
        py::list out;
        for (const auto& p : pts) out.append(contour_dict(p));
        return out;
      },
      py::arg("c_target"), py::arg("alpha_lo"), py::arg("alpha_hi"), py::arg("steps"),
      py::arg("with_approx") = false);

  m.def("e_for_capacity", [](double c) { return e_for_capacity(c); }, py::arg("c_target"));
  m.def("quadratic_e", &quadratic_e, py::arg("alpha"), py::arg("rho"));
  m.def("snr_for_contour_approx", &snr_for_contour_approx, py::arg("alpha"), py::arg("e_c"));
  m.def(
      "fit_quadratic_e",
      [](double rho_max, std::size_t samples) {
        const auto f = fit_quadratic_e(rho_max, samples);
        py::dict d;
        d["quadratic"] = f.quadratic;
        d["linear"] = f.linear;
        d["rho_max"] = f.rho_max;
        d["samples"] = f.samples;
        d["max_rel_error_fitted"] = f.max_rel_error_fitted;
        d["max_rel_error_fixed"] = f.max_rel_error_fixed;
        return d;
      },
      py::arg("rho_max") = 1.5, py::arg("samples") = 150);
}
