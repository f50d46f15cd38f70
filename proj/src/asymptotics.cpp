// SPDX-License-Identifier: Apache-2.0
//
// onebit: capacity of one-bit transceiver arrays in Rayleigh fading
// ------------------------------------------------------------------------

#include "onebit/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fixed_point.hpp"

namespace onebit {

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::HighSnr: return "high-snr";
    case Regime::LowSnr: return "low-snr";
    case Regime::LargeAlpha: return "large-alpha";
    case Regime::SmallAlpha: return "small-alpha";
  }
  return "unknown";
}

namespace {

void require_alpha(double alpha) {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) throw std::domain_error("alpha must be finite and > 0");
}

// E for rho -> infinity, where A^2 = 1 / (1 - q).
double e_update_noise_free(double alpha, double q, const NormalIntegrator& integ) {
  if (q >= 1.0) return std::numeric_limits<double>::infinity();
  return detail::conjugate_integral(alpha, 1.0 / (1.0 - q), q, integ);
}

}  // namespace

HighSnrSolution solve_high_snr(double alpha, const SolverOptions& opts,
                               const NormalIntegrator& integ) {
  require_alpha(alpha);
  const double q0 = std::min(0.9, 2.0 * alpha / kPi);
  const auto state = detail::damped_fixed_point(
      q0, [&](double q) { return e_update_noise_free(alpha, q, integ); }, opts, integ);

  HighSnrSolution sol;
  sol.q = state.q;
  sol.E = state.E;
  sol.saturated = state.saturated;
  sol.iterations = state.iterations;
  if (state.saturated) {
    sol.unclipped = 1.0;
    return sol;
  }
  const double q = state.q;
  const double E = state.E;
  sol.unclipped = alpha * (1.0 - single_transceiver_capacity(q / (1.0 - q), integ)) +
                  E * (1.0 + q) / (2.0 * kLn2) - detail::expected_log2_cosh(E, integ);
  return sol;
}

RegimeApprox high_snr_capacity(double alpha, const SolverOptions& opts,
                               const NormalIntegrator& integ) {
  const auto sol = solve_high_snr(alpha, opts, integ);
  return {Regime::HighSnr, std::min(1.0, sol.unclipped), "rho >= 10 (noise-free limit)"};
}

double saturation_alpha(const NormalIntegrator& integ) {
  // The interior noise-free solution exists up to alpha ~ 1.49.
  double lo = 1.0;
  double hi = 1.4;
  auto excess = [&](double alpha) { return solve_high_snr(alpha, {}, integ).unclipped - 1.0; };
  if (!(excess(lo) < 0.0) || !(excess(hi) > 0.0))
    throw std::runtime_error("saturation_alpha: root not bracketed in [1.0, 1.4]");
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

RegimeApprox low_snr_capacity(const SystemPoint& point) {
  const double rho = point.rho();
  const double alpha = point.alpha();
  const double c = alpha * rho / (kPi * kLn2) -
                   (alpha * alpha + (kPi - 1.0) * alpha) / (kPi * kPi * kLn2) * rho * rho;
  return {Regime::LowSnr, c, "alpha <= 0.4/rho (rho <= 0.1)"};
}

double large_alpha_e(const SystemPoint& point, const NormalIntegrator& integ) {
  return detail::conjugate_integral(point.alpha(), point.rho(), 1.0, integ);
}

double large_alpha_expression(double E, const NormalIntegrator& integ) {
  if (!(E >= 0.0)) throw std::domain_error("large_alpha_expression: E must be >= 0");
  return E / kLn2 - detail::expected_log2_cosh(E, integ);
}

RegimeApprox large_alpha_capacity(const SystemPoint& point, const NormalIntegrator& integ) {
  if (point.rho() == 0.0) return {Regime::LargeAlpha, 0.0, "alpha >= 5"};
  const double E = large_alpha_e(point, integ);
  return {Regime::LargeAlpha, std::min(1.0, large_alpha_expression(E, integ)), "alpha >= 5"};
}

RegimeApprox small_alpha_capacity(const SystemPoint& point, const NormalIntegrator& integ) {
  const double rho = point.rho();
  const double alpha = point.alpha();
  const double c = single_transceiver_capacity(rho, integ) * alpha -
                   rho * rho / (kPi * kPi * (1.0 + rho) * (1.0 + rho) * kLn2) * alpha * alpha;
  return {Regime::SmallAlpha, c, "alpha <= 1"};
}

}  // namespace onebit
