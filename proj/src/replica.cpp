// SPDX-License-Identifier: Apache-2.0
//
// onebit: capacity of one-bit transceiver arrays in Rayleigh fading
// ------------------------------------------------------------------------

#include "onebit/replica.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "fixed_point.hpp"

namespace onebit {

SystemPoint::SystemPoint(double rho, double alpha) : rho_(rho), alpha_(alpha) {
  if (!std::isfinite(rho) || rho < 0.0) throw std::domain_error("SystemPoint: rho must be finite and >= 0");
  if (!std::isfinite(alpha) || !(alpha > 0.0))
    throw std::domain_error("SystemPoint: alpha must be finite and > 0");
}

SystemPoint SystemPoint::from_db(double snr_db, double alpha) {
  return SystemPoint(std::pow(10.0, snr_db / 10.0), alpha);
}

double single_transceiver_capacity(double rho, const NormalIntegrator& integ) {
  if (!(rho >= 0.0)) throw std::domain_error("single_transceiver_capacity: rho must be >= 0");
  if (rho == 0.0) return 0.0;
  if (std::isinf(rho)) return 1.0;
  const double s = std::sqrt(rho);
  return 1.0 - integ.expect_localized([s](double z) { return binary_entropy_of_q(s * z); }, 0.0,
                                      1.0 / s);
}

double a_of_q(const SystemPoint& point, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("a_of_q: q outside [0, 1]");
  const double rho = point.rho();
  return std::sqrt(rho / (1.0 + rho * (1.0 - q)));
}

double overlap_complement(double E, const NormalIntegrator& integ) {
  if (!(E >= 0.0)) throw std::domain_error("overlap_complement: E must be >= 0");
  if (E == 0.0) return 1.0;
  if (std::isinf(E)) return 0.0;
  const double s = std::sqrt(E);
  // 1 - tanh(u) = 2 / (1 + e^{2u})
  return integ.expect_localized(
      [s, E](double z) {
        const double u = s * z + E;
        if (u >= 0.0) {
          const double e = std::exp(-2.0 * u);
          return 2.0 * e / (1.0 + e);
        }
        return 2.0 / (1.0 + std::exp(2.0 * u));
      },
      -s, 1.0 / s);
}

double q_update(double E, const NormalIntegrator& integ) {
  if (!(E >= 0.0)) throw std::domain_error("q_update: E must be >= 0");
  if (E == 0.0) return 0.0;
  if (std::isinf(E)) return 1.0;
  if (E < 1.0) {
    const double s = std::sqrt(E);
    return integ.expect_localized([s, E](double z) { return std::tanh(s * z + E); }, -s, 1.0 / s);
  }
  return 1.0 - overlap_complement(E, integ);
}

namespace detail {

double conjugate_integral(double alpha, double a_squared, double q, const NormalIntegrator& integ) {
  if (a_squared == 0.0) return 0.0;
  // Substituting z = s / sqrt(1 + A^2 q) maps exp(-(A^2 q + 1/2) z^2) / Q(A sqrt(q) z) onto
  // sqrt(2 pi) phi(s) / q_scaled(b s) with b = sqrt(A^2 q / (1 + A^2 q)) < 1, which is
  // smooth and at most linearly growing in s.
  const double k = a_squared * q;
  const double b = std::sqrt(k / (1.0 + k));
  const double mean_ratio = integ.expect([b](double s) { return 1.0 / q_scaled(b * s); });
  return alpha * a_squared / (kPi * std::sqrt(1.0 + k)) * mean_ratio;
}

double expected_log2_cosh(double E, const NormalIntegrator& integ) {
  if (E == 0.0) return 0.0;
  const double s = std::sqrt(E);
  return integ.expect_localized([s, E](double z) { return log2_cosh(E + s * z); }, -s, 1.0 / s);
}

}  // namespace detail

double e_update(const SystemPoint& point, double q, const NormalIntegrator& integ) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::domain_error("e_update: q outside [0, 1)");
  if (q == 1.0) throw BoundaryError("e_update: q = 1 is the boundary saddle point");
  const double A = a_of_q(point, q);
  return detail::conjugate_integral(point.alpha(), A * A, q, integ);
}

double capacity_expression(const SystemPoint& point, double q, double E,
                           const NormalIntegrator& integ) {
  const double rho = point.rho();
  const double a2 = rho / (1.0 + rho * (1.0 - q));
  const double c_rho = single_transceiver_capacity(rho, integ);
  const double c_eff = single_transceiver_capacity(a2 * q, integ);
  return point.alpha() * (c_rho - c_eff) + E * (1.0 + q) / (2.0 * kLn2) -
         detail::expected_log2_cosh(E, integ);
}

double initial_overlap(const SystemPoint& point) {
  const double rho = point.rho();
  return std::min(0.9, 2.0 * point.alpha() * rho / ((1.0 + rho) * kPi));
}

SaddleSolution iterate_saddle(const SystemPoint& point, double q0, const SolverOptions& opts,
                              const NormalIntegrator& integ) {
  if (!(q0 >= 0.0 && q0 < 1.0)) throw std::domain_error("iterate_saddle: q0 outside [0, 1)");
  SaddleSolution sol;
  if (point.rho() == 0.0) return sol;
  const auto state = detail::damped_fixed_point(
      q0, [&](double q) { return e_update(point, q, integ); }, opts, integ);
  sol.q = state.q;
  sol.E = state.E;
  sol.A = a_of_q(point, state.q);
  sol.residual = state.residual;
  sol.iterations = state.iterations;
  sol.saturated = state.saturated;
  return sol;
}

namespace {

struct Candidate {
  SaddleSolution solution;
  double value = 0.0;
};

Candidate evaluate(const SystemPoint& point, SaddleSolution s, const NormalIntegrator& integ) {
  const double value = s.saturated ? 1.0 : capacity_expression(point, s.q, s.E, integ);
  return {s, value};
}

Candidate solve_and_select(const SystemPoint& point, const SolverOptions& opts,
                           const NormalIntegrator& integ) {
  if (point.rho() == 0.0) return {};

  std::vector<double> starts{initial_overlap(point)};
  if (opts.two_starts) starts.push_back(opts.second_start);

  std::vector<Candidate> found;
  std::optional<ConvergenceError> first_failure;
  for (double q0 : starts) {
    try {
      found.push_back(evaluate(point, iterate_saddle(point, q0, opts, integ), integ));
    } catch (const ConvergenceError& e) {
      if (!first_failure) first_failure = e;
    }
  }
  if (found.empty()) throw *first_failure;
  if (found.size() == 1) return found.front();

  const Candidate& a = found[0];
  const Candidate& b = found[1];
  if (a.solution.saturated && b.solution.saturated) return a;
  if (!a.solution.saturated && !b.solution.saturated &&
      std::abs(a.solution.q - b.solution.q) <= opts.distinct_q)
    return a;

  Candidate chosen = b.value < a.value ? b : a;
  const Candidate& other = b.value < a.value ? a : b;
  if (!a.solution.saturated && !b.solution.saturated) chosen.solution.ambiguous = true;
  chosen.solution.alternate_q = other.solution.q;
  chosen.solution.alternate_value = other.value;
  return chosen;
}

}  // namespace

SaddleSolution solve_saddle(const SystemPoint& point, const SolverOptions& opts,
                            const NormalIntegrator& integ) {
  return solve_and_select(point, opts, integ).solution;
}

CapacityResult capacity(const SystemPoint& point, const SolverOptions& opts,
                        const NormalIntegrator& integ) {
  const Candidate c = solve_and_select(point, opts, integ);
  CapacityResult result;
  result.saddle = c.solution;
  result.unclipped = c.value;
  result.clipped = c.solution.saturated || c.value >= 1.0;
  result.c_avg = result.clipped ? 1.0 : std::max(0.0, c.value);
  return result;
}

double capacity_complex(const SystemPoint& point, const SolverOptions& opts,
                        const NormalIntegrator& integ) {
  return 2.0 * capacity(point, opts, integ).c_avg;
}

}  // namespace onebit
