// SPDX-License-Identifier: Apache-2.0
//
// onebit: capacity of one-bit transceiver arrays in Rayleigh fading
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "onebit/replica.hpp"

namespace onebit {

/// n evenly spaced values from lo to hi inclusive (n = 1 gives {lo}).
std::vector<double> linspace(double lo, double hi, std::size_t n);
/// n log-spaced values from lo to hi inclusive; lo, hi > 0.
std::vector<double> logspace(double lo, double hi, std::size_t n);

struct SweepCell {
  double rho = 0.0;
  double alpha = 0.0;
  std::optional<CapacityResult> result;  ///< empty when the solver failed
  std::string error;                     ///< failure message for this cell

  bool ok() const { return result.has_value(); }
};

struct RunOptions {
  SolverOptions solver{};
  unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// Cross product with alpha as the outer index. Solver failures are recorded per cell.
std::vector<SweepCell> sweep(const std::vector<double>& rho_grid,
                             const std::vector<double>& alpha_grid, const RunOptions& opts = {},
                             const NormalIntegrator& integ = default_integrator());

struct ContourPoint {
  double alpha = 0.0;
  double c_target = 0.0;
  std::optional<double> rho;         ///< empty: no SNR reaches the target at this alpha
  double c_achieved = 0.0;           ///< capacity at rho (when found)
  std::optional<double> rho_approx;  ///< closed-form estimate, when requested and defined
  std::string note;                  ///< reason for a missing value
};

struct ContourOptions {
  double tol = 1e-4;         ///< |capacity - c_target| at the returned rho
  double rho_lo = 1e-4;      ///< initial bracket, widened by decades as needed
  double rho_hi = 1e4;
  double rho_floor = 1e-10;  ///< widening limits
  double rho_ceiling = 1e10;
  bool with_approx = false;
  RunOptions run{};
};

/// SNR on the c_target contour at one alpha, by bisection in log rho.
ContourPoint contour_point(double c_target, double alpha, const ContourOptions& opts = {},
                           const NormalIntegrator& integ = default_integrator());

/// `steps` alphas evenly spaced over [alpha_lo, alpha_hi], returned in increasing alpha.
std::vector<ContourPoint> contour(double c_target, double alpha_lo, double alpha_hi,
                                  std::size_t steps, const ContourOptions& opts = {},
                                  const NormalIntegrator& integ = default_integrator());

/// E at which the large-alpha capacity expression equals c_target, 0 < c_target < 1.
double e_for_capacity(double c_target, const NormalIntegrator& integ = default_integrator());

/// Coefficients of the quadratic conjugate-parameter model E ~ (alpha/pi)(a rho^2 + b rho).
inline constexpr double kQuadraticCoeff = -0.3;
inline constexpr double kLinearCoeff = 1.8;

/// (alpha / pi)(-0.3 rho^2 + 1.8 rho).
double quadratic_e(double alpha, double rho);

/// Smaller root of the quadratic model solved for rho: 3 - sqrt(9 - 10 pi e_c / (3 alpha)).
/// Throws std::domain_error when the discriminant is negative (alpha too small for the contour).
double snr_for_contour_approx(double alpha, double e_c);

struct QuadraticFit {
  double quadratic = 0.0;  ///< fitted a
  double linear = 0.0;     ///< fitted b
  double rho_max = 0.0;
  std::size_t samples = 0;
  double max_rel_error_fitted = 0.0;  ///< of the fitted model against the integral
  double max_rel_error_fixed = 0.0;   ///< of the fixed (-0.3, 1.8) model
};

/// Least-squares fit of pi E / alpha = a rho^2 + b rho against the large-alpha
/// conjugate integral on `samples` evenly spaced rho in (0, rho_max].
QuadraticFit fit_quadratic_e(double rho_max = 1.5, std::size_t samples = 150,
                             const NormalIntegrator& integ = default_integrator());

}  // namespace onebit
