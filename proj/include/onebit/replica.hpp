// SPDX-License-Identifier: Apache-2.0
//
// onebit: capacity of one-bit transceiver arrays in Rayleigh fading
// ------------------------------------------------------------------------

#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include "onebit/math_kernel.hpp"

namespace onebit {

/// Operating point: linear SNR rho >= 0 and receive/transmit ratio alpha = N/M > 0.
class SystemPoint {
 public:
  /// Throws std::domain_error unless rho >= 0, alpha > 0, both finite.
  SystemPoint(double rho, double alpha);

  static SystemPoint from_db(double snr_db, double alpha);

  double rho() const { return rho_; }
  double alpha() const { return alpha_; }

 private:
  double rho_;
  double alpha_;
};

/// Replica-symmetric fixed point of the overlap equations.
struct SaddleSolution {
  double q = 0.0;  ///< overlap, in [0, 1]
  double E = 0.0;  ///< conjugate parameter
  double A = 0.0;  ///< effective amplitude sqrt(rho / (1 + rho (1 - q)))
  double residual = 0.0;
  std::size_t iterations = 0;
  bool saturated = false;  ///< the boundary solution q = 1 governs

  // Diagnostics from the two-start solve.
  bool ambiguous = false;  ///< two distinct interior fixed points were found
  double alternate_q = std::numeric_limits<double>::quiet_NaN();
  double alternate_value = std::numeric_limits<double>::quiet_NaN();
};

struct CapacityResult {
  double c_avg = 0.0;      ///< bits per transmitter per real channel use
  SaddleSolution saddle;
  bool clipped = false;    ///< the min(., 1) was active
  double unclipped = 0.0;  ///< value of the formula before the min; 1 when saturated
};

struct SolverOptions {
  double damping = 0.5;
  double tol = 1e-12;
  std::size_t max_iter = 10'000;
  double q_eps = 1e-8;
  double second_start = 0.99;
  bool two_starts = true;
  double distinct_q = 1e-6;
};

/// Raised when the damped iteration runs out of iterations.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double q, double E, double residual,
                   std::size_t iterations)
      : std::runtime_error(what), q_(q), E_(E), residual_(residual), iterations_(iterations) {}

  double last_q() const { return q_; }
  double last_E() const { return E_; }
  double residual() const { return residual_; }
  std::size_t iterations() const { return iterations_; }

 private:
  double q_, E_, residual_;
  std::size_t iterations_;
};

/// e_update was asked for q = 1, where the saddle sits on the boundary.
class BoundaryError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// c(rho) = 1 - E_z[H2(Q(sqrt(rho) z))], capacity of one transceiver pair.
double single_transceiver_capacity(double rho,
                                   const NormalIntegrator& integ = default_integrator());

/// sqrt(rho / (1 + rho (1 - q))).
double a_of_q(const SystemPoint& point, double q);

/// q = E_z[tanh(sqrt(E) z + E)].
double q_update(double E, const NormalIntegrator& integ = default_integrator());

/// 1 - q_update(E), computed directly so it keeps relative accuracy near q = 1.
double overlap_complement(double E, const NormalIntegrator& integ = default_integrator());

/// Conjugate-parameter update for a given overlap, 0 <= q < 1.
double e_update(const SystemPoint& point, double q,
                const NormalIntegrator& integ = default_integrator());

/// Value of the capacity formula at (q, E) before the min with 1.
double capacity_expression(const SystemPoint& point, double q, double E,
                           const NormalIntegrator& integ = default_integrator());

/// Damped iteration from a single starting overlap.
SaddleSolution iterate_saddle(const SystemPoint& point, double q0,
                              const SolverOptions& opts = {},
                              const NormalIntegrator& integ = default_integrator());

/// Starting overlap min(0.9, 2 alpha rho / ((1 + rho) pi)).
double initial_overlap(const SystemPoint& point);

/// Two-start solve; when the starts disagree the smaller-capacity candidate wins.
SaddleSolution solve_saddle(const SystemPoint& point, const SolverOptions& opts = {},
                            const NormalIntegrator& integ = default_integrator());

CapacityResult capacity(const SystemPoint& point, const SolverOptions& opts = {},
                        const NormalIntegrator& integ = default_integrator());

/// Capacity of the I-Q (complex) model: twice the real-signal capacity.
double capacity_complex(const SystemPoint& point, const SolverOptions& opts = {},
                        const NormalIntegrator& integ = default_integrator());

namespace detail {

/// alpha A^2/(pi sqrt(2 pi)) * int exp(-(A^2 q + 1/2) z^2) / Q(A sqrt(q) z) dz
/// for given A^2 and q (q may equal 1).
double conjugate_integral(double alpha, double a_squared, double q, const NormalIntegrator& integ);

/// E_z[log2 cosh(E + sqrt(E) z)].
double expected_log2_cosh(double E, const NormalIntegrator& integ);

}  // namespace detail

}  // namespace onebit
