// SPDX-License-Identifier: Apache-2.0
//
// onebit: capacity of one-bit transceiver arrays in Rayleigh fading
// ------------------------------------------------------------------------

#pragma once

#include <string>
#include <string_view>

#include "onebit/replica.hpp"

namespace onebit {

enum class Regime { HighSnr, LowSnr, LargeAlpha, SmallAlpha };

std::string_view to_string(Regime r);

/// Closed-form or reduced approximation of the capacity in one limiting regime.
/// The validity hint is advisory; approximations are evaluated anywhere.
struct RegimeApprox {
  Regime regime;
  double c_avg;
  std::string validity_hint;
};

/// Interior solution of the noise-free (rho -> infinity) system.
struct HighSnrSolution {
  double q = 0.0;
  double E = 0.0;
  double unclipped = 0.0;  ///< capacity formula before min(., 1); 1 when saturated
  bool saturated = false;
  std::size_t iterations = 0;
};

HighSnrSolution solve_high_snr(double alpha, const SolverOptions& opts = {},
                               const NormalIntegrator& integ = default_integrator());

/// Noise-free capacity: saturates at 1 for alpha above saturation_alpha().
RegimeApprox high_snr_capacity(double alpha, const SolverOptions& opts = {},
                               const NormalIntegrator& integ = default_integrator());

/// Smallest alpha at which the noise-free capacity reaches 1 (about 1.245).
double saturation_alpha(const NormalIntegrator& integ = default_integrator());

/// Second-order expansion in rho.
RegimeApprox low_snr_capacity(const SystemPoint& point);

/// E in the alpha -> infinity limit (q -> 1, A -> sqrt(rho)).
double large_alpha_e(const SystemPoint& point,
                     const NormalIntegrator& integ = default_integrator());

/// E / ln 2 - E_z[log2 cosh(E + sqrt(E) z)], the q = 1 capacity formula before clipping.
/// Monotone increasing in E from 0 towards 1.
double large_alpha_expression(double E, const NormalIntegrator& integ = default_integrator());

RegimeApprox large_alpha_capacity(const SystemPoint& point,
                                  const NormalIntegrator& integ = default_integrator());

/// First-order in alpha with the quadratic correction.
RegimeApprox small_alpha_capacity(const SystemPoint& point,
                                  const NormalIntegrator& integ = default_integrator());

}  // namespace onebit
