// SPDX-License-Identifier: Apache-2.0
//
// onebit: capacity of one-bit transceiver arrays in Rayleigh fading
// ------------------------------------------------------------------------

#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>

#include "onebit/replica.hpp"

namespace onebit::detail {

struct FixedPointState {
  double q = 0.0;
  double E = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
  bool saturated = false;
};

// Damped iteration q <- q + lambda (q_update(E(q)) - q). Lambda halves whenever
// successive defects change sign. At exit (q, E) satisfy E = e_of_q(q) exactly and
// residual = |q - q_update(E)|.
template <class EMap>
FixedPointState damped_fixed_point(double q0, EMap&& e_of_q, const SolverOptions& opts,
                                   const NormalIntegrator& integ) {
  double q = q0;
  double lambda = opts.damping;
  double previous_defect = 0.0;
  double E = 0.0;
  double defect = 0.0;
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    E = e_of_q(q);
    const double q_next = q_update(E, integ);
    defect = q_next - q;
    if (std::abs(defect) <= opts.tol) {
      const bool boundary = q > 1.0 - opts.q_eps;
      return {boundary ? 1.0 : q, E, std::abs(defect), it, boundary};
    }
    if (defect * previous_defect < 0.0) lambda = std::max(0.5 * lambda, 1.0 / 64.0);
    previous_defect = defect;
    q += lambda * defect;
    if (q > 1.0 - opts.q_eps) return {1.0, E, std::abs(defect), it, true};
  }
  std::ostringstream os;
  os.precision(10);
  os << "saddle-point iteration did not converge after " << opts.max_iter
     << " iterations (q = " << q << ", E = " << E << ", residual = " << std::abs(defect) << ")";
  throw ConvergenceError(os.str(), q, E, std::abs(defect), opts.max_iter);
}

}  // namespace onebit::detail
