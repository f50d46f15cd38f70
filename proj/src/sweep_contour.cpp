// SPDX-License-Identifier: Apache-2.0
//
// onebit: capacity of one-bit transceiver arrays in Rayleigh fading
// ------------------------------------------------------------------------

#include "onebit/sweep_contour.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "onebit/asymptotics.hpp"
#include "parallel.hpp"

namespace onebit {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) v[i] = lo + step * static_cast<double>(i);
  v.back() = hi;
  return v;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0 && hi > 0.0)) throw std::domain_error("logspace: bounds must be > 0");
  auto v = linspace(std::log(lo), std::log(hi), n);
  for (auto& x : v) x = std::exp(x);
  if (n > 0) {
    v.front() = lo;
    v.back() = hi;
  }
  return v;
}

std::vector<SweepCell> sweep(const std::vector<double>& rho_grid,
                             const std::vector<double>& alpha_grid, const RunOptions& opts,
                             const NormalIntegrator& integ) {
  if (rho_grid.empty() || alpha_grid.empty()) throw std::invalid_argument("sweep: empty grid");
  std::vector<SweepCell> cells(rho_grid.size() * alpha_grid.size());
  for (std::size_t a = 0; a < alpha_grid.size(); ++a)
    for (std::size_t r = 0; r < rho_grid.size(); ++r) {
      auto& cell = cells[a * rho_grid.size() + r];
      cell.alpha = alpha_grid[a];
      cell.rho = rho_grid[r];
    }
  detail::parallel_for(cells.size(), opts.threads, [&](std::size_t i) {
    auto& cell = cells[i];
    try {
      cell.result = capacity(SystemPoint(cell.rho, cell.alpha), opts.solver, integ);
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
  });
  return cells;
}

ContourPoint contour_point(double c_target, double alpha, const ContourOptions& opts,
                           const NormalIntegrator& integ) {
  if (!(c_target > 0.0 && c_target < 1.0))
    throw std::domain_error("contour: c_target must lie in (0, 1)");
  ContourPoint pt;
  pt.alpha = alpha;
  pt.c_target = c_target;

  if (opts.with_approx) {
    try {
      pt.rho_approx = snr_for_contour_approx(alpha, e_for_capacity(c_target, integ));
    } catch (const std::domain_error&) {
    }
  }

  if (c_target >= alpha) {
    pt.note = "no solution: target not below alpha";
    return pt;
  }

  auto excess = [&](double rho) {
    return capacity(SystemPoint(rho, alpha), opts.run.solver, integ).c_avg - c_target;
  };

  double lo = opts.rho_lo;
  double hi = opts.rho_hi;
  double f_lo = excess(lo);
  while (f_lo > 0.0 && lo > opts.rho_floor) {
    hi = lo;
    lo /= 10.0;
    f_lo = excess(lo);
  }
  double f_hi = excess(hi);
  while (f_hi < 0.0 && hi < opts.rho_ceiling) {
    lo = hi;
    f_lo = f_hi;
    hi *= 10.0;
    f_hi = excess(hi);
  }
  if (f_lo > 0.0 || f_hi < 0.0) {
    pt.note = "no solution: target not reached for rho in bracket";
    return pt;
  }
  if (std::abs(f_lo) <= opts.tol || std::abs(f_hi) <= opts.tol) {
    const bool use_lo = std::abs(f_lo) <= std::abs(f_hi);
    pt.rho = use_lo ? lo : hi;
    pt.c_achieved = c_target + (use_lo ? f_lo : f_hi);
    return pt;
  }

  // Capacity is nondecreasing in rho, so the sign change is unique.
  double log_lo = std::log(lo);
  double log_hi = std::log(hi);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (log_lo + log_hi);
    const double rho = std::exp(mid);
    const double f = excess(rho);
    if (std::abs(f) <= opts.tol || log_hi - log_lo < 1e-14) {
      pt.rho = rho;
      pt.c_achieved = c_target + f;
      return pt;
    }
    if (f < 0.0)
      log_lo = mid;
    else
      log_hi = mid;
  }
  pt.note = "no solution: bisection stalled";
  return pt;
}

std::vector<ContourPoint> contour(double c_target, double alpha_lo, double alpha_hi,
                                  std::size_t steps, const ContourOptions& opts,
                                  const NormalIntegrator& integ) {
  if (steps == 0) throw std::invalid_argument("contour: steps must be >= 1");
  if (!(alpha_lo > 0.0 && alpha_hi >= alpha_lo))
    throw std::domain_error("contour: need 0 < alpha_lo <= alpha_hi");
  const auto alphas = linspace(alpha_lo, alpha_hi, steps);
  std::vector<ContourPoint> points(alphas.size());
  detail::parallel_for(alphas.size(), opts.run.threads, [&](std::size_t i) {
    try {
      points[i] = contour_point(c_target, alphas[i], opts, integ);
    } catch (const std::exception& e) {
      points[i].alpha = alphas[i];
      points[i].c_target = c_target;
      points[i].note = std::string("no solution: ") + e.what();
    }
  });
  return points;
}

double e_for_capacity(double c_target, const NormalIntegrator& integ) {
  if (!(c_target > 0.0 && c_target < 1.0))
    throw std::domain_error("e_for_capacity: c_target must lie in (0, 1)");
  double lo = 0.0;
  double hi = 1.0;
  while (large_alpha_expression(hi, integ) < c_target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw std::runtime_error("e_for_capacity: no bracket");
  }
  while (hi - lo > 1e-15 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (large_alpha_expression(mid, integ) < c_target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double quadratic_e(double alpha, double rho) {
  return alpha / kPi * (kQuadraticCoeff * rho * rho + kLinearCoeff * rho);
}

double snr_for_contour_approx(double alpha, double e_c) {
  if (!(alpha > 0.0)) throw std::domain_error("snr_for_contour_approx: alpha must be > 0");
  if (!(e_c >= 0.0)) throw std::domain_error("snr_for_contour_approx: e_c must be >= 0");
  const double disc = 9.0 - 10.0 * e_c * kPi / (3.0 * alpha);
  if (disc < 0.0)
    throw std::domain_error("alpha too small for this contour under the quadratic model");
  return 3.0 - std::sqrt(disc);
}

QuadraticFit fit_quadratic_e(double rho_max, std::size_t samples, const NormalIntegrator& integ) {
  if (!(rho_max > 0.0) || samples < 2) throw std::invalid_argument("fit_quadratic_e: bad range");
  // The integral is linear in alpha, so fit at alpha = 1.
  std::vector<double> rho(samples), target(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    rho[i] = rho_max * static_cast<double>(i + 1) / static_cast<double>(samples);
    target[i] = kPi * large_alpha_e(SystemPoint(rho[i], 1.0), integ);
  }
  // normal equations for y = a r^2 + b r
  CompensatedSum s4, s3, s2, y2, y1;
  for (std::size_t i = 0; i < samples; ++i) {
    const double r = rho[i];
    s4.add(r * r * r * r);
    s3.add(r * r * r);
    s2.add(r * r);
    y2.add(target[i] * r * r);
    y1.add(target[i] * r);
  }
  const double det = s4.value() * s2.value() - s3.value() * s3.value();
  QuadraticFit fit;
  fit.quadratic = (y2.value() * s2.value() - y1.value() * s3.value()) / det;
  fit.linear = (s4.value() * y1.value() - s3.value() * y2.value()) / det;
  fit.rho_max = rho_max;
  fit.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const double r = rho[i];
    const double fitted = fit.quadratic * r * r + fit.linear * r;
    const double fixed = kQuadraticCoeff * r * r + kLinearCoeff * r;
    fit.max_rel_error_fitted =
        std::max(fit.max_rel_error_fitted, std::abs(fitted - target[i]) / target[i]);
    fit.max_rel_error_fixed =
        std::max(fit.max_rel_error_fixed, std::abs(fixed - target[i]) / target[i]);
  }
  return fit;
}

}  // namespace onebit
