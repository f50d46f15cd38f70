// SPDX-License-Identifier: Apache-2.0
//
// onebit: capacity of one-bit transceiver arrays in Rayleigh fading
// ------------------------------------------------------------------------

#include "onebit/math_kernel.hpp"

#include <algorithm>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

namespace onebit {

namespace {

constexpr double kInvSqrtPi = std::numbers::inv_sqrtpi;
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// exp(x*x) with the rounding error of the square folded back in.
double exp_of_square(double x) {
  const double hi = x * x;
  const double lo = std::fma(x, x, -hi);
  return std::exp(hi) * (1.0 + lo);
}

double standard_normal_pdf(double z) { return std::exp(-0.5 * z * z) / kSqrt2Pi; }

}  // namespace

double erfcx(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) {
    if (x < -26.6) return std::numeric_limits<double>::infinity();
    return 2.0 * exp_of_square(x) - erfcx(-x);
  }
  if (x < 25.0) return exp_of_square(x) * std::erfc(x);
  // Asymptotic series; at x >= 25 eight terms are far below one ulp.
  const double inv2x2 = 1.0 / (2.0 * x * x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 8; ++k) {
    term *= -(2.0 * k - 1.0) * inv2x2;
    sum += term;
  }
  return sum * kInvSqrtPi / x;
}

double q_function(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

double q_scaled(double x) { return 0.5 * erfcx(x * kInvSqrt2); }

double log_q_function(double x) {
  if (x < 0.0) return std::log1p(-q_function(-x));
  if (x < 20.0) return std::log(q_function(x));
  return std::log(q_scaled(x)) - 0.5 * x * x;
}

double inv_q_weighted(double a, double z) {
  if (!(a > 0.0)) throw std::domain_error("inv_q_weighted: a must be positive");
  // exp(-(a^2+1) z^2/2) / Q(az) = 2 exp(-z^2/2) / erfcx(a z / sqrt 2)
  return 2.0 * std::exp(-0.5 * z * z) / erfcx(a * z * kInvSqrt2);
}

double log_inv_q_weighted(double a, double z) {
  if (!(a > 0.0)) throw std::domain_error("log_inv_q_weighted: a must be positive");
  const double u = a * z * kInvSqrt2;
  // erfcx overflows for very negative u; use erfcx(u) ~ 2 exp(u^2) there.
  const double log_erfcx = u < -26.0 ? kLn2 + u * u : std::log(erfcx(u));
  return kLn2 - 0.5 * z * z - log_erfcx;
}

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::domain_error("binary_entropy: probability outside [0, 1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -(p * std::log(p) + (1.0 - p) * std::log1p(-p)) / kLn2;
}

double binary_entropy_of_q(double x) {
  const double p = q_function(std::abs(x));  // p <= 1/2
  if (p == 0.0) return 0.0;
  return -(p * std::log(p) + (1.0 - p) * std::log1p(-p)) / kLn2;
}

double log2_cosh(double x) {
  const double ax = std::abs(x);
  if (ax < 1.0) {
    // cosh x - 1 = 2 sinh^2(x/2)
    const double s = std::sinh(0.5 * ax);
    return std::log1p(2.0 * s * s) / kLn2;
  }
  return (ax + std::log1p(std::exp(-2.0 * ax))) / kLn2 - 1.0;
}

// ---- quadrature ----------------------------------------------------------

namespace detail {
void throw_nan_integrand(double z) {
  std::ostringstream os;
  os.precision(17);
  os << "integrand evaluated to NaN at z = " << z;
  throw QuadratureError(os.str());
}
}  // namespace detail

namespace {

// Orthonormal Hermite functions psi_j(t) = H_j(t) e^{-t^2/2} / norm, which stay O(1)
// where the polynomials themselves would overflow. Returns (psi_n, psi_{n-1}).
std::pair<double, double> hermite_function(std::size_t n, double t) {
  constexpr double kPiMinusQuarter = 0.751125544464942483087427040478;
  double p1 = kPiMinusQuarter * std::exp(-0.5 * t * t);
  double p2 = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const double p3 = p2;
    p2 = p1;
    const double dj = static_cast<double>(j);
    p1 = t * std::sqrt(2.0 / dj) * p2 - std::sqrt((dj - 1.0) / dj) * p3;
  }
  return {p1, p2};
}

}  // namespace

QuadratureRule QuadratureRule::gauss_hermite(std::size_t order) {
  if (order < 2) throw std::invalid_argument("gauss_hermite: order must be >= 2");
  if (order > 400) throw std::invalid_argument("gauss_hermite: order must be <= 400");
  const std::size_t n = order;
  const double dn = static_cast<double>(n);

  // Positive roots (weight e^{-t^2}) lie below sqrt(2n + 1) and are at least
  // ~pi / sqrt(2n + 1) apart, so a scan at a tenth of that spacing brackets each one.
  std::vector<double> roots;
  const double t_max = std::sqrt(2.0 * dn + 1.0);
  const double step = 0.1 * kPi / t_max;
  double a = n % 2 ? step * 0.5 : 0.0;
  double fa = hermite_function(n, a).first;
  while (a < t_max && roots.size() < n / 2) {
    const double b = a + step;
    const double fb = hermite_function(n, b).first;
    if ((fa < 0.0) != (fb < 0.0)) {
      auto f = [n](double t) {
        const auto [psi, psi_prev] = hermite_function(n, t);
        return std::make_pair(psi, std::sqrt(2.0 * static_cast<double>(n)) * psi_prev - t * psi);
      };
      std::uintmax_t max_iter = 100;
      roots.push_back(boost::math::tools::newton_raphson_iterate(f, 0.5 * (a + b), a, b, 52, max_iter));
    }
    a = b;
    fa = fb;
  }
  if (roots.size() != n / 2) throw std::runtime_error("gauss_hermite: root scan failed");

  // With psi_{n-1} = P_{n-1} e^{-t^2/2}, the e^{-t^2} weight 2 / (2n P_{n-1}^2)
  // becomes e^{-t^2} / (n psi_{n-1}^2); dividing by sqrt(pi) normalizes it.
  auto weight = [n, dn](double t) {
    const double psi_prev = hermite_function(n, t).second;
    return std::exp(-t * t) / (dn * psi_prev * psi_prev) * kInvSqrtPi;
  };
  std::vector<double> nodes(n), weights(n);
  const std::size_t half = n / 2;
  for (std::size_t i = 0; i < half; ++i) {
    const double t = roots[half - 1 - i];
    nodes[i] = -kSqrt2 * roots[half - 1 - i];
    nodes[n - 1 - i] = kSqrt2 * roots[half - 1 - i];
    weights[i] = weights[n - 1 - i] = weight(t);
  }
  if (n % 2) {
    nodes[half] = 0.0;
    weights[half] = weight(0.0);
  }
  return QuadratureRule(std::move(nodes), std::move(weights));
}

NormalIntegrator::NormalIntegrator(std::size_t order, double adaptive_tol)
    : rule_(QuadratureRule::gauss_hermite(order)), adaptive_tol_(adaptive_tol) {
  if (!(adaptive_tol > 0.0)) throw std::invalid_argument("NormalIntegrator: tolerance must be positive");
}

namespace {
// exp(-z^2 / 2) is below the smallest subnormal past this.
constexpr double kPdfUnderflow = 38.6;
}  // namespace

double NormalIntegrator::expect_adaptive(const std::function<double(double)>& f,
                                         double center, double width) const {
  constexpr double Z = kTruncation;
  // A feature out in a tail carries that tail's mass, so the domain follows it
  // (up to where the density underflows).
  double lo = -Z, hi = Z;
  const bool located = std::isfinite(center) && std::isfinite(width) && width > 0.0;
  if (located) {
    lo = std::max(std::min(lo, center - Z), -kPdfUnderflow);
    hi = std::min(std::max(hi, center + Z), kPdfUnderflow);
  }
  std::vector<double> breaks{lo, hi};
  if (located) {
    if (center > lo && center < hi) breaks.push_back(center);
    for (double off = width; off < 2.0 * (hi - lo); off *= 3.0) {
      for (double b : {center - off, center + off})
        if (b > lo && b < hi) breaks.push_back(b);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  auto g = [&f](double z) {
    const double pdf = standard_normal_pdf(z);
    const double v = f(z);
    if (std::isnan(v)) detail::throw_nan_integrand(z);
    return pdf == 0.0 ? 0.0 : v * pdf;
  };
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total += gauss_kronrod<double, 21>::integrate(g, breaks[i], breaks[i + 1], 12, adaptive_tol_);
  }
  return total;
}

const NormalIntegrator& default_integrator() {
  static const NormalIntegrator integrator;
  return integrator;
}

}  // namespace onebit
