// SPDX-License-Identifier: Apache-2.0
//
// onebit: capacity of one-bit transceiver arrays in Rayleigh fading
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace onebit {

inline constexpr double kLn2 = std::numbers::ln2;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSqrt2 = std::numbers::sqrt2;
inline constexpr double kSqrt2Pi = 2.50662827463100050241576528481104525;

/// Raised when an integrand produces NaN at a quadrature node.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- special functions ---------------------------------------------------

/// Scaled complementary error function exp(x^2) * erfc(x).
/// Finite for x > -26.6; +inf below that.
double erfcx(double x);

/// Gaussian tail probability Q(x) = P(Z > x). Underflows to 0 past x ~ 37.5.
double q_function(double x);

/// Q(x) * exp(x^2 / 2). Strictly positive for every finite x.
double q_scaled(double x);

/// ln Q(x), finite for every finite x.
double log_q_function(double x);

/// exp(-(a^2 + 1) z^2 / 2) / Q(a z), evaluated through erfcx so neither the
/// numerator nor Q(a z) has to be representable. Requires a > 0.
double inv_q_weighted(double a, double z);

/// Natural log of inv_q_weighted, finite wherever the value itself underflows.
double log_inv_q_weighted(double a, double z);

/// Binary entropy in bits; throws std::domain_error outside [0, 1].
double binary_entropy(double p);

/// Binary entropy of Q(x), without forming 1 - Q(x) by subtraction.
double binary_entropy_of_q(double x);

/// log2(cosh(x)); exactly even, no overflow for large |x|.
double log2_cosh(double x);

/// Neumaier-compensated running sum; order of additions still matters but the
/// rounding error no longer grows with the count.
class CompensatedSum {
 public:
  void add(double term) {
    const double t = sum_ + term;
    if (std::abs(sum_) >= std::abs(term))
      comp_ += (sum_ - t) + term;
    else
      comp_ += (term - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// ---- quadrature ----------------------------------------------------------

/// Gauss-Hermite rule for expectations over the standard normal law:
/// E[f(Z)] ~ sum_i w_i f(z_i). Immutable once built.
class QuadratureRule {
 public:
  static QuadratureRule gauss_hermite(std::size_t order);

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t order() const { return nodes_.size(); }

 private:
  QuadratureRule(std::vector<double> nodes, std::vector<double> weights)
      : nodes_(std::move(nodes)), weights_(std::move(weights)) {}

  std::vector<double> nodes_;
  std::vector<double> weights_;
};

inline constexpr std::size_t kDefaultQuadratureOrder = 200;

namespace detail {
[[noreturn]] void throw_nan_integrand(double z);
}

/// E_{z~N(0,1)}[f(z)] with a fixed rule. A NaN from f raises QuadratureError.
template <class F>
double gauss_expect(F&& f, const QuadratureRule& rule) {
  const auto z = rule.nodes();
  const auto w = rule.weights();
  // nodes run tail -> centre -> tail
  CompensatedSum sum;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double v = f(z[i]);
    if (std::isnan(v)) detail::throw_nan_integrand(z[i]);
    sum.add(w[i] * v);
  }
  return sum.value();
}

/// Standard-normal expectation engine: a Gauss-Hermite rule for integrands that
/// vary on the unit scale, and adaptive Gauss-Kronrod on [-Z, Z] with
/// breakpoints graded around a narrow feature otherwise.
class NormalIntegrator {
 public:
  /// Half-width of the adaptive domain; 2 Q(9) < 1e-16.
  static constexpr double kTruncation = 9.0;
  /// Features narrower than this (in z) go to the adaptive path.
  static constexpr double kMinRuleWidth = 0.55;

  explicit NormalIntegrator(std::size_t order = kDefaultQuadratureOrder,
                            double adaptive_tol = 1e-13);

  const QuadratureRule& rule() const { return rule_; }
  double adaptive_tolerance() const { return adaptive_tol_; }

  template <class F>
  double expect(F&& f) const {
    return gauss_expect(std::forward<F>(f), rule_);
  }

  /// E[f(z)] where f changes over a window of size `width` around `center`.
  template <class F>
  double expect_localized(F&& f, double center, double width) const {
    if (width >= kMinRuleWidth && std::abs(center) <= 3.0)
      return gauss_expect(std::forward<F>(f), rule_);
    return expect_adaptive(std::function<double(double)>(std::forward<F>(f)), center, width);
  }

  double expect_adaptive(const std::function<double(double)>& f, double center,
                         double width) const;

 private:
  QuadratureRule rule_;
  double adaptive_tol_;
};

/// Process-wide integrator with the default order; safe to share.
const NormalIntegrator& default_integrator();

}  // namespace onebit
