// SPDX-License-Identifier: Apache-2.0
//
// onebit: capacity of one-bit transceiver arrays in Rayleigh fading
// ------------------------------------------------------------------------

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "onebit/math_kernel.hpp"
#include "oracles.hpp"

using namespace onebit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using oracle::mp;

TEST_CASE("q_function basic values") {
  CHECK(q_function(0.0) == 0.5);
  CHECK_THAT(q_function(1.0), WithinRel(oracle::q(1.0), 1e-14));
  CHECK_THAT(q_function(-2.5), WithinRel(oracle::q(-2.5), 1e-14));
  CHECK_THAT(q_function(10.0), WithinRel(oracle::q(10.0), 1e-13));
  CHECK_THAT(q_function(30.0), WithinRel(oracle::q(30.0), 1e-12));
}

TEST_CASE("q_function far tail has a positive scaled form") {
  CHECK(q_function(40.0) < 1e-300);
  CHECK(q_function(40.0) >= 0.0);
  // Q(40) = q_scaled(40) exp(-800)
  const mp ref = oracle::mp_q(mp(40)) * boost::multiprecision::exp(mp(800));
  CHECK(q_scaled(40.0) > 0.0);
  CHECK_THAT(q_scaled(40.0), WithinRel(static_cast<double>(ref), 1e-13));
  CHECK_THAT(log_q_function(40.0), WithinRel(static_cast<double>(boost::multiprecision::log(oracle::mp_q(mp(40)))), 1e-14));
}

TEST_CASE("erfcx against 50-digit values") {
  for (double x : {-3.0, -0.5, 0.0, 0.3, 1.0, 4.0, 24.9, 25.1, 60.0, 1e4}) {
    const mp X(x);
    const mp ref = boost::multiprecision::exp(X * X) * boost::math::erfc(X);
    INFO("x = " << x);
    CHECK_THAT(erfcx(x), WithinRel(static_cast<double>(ref), 2e-14));
  }
  CHECK(std::isinf(erfcx(-30.0)));
}

TEST_CASE("q_function symmetry property") {
  prop::Gen gen(101);
  for (int i = 0; i < 2000; ++i) {
    const double x = gen.uniform(-40.0, 40.0);
    CHECK(std::abs(q_function(x) + q_function(-x) - 1.0) <= 1e-14);
  }
}

TEST_CASE("q_function is monotone decreasing") {
  double prev = 1.0;
  for (double x = -10.0; x <= 37.0; x += 0.01) {
    const double v = q_function(x);
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("log_q_function matches log Q where representable") {
  prop::Gen gen(7);
  for (int i = 0; i < 500; ++i) {
    const double x = gen.uniform(-30.0, 35.0);
    CHECK_THAT(log_q_function(x), WithinAbs(std::log(q_function(x)), 1e-13 * std::max(1.0, std::abs(std::log(q_function(x))))));
  }
}

TEST_CASE("inv_q_weighted") {
  SECTION("value at z = 0 is 2 for every a") {
    for (double a : {1e-3, 0.5, 1.0, 7.0}) CHECK_THAT(inv_q_weighted(a, 0.0), WithinRel(2.0, 1e-15));
  }
  SECTION("a = 1, z = 1 against exp(-1)/Q(1) at 50 digits") {
    const mp ref = boost::multiprecision::exp(mp(-1)) / oracle::mp_q(mp(1));
    CHECK_THAT(inv_q_weighted(1.0, 1.0), WithinRel(static_cast<double>(ref), 1e-14));
  }
  SECTION("far argument stays finite and tiny") {
    const double v = inv_q_weighted(1.0, 50.0);
    CHECK(std::isfinite(v));
    CHECK(v >= 0.0);
    CHECK(v < 1e-100);
    // the log companion keeps it representable
    const mp ref = -mp(2500) - boost::multiprecision::log(oracle::mp_q(mp(50)));
    CHECK_THAT(log_inv_q_weighted(1.0, 50.0), WithinRel(static_cast<double>(ref), 1e-14));
    CHECK(std::isfinite(inv_q_weighted(1.0, -100.0)));
    CHECK(std::isfinite(inv_q_weighted(1.0, 100.0)));
  }
  SECTION("agrees with the naive form for |a z| <= 25") {
    prop::Gen gen(11);
    for (int i = 0; i < 1000; ++i) {
      const double a = gen.log_uniform(0.01, 10.0);
      const double z = gen.uniform(-25.0 / a, 25.0 / a);
      // the numerator alone can be subnormal, so combine in the log domain
      const double naive = std::exp(-(a * a + 1.0) * z * z / 2.0 - std::log(oracle::q_fast(a * z)));
      if (!(naive > 1e-290) || !std::isfinite(naive)) continue;
      INFO("a = " << a << ", z = " << z);
      CHECK_THAT(inv_q_weighted(a, z), WithinRel(naive, 1e-12));
    }
  }
  SECTION("requires a > 0") {
    CHECK_THROWS_AS(inv_q_weighted(0.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(inv_q_weighted(-1.0, 1.0), std::domain_error);
  }
}

TEST_CASE("binary_entropy") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK_THAT(binary_entropy(0.25), WithinRel(oracle::binary_entropy(0.25), 1e-15));
  CHECK_THROWS_AS(binary_entropy(-0.1), std::domain_error);
  CHECK_THROWS_AS(binary_entropy(1.1), std::domain_error);
  CHECK_THROWS_AS(binary_entropy(std::nan("")), std::domain_error);

  prop::Gen gen(3);
  for (int i = 0; i < 1000; ++i) {
    const double p = gen.uniform(0.0, 1.0);
    const double h = binary_entropy(p);
    CHECK(h >= 0.0);
    CHECK(h <= 1.0);
    CHECK_THAT(h, WithinAbs(binary_entropy(1.0 - p), 1e-15));
  }
}

TEST_CASE("binary_entropy_of_q keeps tail accuracy") {
  for (double x : {0.0, 0.5, 3.0, 10.0, 20.0}) {
    const mp p = oracle::mp_q(mp(x));
    using boost::multiprecision::log;
    // 1 - p rounds to 1 at 50 digits for x = 20; log1p keeps the linear term
    const mp ref = -(p * log(p) + (1 - p) * boost::math::log1p(-p)) / log(mp(2));
    INFO("x = " << x);
    CHECK_THAT(binary_entropy_of_q(x), WithinRel(static_cast<double>(ref), 1e-13));
    CHECK(binary_entropy_of_q(-x) == binary_entropy_of_q(x));
  }
}

TEST_CASE("log2_cosh") {
  CHECK(log2_cosh(0.0) == 0.0);
  const mp one(1);
  const mp ref = boost::multiprecision::log(boost::multiprecision::cosh(one)) / boost::multiprecision::log(mp(2));
  CHECK_THAT(log2_cosh(1.0), WithinRel(static_cast<double>(ref), 1e-15));
  CHECK_THAT(log2_cosh(1000.0), WithinRel((1000.0 - std::numbers::ln2) / std::numbers::ln2, 1e-9));
  CHECK(std::isfinite(log2_cosh(1e300)));

  prop::Gen gen(5);
  for (int i = 0; i < 1000; ++i) {
    const double x = gen.uniform(-700.0, 700.0);
    CHECK(log2_cosh(x) - log2_cosh(-x) == 0.0);
    if (std::abs(x) < 300.0) CHECK_THAT(log2_cosh(x), WithinAbs(oracle::log2_cosh_direct(x), 1e-12 * std::max(1.0, std::abs(x))));
  }
}

TEST_CASE("quadrature rule contract") {
  const auto rule = QuadratureRule::gauss_hermite(kDefaultQuadratureOrder);
  CHECK(rule.order() == 200);
  for (double w : rule.weights()) CHECK(w >= 0.0);
  for (std::size_t i = 1; i < rule.order(); ++i) CHECK(rule.nodes()[i] > rule.nodes()[i - 1]);

  CHECK_THAT(gauss_expect([](double) { return 1.0; }, rule), WithinAbs(1.0, 1e-12));
  CHECK_THAT(gauss_expect([](double z) { return z; }, rule), WithinAbs(0.0, 1e-12));
  CHECK_THAT(gauss_expect([](double z) { return z * z; }, rule), WithinAbs(1.0, 1e-10));
  CHECK_THAT(gauss_expect([](double z) { return std::cosh(z); }, rule), WithinAbs(std::exp(0.5), 1e-10));

  CHECK_THROWS_AS(QuadratureRule::gauss_hermite(1), std::invalid_argument);
}

TEST_CASE("quadrature reproduces normal moments for several orders") {
  for (std::size_t order : {8, 20, 64, 101, 200, 300}) {
    const auto rule = QuadratureRule::gauss_hermite(order);
    // E[z^{2k}] = (2k - 1)!!
    double dfact = 1.0;
    for (std::size_t k = 1; 2 * k < order && k <= 12; ++k) {
      dfact *= static_cast<double>(2 * k - 1);
      const double got = gauss_expect([k](double z) { return std::pow(z, 2.0 * static_cast<double>(k)); }, rule);
      INFO("order " << order << ", moment " << 2 * k);
      CHECK_THAT(got, WithinRel(dfact, 1e-12));
    }
  }
}

TEST_CASE("normalized Hermite polynomials are orthonormal under the rule") {
  // He_k / sqrt(k!) via the stable recurrence; exact moments are delta_{jk}.
  const auto& integ = default_integrator();
  constexpr std::size_t kMax = 100;  // order / 2
  auto hermite = [](double z, std::size_t k) {
    double prev = 0.0, cur = 1.0;
    for (std::size_t j = 1; j <= k; ++j) {
      const double next = (z * cur - std::sqrt(static_cast<double>(j - 1)) * prev) / std::sqrt(static_cast<double>(j));
      prev = cur;
      cur = next;
    }
    return cur;
  };
  for (std::size_t k = 1; k <= kMax; ++k) {
    INFO("k = " << k);
    CHECK_THAT(integ.expect([&](double z) { return hermite(z, k); }), WithinAbs(0.0, 1e-9));
    CHECK_THAT(integ.expect([&](double z) { return hermite(z, k) * hermite(z, k); }), WithinAbs(1.0, 1e-9));
  }
}

TEST_CASE("gauss_expect reports NaN integrands") {
  const auto& integ = default_integrator();
  CHECK_THROWS_AS(integ.expect([](double) { return std::nan(""); }), QuadratureError);
  CHECK_THROWS_AS(integ.expect_adaptive([](double) { return std::nan(""); }, 0.0, 1.0), QuadratureError);
}

TEST_CASE("adaptive path resolves narrow features") {
  const auto& integ = default_integrator();
  // a smoothed step of width 1e-3 at c: E[sigmoid] ~ Q(-c) shifted by O(width^2)
  for (double c : {-4.0, -1.0, 0.0, 2.5, 6.0}) {
    const double w = 1e-3;
    auto f = [c, w](double z) { return 0.5 * (1.0 + std::tanh((z - c) / w)); };
    const double ref = oracle::normal_expect(f, 12.0, 1e-15);
    INFO("c = " << c);
    CHECK_THAT(integ.expect_localized(f, c, w), WithinAbs(ref, 1e-12));
  }
  // wide features stay on the fixed rule and agree with the adaptive path
  auto g = [](double z) { return std::exp(std::sin(z)); };
  CHECK_THAT(integ.expect(g), WithinAbs(integ.expect_adaptive(g, 0.0, 1.0), 1e-12));
}

TEST_CASE("adaptive path follows features past the default truncation") {
  const auto& integ = default_integrator();
  // exp(t z) phi(z) peaks at z = t with mass e^{t^2 / 2}
  for (double t : {-20.0, -12.0, 12.0, 18.0}) {
    INFO("t = " << t);
    CHECK_THAT(integ.expect_adaptive([t](double z) { return std::exp(t * z); }, t, 1.0),
               WithinRel(std::exp(0.5 * t * t), 1e-12));
  }
  // mass far out in a tail: a step at c = -15 smoothed over 2e-4, whose bias
  // against Q(15) is second order in 15 x width
  auto f = [](double z) { return 0.5 * std::erfc((z + 15.0) * 5000.0); };
  CHECK_THAT(integ.expect_localized(f, -15.0, 2e-4), WithinRel(static_cast<double>(oracle::mp_q(mp(15))), 1e-5));
}

TEST_CASE("custom integrator order") {
  NormalIntegrator small(40);
  CHECK(small.rule().order() == 40);
  CHECK_THAT(small.expect([](double z) { return z * z * z * z; }), WithinRel(3.0, 1e-13));
  CHECK_THROWS_AS(NormalIntegrator(200, 0.0), std::invalid_argument);
}

TEST_CASE("CompensatedSum removes cancellation error") {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK_THAT(s.value(), WithinRel(1e-13, 1e-12));
}
