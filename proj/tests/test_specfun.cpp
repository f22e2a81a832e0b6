#include <cmath>
#include <stdexcept>
#include <limits>
#include <numbers>
#include <random>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/lambert_w.hpp>
#include <doctest.h>

#include "delaykit/diagnostics.hpp"
#include "delaykit/specfun.hpp"

using namespace delaykit::specfun;

namespace {

// γ(s, x) by direct quadrature of t^{s-1} e^{-t} on [0, x].
double lower_by_quadrature(double s, double x) {
  boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate([s](double t) { return std::pow(t, s - 1.0) * std::exp(-t); }, 0.0, x);
}

// Γ(s, x) = ∫ₓ^∞ t^{s-1} e^{-t} dt, shifted to [0, ∞).
double upper_by_quadrature(double s, double x) {
  boost::math::quadrature::exp_sinh<double> rule;
  return rule.integrate([s, x](double u) {
    const double e = std::exp(-(x + u));
    return e == 0.0 ? 0.0 : std::pow(x + u, s - 1.0) * e;
  });
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("incomplete gamma matches direct quadrature") {
  for (auto [s, x] : {std::pair{3.7, 2.1}, {2.001, 5.0}, {1.001, 0.1}, {0.5, 3.0}, {8.0, 0.8}, {12.0, 30.0}}) {
    CAPTURE(s);
    CAPTURE(x);
    CHECK(rel(lower_inc_gamma(s, x), lower_by_quadrature(s, x)) < 1e-10);
    CHECK(rel(upper_inc_gamma(s, x), upper_by_quadrature(s, x)) < 1e-10);
  }
}

TEST_CASE("regularized gamma edge values") {
  CHECK(regularized_lower_gamma(3.0, 0.0) == 0.0);
  CHECK(regularized_upper_gamma(3.0, 0.0) == 1.0);
  CHECK(regularized_upper_gamma(3.0, std::numeric_limits<double>::infinity()) == 0.0);
  // P(1, x) = 1 - e^{-x}
  CHECK(rel(regularized_lower_gamma(1.0, 0.3), -std::expm1(-0.3)) < 1e-14);
  // Q(2, x) = (1 + x) e^{-x}
  CHECK(rel(regularized_upper_gamma(2.0, 7.5), 8.5 * std::exp(-7.5)) < 1e-14);
  CHECK_THROWS_AS(regularized_lower_gamma(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(regularized_lower_gamma(1.0, -1.0), std::domain_error);
}

TEST_CASE("complement identity on a random grid") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> sd(1e-3, 64.0), xd(0.0, 200.0);
  for (int i = 0; i < 2000; ++i) {
    const double s = sd(rng), x = xd(rng);
    CAPTURE(s);
    CAPTURE(x);
    CHECK(rel(lower_inc_gamma(s, x) + upper_inc_gamma(s, x), std::tgamma(s)) < 1e-12);
  }
}

TEST_CASE("psi helper is the tail integral from one") {
  boost::math::quadrature::exp_sinh<double> rule;
  for (auto [a, y] : {std::pair{1.001, 0.8}, {3.002, 0.8}, {8.0, 8.0}, {1.5, 40.0}, {4.0, 0.05}}) {
    const double ref = rule.integrate([a, y](double u) {
      const double e = std::exp(-y * (1.0 + u));
      return e == 0.0 ? 0.0 : std::pow(1.0 + u, a - 1.0) * e;
    });
    CAPTURE(a);
    CAPTURE(y);
    CHECK(rel(psi_helper(a, y), ref) < 1e-10);
  }
}

TEST_CASE("gaussian tail values") {
  CHECK(gaussian_q(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(rel(gaussian_q(1.0), 0.15865525393145707) < 1e-14);
  CHECK(rel(gaussian_q(-2.0), 0.9772498680518208) < 1e-14);
  // Q⁻¹(1e-7) and Q⁻¹(1e-9) to double precision.
  CHECK(rel(gaussian_q_inv(1e-7), 5.199337582192817) < 1e-12);
  CHECK(rel(gaussian_q_inv(1e-9), 5.997807015008182) < 1e-12);
  CHECK(gaussian_q_inv(0.5) == 0.0);
  CHECK(rel(gaussian_q_inv(0.975), -1.959963984540054) < 1e-12);
  CHECK_THROWS_AS(gaussian_q_inv(0.0), std::domain_error);
  CHECK_THROWS_AS(gaussian_q_inv(1.0), std::domain_error);
}

TEST_CASE("log Q deep in the tail agrees with extended precision") {
  for (double x : {5.0, 20.0, 29.9, 30.0, 35.0, 40.0}) {
    const long double ref = std::log(std::erfc(static_cast<long double>(x) / std::sqrt(2.0L)) / 2.0L);
    CAPTURE(x);
    CHECK(std::abs(log_gaussian_q(x) - static_cast<double>(ref)) < 1e-12 * std::abs(static_cast<double>(ref)));
  }
}

TEST_CASE("Q is strictly decreasing and its inverse round-trips") {
  double prev = 2.0;
  for (double x = -5.0; x <= 37.0; x += 0.01) {
    const double q = gaussian_q(x);
    CHECK(q < prev);
    prev = q;
  }
  for (double p : {1e-300, 1e-100, 1e-15, 1e-9, 1e-3, 0.2, 0.5, 0.8, 0.999999}) {
    CAPTURE(p);
    if (p < 1e-200) {
      CHECK(std::abs(log_gaussian_q(gaussian_q_inv(p)) - std::log(p)) < 1e-12 * std::abs(std::log(p)));
    } else {
      CHECK(rel(gaussian_q(gaussian_q_inv(p)), p) < 1e-12);
    }
  }
}

TEST_CASE("Lambert W matches an independent implementation") {
  for (double x : {-1.0 / std::numbers::e + 1e-9, -0.3, -0.1, -1e-6, 1e-8, 0.18, 1.0, 2.5, 10.0, 1e3, 1e6, 1e30}) {
    CAPTURE(x);
    // Both implementations lose digits next to the branch point.
    const double tol = x < -0.3678 ? 1e-11 : 1e-13;
    CHECK(rel(lambert_w0(x), boost::math::lambert_w0(x)) < tol);
  }
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(-1.0 / std::numbers::e) == doctest::Approx(-1.0).epsilon(1e-7));
  CHECK_THROWS_AS(lambert_w0(-0.5), std::domain_error);
}

TEST_CASE("Lambert residual across the domain") {
  const Tolerances tol;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double u = ud(rng);
    const double x = u < 0.5 ? -1.0 / std::numbers::e + 1e-9 + u * 2.0 : std::pow(10.0, (u - 0.5) * 12.0);
    const double w = lambert_w0(x);
    CAPTURE(x);
    CHECK(std::abs(w * std::exp(w) - x) <= tol.rel_tol * std::max(std::abs(x), 1e-300));
  }
}

TEST_CASE("truncated Lambert series agrees with the iterative solver on the operating range") {
  for (double x = -0.18; x <= 0.18; x += 0.005) {
    CAPTURE(x);
    CHECK(std::abs(lambert_w0_series(x, 30) - lambert_w0(x)) <= 1e-8);
  }
  CHECK(lambert_w0_series(0.1, 1) == 0.1);
  CHECK(lambert_w0_series(0.1, 2) == doctest::Approx(0.1 - 0.01).epsilon(1e-15));
  CHECK_THROWS_AS(lambert_w0_series(0.1, 0), std::invalid_argument);

  delaykit::Diagnostics diag;
  lambert_w0_series(0.5, 10, 0.0, &diag);
  CHECK_FALSE(diag.empty());
}

TEST_CASE("tolerances are validated") {
  CHECK_THROWS_AS((Tolerances{0.0, 100}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Tolerances{1e-2, 100}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Tolerances{1e-12, 2}.validate()), std::invalid_argument);
  CHECK_NOTHROW(Tolerances{}.validate());
}
