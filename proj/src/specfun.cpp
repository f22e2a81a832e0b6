// SPDX-License-Identifier: Apache-2.0
#include "delaykit/specfun.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace delaykit::specfun {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // 0.5 * ln(2π)
constexpr double kInvE = 0.36787944117144233;
// e split into a double and its rounding residual, for 1 + e·x near x = -1/e.
constexpr double kEHi = 2.718281828459045;
constexpr double kELo = 1.4456468917292502e-16;

double log_std_normal_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

// Mills ratio Q(x)/φ(x) by the Laplace continued fraction, evaluated
// bottom-up. Only used for x >= 30, where 60 levels are far more than enough.
double mills_ratio_cf(double x) {
  double acc = x;
  for (int k = 60; k >= 1; --k) acc = x + k / acc;
  return 1.0 / acc;
}

void check_gamma_args(double s, double x, const char* who) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw std::domain_error(fmt::format("{}: shape s must be positive and finite, got {}", who, s));
  }
  if (!(x >= 0.0)) {
    throw std::domain_error(fmt::format("{}: x must be non-negative, got {}", who, x));
  }
}

// P(s, x) by the power series; caller guarantees 0 <= x < s + 1.
double gamma_series_p(double s, double x, const Tolerances& tol) {
  if (x == 0.0) return 0.0;
  double ap = s;
  double del = 1.0 / s;
  double sum = del;
  for (int i = 0; i < tol.max_iter; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * kEps) {
      return sum * std::exp(-x + s * std::log(x) - log_gamma(s));
    }
  }
  throw std::runtime_error(fmt::format("incomplete gamma series did not converge (s={}, x={})", s, x));
}

// Continued fraction (modified Lentz) for e^{x} x^{-s} Γ(s, x); caller
// guarantees x >= s + 1.
double gamma_cf_scaled(double s, double x, const Tolerances& tol) {
  constexpr double fpmin = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - s;
  double c = 1.0 / fpmin;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= tol.max_iter; ++i) {
    const double an = -i * (i - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < fpmin) d = fpmin;
    c = b + an / c;
    if (std::abs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error(
      fmt::format("incomplete gamma continued fraction did not converge (s={}, x={})", s, x));
}

double gamma_cf_q(double s, double x, const Tolerances& tol) {
  if (std::isinf(x)) return 0.0;
  return gamma_cf_scaled(s, x, tol) * std::exp(-x + s * std::log(x) - log_gamma(s));
}

}  // namespace

void Tolerances::validate() const {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) {
    throw std::invalid_argument(fmt::format("rel_tol must lie in (0, 1e-3], got {}", rel_tol));
  }
  if (max_iter < 8) {
    throw std::invalid_argument(fmt::format("max_iter must be at least 8, got {}", max_iter));
  }
}

double gaussian_q(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double log_gaussian_q(double x) {
  if (x < 30.0) return std::log(gaussian_q(x));
  return log_std_normal_pdf(x) + std::log(mills_ratio_cf(x));
}

double gaussian_q_inv(double p, const Tolerances& tol) {
  tol.validate();
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error(fmt::format("gaussian_q_inv: p must lie in (0, 1), got {}", p));
  }
  if (p == 0.5) return 0.0;
  if (p > 0.5) return -gaussian_q_inv(1.0 - p, tol);

  // Abramowitz & Stegun 26.2.23 starting point (|error| < 4.5e-4).
  const double t = std::sqrt(-2.0 * std::log(p));
  double x = t - (2.515517 + t * (0.802853 + t * 0.010328)) /
                     (1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308)));

  // Newton on log Q keeps full relative accuracy for p down to the denormals.
  const double log_p = std::log(p);
  for (int i = 0; i < tol.max_iter; ++i) {
    const double lq = log_gaussian_q(x);
    const double hazard = std::exp(log_std_normal_pdf(x) - lq);  // -d/dx log Q
    const double step = (lq - log_p) / hazard;
    x += step;
    if (std::abs(step) <= tol.rel_tol * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

double log_gamma(double s) {
  int sign = 0;
  return ::lgamma_r(s, &sign);
}

double regularized_lower_gamma(double s, double x, const Tolerances& tol) {
  check_gamma_args(s, x, "regularized_lower_gamma");
  if (x < s + 1.0) return gamma_series_p(s, x, tol);
  return 1.0 - gamma_cf_q(s, x, tol);
}

double regularized_upper_gamma(double s, double x, const Tolerances& tol) {
  check_gamma_args(s, x, "regularized_upper_gamma");
  if (x < s + 1.0) return 1.0 - gamma_series_p(s, x, tol);
  return gamma_cf_q(s, x, tol);
}

double lower_inc_gamma(double s, double x, const Tolerances& tol) {
  check_gamma_args(s, x, "lower_inc_gamma");
  return std::exp(log_gamma(s)) * regularized_lower_gamma(s, x, tol);
}

double upper_inc_gamma(double s, double x, const Tolerances& tol) {
  check_gamma_args(s, x, "upper_inc_gamma");
  return std::exp(log_gamma(s)) * regularized_upper_gamma(s, x, tol);
}

double psi_helper(double x, double y, const Tolerances& tol) {
  if (!(x > 0.0) || !(y > 0.0) || !std::isfinite(x) || !std::isfinite(y)) {
    throw std::domain_error(fmt::format("psi_helper: need x > 0 and y > 0, got ({}, {})", x, y));
  }
  // In the continued-fraction region y^{-x} cancels the y^{x} prefactor.
  if (y >= x + 1.0) return std::exp(-y) * gamma_cf_scaled(x, y, tol);
  return std::exp(log_gamma(x) - x * std::log(y)) * (1.0 - gamma_series_p(x, y, tol));
}

double lambert_w0(double x, const Tolerances& tol) {
  tol.validate();
  if (std::isnan(x)) throw std::domain_error("lambert_w0: argument is NaN");
  if (x < -kInvE) {
    if (x < -kInvE * (1.0 + 4.0 * kEps)) {
      throw std::domain_error(fmt::format("lambert_w0: x must be >= -1/e, got {}", x));
    }
    return -1.0;
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  if (x > 1e20) {
    // Newton on w + ln w = ln x avoids overflowing w·e^w.
    const double lx = std::log(x);
    double w = lx - std::log(lx);
    for (int i = 0; i < tol.max_iter; ++i) {
      const double step = (w + std::log(w) - lx) / (1.0 + 1.0 / w);
      w -= step;
      if (std::abs(step) <= tol.rel_tol * w) break;
    }
    return w;
  }

  double w;
  if (x < -0.25) {
    const double q = std::fma(kEHi, x, 1.0) + kELo * x;
    const double p = std::sqrt(2.0 * std::max(q, 0.0));
    w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 - p * 43.0 / 540.0)));
    if (p == 0.0) return -1.0;
  } else if (x < 3.0) {
    const double l = std::log1p(x);
    w = l * (1.0 - std::log1p(l) / (2.0 + l));
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  for (int i = 0; i < tol.max_iter; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (f == 0.0) break;
    const double wp1 = w + 1.0;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    w -= step;
    if (std::abs(step) <= 0.5 * tol.rel_tol * std::max(std::abs(w), kTiny)) break;
  }
  return w;
}

double lambert_w0_series(double x, int terms, double early_stop_tol, Diagnostics* sink) {
  if (terms < 1) {
    throw std::invalid_argument(fmt::format("lambert_w0_series: terms must be >= 1, got {}", terms));
  }
  if (std::abs(x) > kInvE) {
    warn_if(sink, fmt::format("lambert_w0_series: |x| = {} exceeds 1/e, series may diverge", std::abs(x)));
  }
  if (x == 0.0) return 0.0;

  // t_m = (-m)^{m-1} x^m / m!, with t_m / t_{m-1} = -x (m/(m-1))^{m-2}.
  double term = x;
  double sum = x;
  for (int m = 2; m <= terms; ++m) {
    term *= -x * std::pow(static_cast<double>(m) / (m - 1), m - 2);
    sum += term;
    if (early_stop_tol > 0.0 && std::abs(term) < early_stop_tol * std::abs(sum)) break;
  }
  return sum;
}

}  // namespace delaykit::specfun
