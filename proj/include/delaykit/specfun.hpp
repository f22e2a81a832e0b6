// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "delaykit/diagnostics.hpp"

namespace delaykit::specfun {

/// Stopping rule shared by the iterative kernels below.
struct Tolerances {
  double rel_tol = 1e-14;
  int max_iter = 2000;

  /// Throws std::invalid_argument unless rel_tol is in (0, 1e-3] and max_iter >= 8.
  void validate() const;
};

/// Upper tail of the standard normal law, Q(x) = P(Z > x).
double gaussian_q(double x);

/// log Q(x), accurate deep in the upper tail where Q(x) itself underflows.
double log_gaussian_q(double x);

/// Inverse of gaussian_q on (0, 1). Throws std::domain_error outside it.
double gaussian_q_inv(double p, const Tolerances& tol = {});

/// log Γ(s) for s > 0 (reentrant).
double log_gamma(double s);

/// Regularized P(s, x) = γ(s, x) / Γ(s). Series for x < s + 1, continued
/// fraction otherwise; x = +inf is allowed and yields 1.
double regularized_lower_gamma(double s, double x, const Tolerances& tol = {});

/// Regularized Q(s, x) = Γ(s, x) / Γ(s) = 1 - P(s, x).
double regularized_upper_gamma(double s, double x, const Tolerances& tol = {});

/// γ(s, x) = ∫₀ˣ t^{s-1} e^{-t} dt. Requires s > 0 and x >= 0.
double lower_inc_gamma(double s, double x, const Tolerances& tol = {});

/// Γ(s, x) = ∫ₓ^∞ t^{s-1} e^{-t} dt. Requires s > 0 and x >= 0.
double upper_inc_gamma(double s, double x, const Tolerances& tol = {});

/// Ψ(x, y) = y^{-x} Γ(x, y), equivalently ∫₁^∞ t^{x-1} e^{-y t} dt.
double psi_helper(double x, double y, const Tolerances& tol = {});

/// Principal branch W₀ of the Lambert W function, solved by Halley iteration.
/// Throws std::domain_error for x < -1/e.
double lambert_w0(double x, const Tolerances& tol = {});

/// Partial sum of the Taylor series W₀(x) = Σ_{m≥1} (-m)^{m-1} x^m / m!,
/// truncated after `terms` terms, or earlier once a term falls below
/// early_stop_tol times the running sum. The series only converges for
/// |x| <= 1/e; outside that a warning is emitted to `sink`.
double lambert_w0_series(double x, int terms, double early_stop_tol = 0.0,
                         Diagnostics* sink = nullptr);

}  // namespace delaykit::specfun
