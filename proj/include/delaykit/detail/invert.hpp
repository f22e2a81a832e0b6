// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <stdexcept>

namespace delaykit::detail {

/// Solves cdf(t) = p for a nondecreasing cdf on (0, ∞) by bisection in log t,
/// starting from a bracket grown geometrically around `guess`.
template <class Cdf>
double invert_cdf(Cdf&& cdf, double p, double guess) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("quantile level must lie in (0, 1)");
  double lo = guess;
  double hi = guess;
  for (int i = 0; i < 200 && cdf(lo) > p; ++i) lo *= 0.5;
  for (int i = 0; i < 200 && cdf(hi) < p; ++i) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = std::sqrt(lo * hi);
    if (cdf(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo <= 1e-14 * hi) break;
  }
  return std::sqrt(lo * hi);
}

}  // namespace delaykit::detail
