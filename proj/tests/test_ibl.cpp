#include <cmath>
#include <stdexcept>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include "delaykit/ibl.hpp"

using namespace delaykit;

namespace {

constexpr double kLn2 = std::numbers::ln2;
const LinkConfig kLink{1000.0, 200e3};

double db(double v) { return std::pow(10.0, v / 10.0); }

// E[(L / (B log₂(1+γ)))^k] by quadrature over the SNR law.
double delay_moment_by_quadrature(const ChannelModel& m, int k) {
  auto f = [&](double x) {
    if (x <= 0.0) return 0.0;
    return std::pow(kLink.payload_bits / (kLink.bandwidth_hz * std::log1p(x) / kLn2), k) * snr_pdf(m, x);
  };
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  return Rule::integrate(f, 0.0, m.avg_snr, 20, 1e-13) +
         Rule::integrate(f, m.avg_snr, std::numeric_limits<double>::infinity(), 20, 1e-13);
}

}  // namespace

TEST_CASE("closed-form rate moments agree with quadrature") {
  for (int n : {1, 2, 4, 8, 16}) {
    for (double sdb : {0.0, 10.0, 20.0}) {
      const ChannelModel m{n, db(sdb)};
      const auto exact = ibl::rate_moments_exact(m);
      const auto quad = ibl::rate_moments_quadrature(m);
      CAPTURE(n);
      CAPTURE(sdb);
      if (!exact.diagnostics.empty()) continue;
      // The log surrogate with b = 1000 carries a relative bias of order (ln γ)²/(2b).
      CHECK(exact.m1 == doctest::Approx(quad.m1).epsilon(3e-3));
      CHECK(exact.m2 == doctest::Approx(quad.m2).epsilon(6e-3));
      CHECK(exact.variance >= 0.0);
    }
  }
}

TEST_CASE("alternating-sum cancellation is reported") {
  // Large N at low SNR: the binomial sum loses most of its digits.
  const auto rm = ibl::rate_moments_exact(ChannelModel{16, 1.0});
  CHECK_FALSE(rm.diagnostics.empty());
  CHECK(ibl::rate_moments_exact(ChannelModel{8, 10.0}).diagnostics.empty());
}

TEST_CASE("quadrature rate moments match a plain Gauss-Kronrod oracle") {
  const ChannelModel m{8, 10.0};
  auto f = [&](double x) { return std::log1p(x) / kLn2 * snr_pdf(m, x); };
  const double ref = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, 0.0, std::numeric_limits<double>::infinity(), 25, 1e-13);
  CHECK(ibl::rate_moments_quadrature(m).m1 == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("high-SNR rate moments approach the exact ones") {
  for (double sdb : {20.0, 30.0}) {
    const ChannelModel m{8, db(sdb)};
    const auto quad = ibl::rate_moments_quadrature(m);
    const auto high = ibl::rate_moments_highsnr(m);
    CHECK(high.m1 == doctest::Approx(quad.m1).epsilon(2e-3));
    CHECK(high.variance == doctest::Approx(quad.variance).epsilon(0.05));
  }
  CHECK_FALSE(ibl::rate_moments_highsnr(ChannelModel{8, 1.0}).diagnostics.empty());
}

TEST_CASE("Taylor-moment forms are algebraically identical") {
  const ChannelModel m{8, 10.0};
  const auto rm = ibl::rate_moments_exact(m);
  const auto t1 = ibl::delay_moments(m, kLink, rm, MomentMethod::theorem1);
  const auto t2 = ibl::delay_moments(m, kLink, rm, MomentMethod::theorem2);
  CHECK(t1.mean_delay == doctest::Approx(t2.mean_delay).epsilon(1e-12));
  CHECK(t1.jitter == doctest::Approx(t2.jitter).epsilon(1e-9));
  CHECK(rm.m2 / std::pow(rm.m1, 3) == doctest::Approx(1.0 / rm.m1 + rm.variance / std::pow(rm.m1, 3)).epsilon(1e-12));
}

TEST_CASE("theorem means track the true mean delay") {
  const ChannelModel m{8, 10.0};
  const double truth = delay_moment_by_quadrature(m, 1);
  CHECK(ibl::delay_moments(m, kLink, MomentMethod::theorem1).mean_delay == doctest::Approx(truth).epsilon(0.01));
  CHECK(ibl::delay_moments(m, kLink, MomentMethod::theorem2).mean_delay == doctest::Approx(truth).epsilon(0.01));
}

TEST_CASE("delay cdf and violation are complements") {
  for (int n : {1, 3, 8}) {
    const ChannelModel m{n, 10.0};
    for (double t = 2e-4; t < 2e-2; t *= 1.2) {
      CAPTURE(t);
      CHECK(std::abs(ibl::delay_cdf(m, kLink, t) + ibl::delay_violation(m, kLink, t) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("delay cdf equals the SNR tail at the threshold") {
  const ChannelModel m{8, 10.0};
  for (double t : {8e-4, 1.5e-3, 3e-3}) {
    const double gamma_star = std::pow(2.0, kLink.payload_bits / (kLink.bandwidth_hz * t)) - 1.0;
    CHECK(ibl::delay_cdf(m, kLink, t) == doctest::Approx(1.0 - snr_cdf(m, gamma_star)).epsilon(1e-12));
  }
}

TEST_CASE("doubling payload doubles the delay") {
  const ChannelModel m{8, 10.0};
  const LinkConfig twice{2.0 * kLink.payload_bits, kLink.bandwidth_hz};
  for (double t : {5e-4, 1e-3, 2e-3, 4e-3}) {
    CHECK(std::abs(ibl::delay_cdf(m, twice, 2.0 * t) - ibl::delay_cdf(m, kLink, t)) <= 1e-12);
  }
  CHECK(shannon_delay(SnrSample{5.0}, twice) == doctest::Approx(2.0 * shannon_delay(SnrSample{5.0}, kLink)));
}

TEST_CASE("N=1 formulas reduce to the single-antenna forms") {
  const ChannelModel one{1, 10.0};
  for (double t : {3e-4, 1e-3, 5e-3, 5e-2}) {
    CHECK(std::abs(ibl::delay_cdf(one, kLink, t) - ibl::single_antenna::delay_cdf(10.0, kLink, t)) <= 1e-12);
    CHECK(ibl::delay_pdf(one, kLink, t) == doctest::Approx(ibl::single_antenna::delay_pdf(10.0, kLink, t)).epsilon(1e-12));
  }
  for (double y : {0.1, 1.0, 3.0, 6.0}) {
    CHECK(std::abs(ibl::rate_cdf(one, y) - ibl::single_antenna::rate_cdf(10.0, y)) <= 1e-12);
    CHECK(ibl::rate_pdf(one, y) == doctest::Approx(ibl::single_antenna::rate_pdf(10.0, y)).epsilon(1e-12));
  }
}

TEST_CASE("delay distribution limits") {
  const ChannelModel m{8, 10.0};
  CHECK(ibl::delay_cdf(m, kLink, 1e-9) == 0.0);
  CHECK(ibl::delay_pdf(m, kLink, 1e-9) == 0.0);
  CHECK(ibl::delay_cdf(m, kLink, 10.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(ibl::delay_cdf(m, kLink, 0.0), std::domain_error);
  CHECK_THROWS_AS(ibl::rate_cdf(m, -1.0), std::domain_error);
}

TEST_CASE("quantile inverts the cdf") {
  const ChannelModel m{8, 10.0};
  for (double p : {0.001, 0.1, 0.5, 0.9, 0.999}) {
    const double t = ibl::delay_quantile(m, kLink, p);
    CHECK(ibl::delay_cdf(m, kLink, t) == doctest::Approx(p).epsilon(1e-10));
  }
}

TEST_CASE("single antenna moments carry a heavy-tail flag") {
  const ChannelModel one{1, 10.0};
  const auto r = ibl::delay_moments(one, kLink, MomentMethod::theorem2);
  CHECK(r.heavy_tail);
  CHECK_FALSE(r.diagnostics.empty());
}

TEST_CASE("moment inputs are checked") {
  const ChannelModel m{8, 10.0};
  RateMoments bad;
  bad.m1 = 0.0;
  CHECK_THROWS_AS(ibl::delay_moments(m, kLink, bad, MomentMethod::theorem1), std::domain_error);
  CHECK_THROWS_AS(ibl::delay_moments(m, kLink, ibl::rate_moments_exact(m), MomentMethod::monte_carlo),
                  std::invalid_argument);
  CHECK_THROWS_AS(IblApproxParams{10.0}.validate(), std::invalid_argument);
  CHECK_THROWS_AS((LinkConfig{0.0, 1.0}.validate()), std::invalid_argument);
}

TEST_CASE("negative Taylor jitter is clamped") {
  const ChannelModel m{8, 10.0};
  RateMoments rm;
  rm.m1 = 0.1;
  rm.variance = 1.0;  // v > m1², so v/m1⁴ - v²/m1⁶ < 0
  rm.m2 = rm.variance + rm.m1 * rm.m1;
  const auto r = ibl::delay_moments(m, kLink, rm, MomentMethod::theorem2);
  CHECK(r.jitter == 0.0);
  CHECK(r.jitter_clamped);
}
