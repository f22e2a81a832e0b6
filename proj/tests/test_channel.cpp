#include <cmath>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/gamma.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include "delaykit/channel.hpp"

using namespace delaykit;

TEST_CASE("single antenna law is exponential") {
  const ChannelModel m{1, 10.0};
  for (double x : {0.0, 1e-6, 0.5, 3.0, 10.0, 80.0}) {
    CAPTURE(x);
    CHECK(std::abs(snr_cdf(m, x) - (1.0 - std::exp(-x / 10.0))) <= 1e-12);
    CHECK(snr_pdf(m, x) == doctest::Approx(std::exp(-x / 10.0) / 10.0).epsilon(1e-13));
  }
}

TEST_CASE("multi-antenna law matches the gamma distribution") {
  for (int n : {2, 4, 8, 32}) {
    const ChannelModel m{n, 3.0};
    const boost::math::gamma_distribution<double> ref(n, 3.0 / n);
    for (double x : {0.01, 0.5, 2.0, 3.0, 6.0, 15.0}) {
      CAPTURE(n);
      CAPTURE(x);
      CHECK(snr_cdf(m, x) == doctest::Approx(boost::math::cdf(ref, x)).epsilon(1e-12));
      CHECK(snr_pdf(m, x) == doctest::Approx(boost::math::pdf(ref, x)).epsilon(1e-12));
    }
    CHECK(snr_pdf(m, 0.0) == 0.0);
  }
}

TEST_CASE("pdf integrates to one") {
  for (int n : {1, 2, 8, 64}) {
    const ChannelModel m{n, 10.0};
    const double total = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double x) { return snr_pdf(m, x); }, 0.0, std::numeric_limits<double>::infinity(), 15, 1e-12);
    CAPTURE(n);
    CHECK(std::abs(total - 1.0) <= 1e-8);
  }
}

TEST_CASE("pdf is the derivative of the cdf") {
  const ChannelModel m{8, 10.0};
  for (double x = 0.01; x <= 100.0; x *= 1.3) {
    const double h = 1e-5 * x;
    const double fd = (snr_cdf(m, x + h) - snr_cdf(m, x - h)) / (2.0 * h);
    const double pdf = snr_pdf(m, x);
    if (pdf < 1e-200) continue;
    CAPTURE(x);
    CHECK(std::abs(fd - pdf) <= 1e-6 * pdf + 1e-12);
  }
}

TEST_CASE("sampling is reproducible and has the right mean") {
  const ChannelModel m{4, 5.0};
  RandomStream a(123), b(123);
  std::vector<double> xs;
  for (int i = 0; i < 200000; ++i) {
    const double x = snr_sample(m, a).value;
    CHECK_EQ(x, snr_sample(m, b).value);
    xs.push_back(x);
  }
  double sum = 0.0, sq = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / xs.size();
  for (double x : xs) sq += (x - mean) * (x - mean);
  const double var = sq / (xs.size() - 1);
  // Gamma(4, 5/4): mean 5, variance 25/4.
  CHECK(std::abs(mean - 5.0) < 4.0 * std::sqrt(6.25 / xs.size()));
  CHECK(var == doctest::Approx(6.25).epsilon(0.03));
}

TEST_CASE("path loss composition") {
  const PathLossParams p{2.0, 1e-3, 10.0, 3.0, 1e-9};
  CHECK(avg_snr_from_pathloss(p) == doctest::Approx(2.0 * 1e-3 * 1e-3 / 1e-9).epsilon(1e-14));
  CHECK_THROWS_AS(avg_snr_from_pathloss(PathLossParams{0.0, 1.0, 1.0, 2.0, 1.0}), std::domain_error);
}

TEST_CASE("invalid models are rejected") {
  CHECK_THROWS_AS((ChannelModel{0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ChannelModel{2, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((ChannelModel{2, std::nan("")}.validate()), std::invalid_argument);
  CHECK_THROWS_AS(snr_cdf(ChannelModel{}, -1.0), std::domain_error);
}
