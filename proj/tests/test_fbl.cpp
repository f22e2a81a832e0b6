#include <cmath>
#include <stdexcept>
#include <numbers>
#include <random>

#include <doctest.h>

#include "delaykit/fbl.hpp"
#include "delaykit/specfun.hpp"
#include "delaykit/validate.hpp"

using namespace delaykit;

namespace {

const FblConfig kCfg{200.0, 200e3, 1e-7};
const SeriesParams kSeries{20, 1e-14};

double db(double v) { return std::pow(10.0, v / 10.0); }

}  // namespace

TEST_CASE("minimum blocklength solves the normal-approximation equation") {
  const double q = specfun::gaussian_q_inv(kCfg.bler);
  for (double g : {0.05, 0.5, 3.0, 10.0, 100.0, 1e4}) {
    const double n = fbl::min_blocklength(SnrSample{g}, kCfg);
    const double lhs = n * std::log2(1.0 + g) - std::sqrt(n * fbl::channel_dispersion(g)) * q;
    CAPTURE(g);
    CHECK(lhs == doctest::Approx(kCfg.payload_bits).epsilon(1e-12));
    CHECK(fbl::fbl_rate(SnrSample{g}, n, kCfg.bler) * n == doctest::Approx(kCfg.payload_bits).epsilon(1e-12));
  }
}

TEST_CASE("dispersion values") {
  CHECK(fbl::channel_dispersion(0.0) == 0.0);
  CHECK(fbl::channel_dispersion(1.0) == doctest::Approx(0.75 * std::numbers::log2e * std::numbers::log2e));
  CHECK_THROWS_AS(fbl::channel_dispersion(-1.0), std::domain_error);
}

TEST_CASE("finite blocklength delay exceeds the Shannon delay and grows as BLER tightens") {
  const LinkConfig link = kCfg.link();
  for (double g : {0.3, 1.0, 10.0, 300.0}) {
    const SnrSample s{g};
    double prev = shannon_delay(s, link);
    for (double eps : {0.5, 1e-2, 1e-5, 1e-7, 1e-9}) {
      const double d = fbl::exact_delay_sample(s, FblConfig{kCfg.payload_bits, kCfg.bandwidth_hz, eps});
      CHECK(d >= prev);
      prev = d;
    }
  }
}

TEST_CASE("ordering exact <= high-SNR <= upper on the validity grid") {
  for (double gdb = 5.0; gdb <= 40.0; gdb += 0.25) {
    const SnrSample g{db(gdb)};
    const double exact = fbl::exact_delay_sample(g, kCfg);
    const double high = fbl::delay_highsnr(g, kCfg);
    const double upper = fbl::delay_upper(g, kCfg);
    CAPTURE(gdb);
    CHECK(exact <= high);
    CHECK(high <= upper);
    CHECK(fbl::delay_approx_terms(g, kCfg) == doctest::Approx(high).epsilon(0.02));
  }
}

TEST_CASE("approximation warnings") {
  Diagnostics diag;
  fbl::delay_upper(SnrSample{1.0}, kCfg, &diag);
  CHECK_FALSE(diag.empty());
  Diagnostics none;
  fbl::delay_upper(SnrSample{10.0}, kCfg, &none);
  CHECK(none.empty());
  Diagnostics low;
  const FblConfig strict{100.0, 200e3, 1e-9};
  fbl::delay_approx_terms(SnrSample{0.1}, strict, &low);
  CHECK_FALSE(low.empty());
}

TEST_CASE("validity threshold constant") {
  const double v = fbl::approx_validity_threshold(FblConfig{100.0, 200e3, 1e-9});
  const double q = 5.997807015008182;
  CHECK(v == doctest::Approx(std::expm1(q * q / (400.0 * std::numbers::ln2))).epsilon(1e-12));
  CHECK(std::abs(v - 0.14) <= 0.01);
}

TEST_CASE("series argument stays inside the convergence disc") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const double t = std::pow(10.0, -7.0 + 6.0 * u(rng));
    const double eps = std::pow(10.0, -12.0 * u(rng)) * 0.5;
    const double bits = std::pow(10.0, 1.0 + 3.0 * u(rng));
    const double bw = std::pow(10.0, 3.0 + 4.0 * u(rng));
    const FblConfig c{bits, bw, eps};
    const double g = fbl::series_argument(c, t);
    CHECK(g >= 0.0);
    CHECK(g <= 1.0 / (2.0 * std::numbers::e) * (1.0 + 1e-12));
  }
}

TEST_CASE("u(t) solves the linearized blocklength relation") {
  // With √(1 - e^{-2u}) ≈ 1 - e^{-2u}/2 the relation becomes u = s + θ - (θ/2) e^{-2u}.
  const SeriesParams fine{200, 0.0};
  for (double t : {2e-4, 4e-4, 8e-4, 2e-3}) {
    const double u = fbl::u_of_t(kCfg, fine, t).u_value;
    const double theta = specfun::gaussian_q_inv(kCfg.bler) / std::sqrt(kCfg.bandwidth_hz * t);
    const double s = kCfg.payload_bits * std::numbers::ln2 / (kCfg.bandwidth_hz * t);
    CAPTURE(t);
    CHECK(std::abs(u - (s + theta - 0.5 * theta * std::exp(-2.0 * u))) <= 1e-12 * u);
    CHECK(fbl::exact_delay_sample(SnrSample{std::expm1(u)}, kCfg) == doctest::Approx(t).epsilon(1e-2));
  }
}

TEST_CASE("more series terms never increase the truncation residual") {
  for (double t : {1.5e-4, 3e-4, 1e-3}) {
    double prev = std::numeric_limits<double>::infinity();
    for (int m : {1, 5, 10, 20}) {
      const double a = fbl::u_of_t(kCfg, SeriesParams{m, 0.0}, t).u_value;
      const double b = fbl::u_of_t(kCfg, SeriesParams{m + 10, 0.0}, t).u_value;
      const double residual = std::abs(a - b);
      CAPTURE(t);
      CAPTURE(m);
      CHECK(residual <= prev);
      prev = residual;
    }
  }
}

TEST_CASE("u derivative matches a central difference") {
  for (double t : {2e-4, 5e-4, 1e-3}) {
    const double h = 1e-6 * t;
    const double fd = (fbl::u_of_t(kCfg, kSeries, t + h).u_value - fbl::u_of_t(kCfg, kSeries, t - h).u_value) / (2 * h);
    CHECK(fbl::u_of_t(kCfg, kSeries, t).u_derivative == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("half BLER collapses onto the Shannon results") {
  const ChannelModel m{8, 10.0};
  const LinkConfig link{1000.0, 200e3};
  const FblConfig half{1000.0, 200e3, 0.5};
  for (double t : {8e-4, 1.2e-3, 2e-3, 4e-3}) {
    CHECK(std::abs(fbl::fbl_delay_cdf(m, half, kSeries, t) - ibl::delay_cdf(m, link, t)) <= 1e-10);
    CHECK(fbl::fbl_delay_pdf(m, half, kSeries, t) == doctest::Approx(ibl::delay_pdf(m, link, t)).epsilon(1e-10));
    CHECK(std::abs(fbl::fbl_delay_violation(m, half, t) - ibl::delay_violation(m, link, t)) <= 1e-10);
  }
  for (double g : {0.1, 1.0, 50.0}) {
    CHECK(fbl::exact_delay_sample(SnrSample{g}, half) == shannon_delay(SnrSample{g}, link));
  }
}

TEST_CASE("N=1 reduces to the single-antenna forms") {
  const ChannelModel one{1, 10.0};
  for (double t : {2e-4, 4e-4, 1e-3, 5e-3}) {
    CHECK(std::abs(fbl::fbl_delay_cdf(one, kCfg, kSeries, t) - fbl::single_antenna::delay_cdf(10.0, kCfg, kSeries, t)) <=
          1e-12);
    CHECK(fbl::fbl_delay_pdf(one, kCfg, kSeries, t) ==
          doctest::Approx(fbl::single_antenna::delay_pdf(10.0, kCfg, kSeries, t)).epsilon(1e-12));
  }
}

TEST_CASE("high-SNR law is stochastically larger than the series law") {
  const ChannelModel m{8, 10.0};
  for (double t = 2e-4; t < 2e-3; t *= 1.1) {
    CHECK(fbl::fbl_delay_cdf_highsnr(m, kCfg, t) <= fbl::fbl_delay_cdf(m, kCfg, kSeries, t) + 1e-12);
  }
}

TEST_CASE("pdf/cdf consistency check rejects a sign-flipped density") {
  const ChannelModel m{8, 10.0};
  auto cdf = [&](double t) { return fbl::fbl_delay_cdf(m, kCfg, kSeries, t); };
  auto pdf = [&](double t) { return fbl::fbl_delay_pdf(m, kCfg, kSeries, t); };
  auto flipped = [&](double t) { return -pdf(t); };
  const std::vector<double> pts{3.2e-4, 3.6e-4, 4.2e-4, 5e-4};
  CHECK(validate::check_pdf_matches_cdf("series", cdf, pdf, pts).passed);
  CHECK_FALSE(validate::check_pdf_matches_cdf("series flipped", cdf, flipped, pts).passed);
}

TEST_CASE("theorem three reduces to the Shannon Taylor moments at half BLER") {
  const ChannelModel m{8, 10.0};
  const LinkConfig link{200.0, 200e3};
  const auto rm = ibl::rate_moments_exact(m);
  const auto a = fbl::fbl_delay_moments(m, FblConfig{200.0, 200e3, 0.5}, rm);
  const auto b = ibl::delay_moments(m, link, rm, MomentMethod::theorem2);
  CHECK(a.mean_delay == doctest::Approx(b.mean_delay).epsilon(1e-12));
  CHECK(a.jitter == doctest::Approx(b.jitter).epsilon(1e-12));
  CHECK(a.method == MomentMethod::theorem3);
}

TEST_CASE("configuration errors") {
  CHECK_THROWS_AS((FblConfig{200.0, 200e3, 0.6}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((FblConfig{200.0, 200e3, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SeriesParams{0, 0.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS(fbl::exact_delay_sample(SnrSample{0.0}, kCfg), std::domain_error);
  CHECK_THROWS_AS(fbl::u_of_t(kCfg, kSeries, -1.0), std::domain_error);
}
