// SPDX-License-Identifier: Apache-2.0
#include "delaykit/fbl.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "delaykit/detail/invert.hpp"
#include "delaykit/specfun.hpp"

namespace delaykit {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kLog2e = std::numbers::log2e;

void check_positive_time(double t, const char* who) {
  if (!(t > 0.0)) throw std::domain_error(fmt::format("{}: time must be positive, got {}", who, t));
}

void check_positive_snr(SnrSample gamma, const char* who) {
  if (!(gamma.value > 0.0)) {
    throw std::domain_error(fmt::format("{}: SNR must be positive, got {}", who, gamma.value));
  }
}

// Exponent of the high-SNR law, θ + L ln2/(B t), and its derivative.
struct Exponent {
  double theta;    // Q⁻¹(ε)/√(B t)
  double shannon;  // L ln2/(B t)
};

Exponent exponent_parts(const FblConfig& c, double t) {
  return Exponent{c.q_inv() / std::sqrt(c.bandwidth_hz * t), shannon_exponent(c.link(), t)};
}

double log_gamma_norm(const ChannelModel& m) {
  const double n = m.antennas;
  return n * std::log(n / m.avg_snr) - specfun::log_gamma(n);
}

// Γ(N, (N/ρ)(e^u - 1)) / Γ(N).
double cdf_from_exponent(const ChannelModel& m, double u) {
  const double n = m.antennas;
  const double x = std::expm1(std::max(u, 0.0));
  if (std::isinf(x)) return 0.0;
  return specfun::regularized_upper_gamma(n, n / m.avg_snr * x);
}

// -(N^N/(ρ^N Γ(N))) u' e^u (e^u - 1)^{N-1} e^{-(N/ρ)(e^u - 1)}, in log space.
double pdf_from_exponent(const ChannelModel& m, double u, double u_prime) {
  const double n = m.antennas;
  const double x = std::expm1(u);
  if (std::isinf(x) || !(x > 0.0) || u_prime == 0.0) return 0.0;
  double log_value = log_gamma_norm(m) + std::log(std::abs(u_prime)) + u - n / m.avg_snr * x;
  if (m.antennas > 1) log_value += (n - 1.0) * std::log(x);
  const double magnitude = std::exp(log_value);
  return u_prime < 0.0 ? magnitude : -magnitude;
}

UTerms highsnr_terms(const FblConfig& c, double t) {
  const auto [theta, shannon] = exponent_parts(c, t);
  return UTerms{theta + shannon, -theta / (2.0 * t) - shannon / t};
}

}  // namespace

void FblConfig::validate() const {
  link().validate();
  if (!(bler > 0.0 && bler <= 0.5)) {
    throw std::invalid_argument(fmt::format("BLER must lie in (0, 0.5], got {}", bler));
  }
}

double FblConfig::q_inv() const { return specfun::gaussian_q_inv(bler); }

PreparedFbl::PreparedFbl(const FblConfig& c) : config(c), q_inv((c.validate(), c.q_inv())) {}

void SeriesParams::validate() const {
  if (lambert_terms < 1) {
    throw std::invalid_argument(fmt::format("lambert_terms must be >= 1, got {}", lambert_terms));
  }
  if (!(early_stop_tol >= 0.0)) throw std::invalid_argument("early_stop_tol must be >= 0");
}

namespace fbl {

double channel_dispersion(double gamma) {
  if (!(gamma >= 0.0)) throw std::domain_error(fmt::format("channel_dispersion: SNR must be >= 0, got {}", gamma));
  return -std::expm1(-2.0 * std::log1p(gamma)) * kLog2e * kLog2e;
}

double fbl_rate(SnrSample gamma, double n, double eps) {
  if (!(n > 0.0)) throw std::domain_error(fmt::format("fbl_rate: blocklength must be positive, got {}", n));
  return std::log1p(gamma.value) / kLn2 -
         std::sqrt(channel_dispersion(gamma.value) / n) * specfun::gaussian_q_inv(eps);
}

double min_blocklength(SnrSample gamma, const PreparedFbl& c) {
  check_positive_snr(gamma, "min_blocklength");
  const double rate = std::log1p(gamma.value) / kLn2;
  const double q = c.q_inv;
  const double bits = c.config.payload_bits;
  if (q == 0.0) return bits / rate;
  const double v = channel_dispersion(gamma.value);
  const double root = (std::sqrt(v) * q + std::sqrt(v * q * q + 4.0 * bits * rate)) / (2.0 * rate);
  return root * root;
}

double min_blocklength(SnrSample gamma, const FblConfig& c) { return min_blocklength(gamma, PreparedFbl{c}); }

double exact_delay_sample(SnrSample gamma, const PreparedFbl& c) {
  return min_blocklength(gamma, c) / c.config.bandwidth_hz;
}

double exact_delay_sample(SnrSample gamma, const FblConfig& c) {
  return exact_delay_sample(gamma, PreparedFbl{c});
}

double series_argument(const FblConfig& c, double t) {
  c.validate();
  check_positive_time(t, "series_argument");
  const auto [theta, shannon] = exponent_parts(c, t);
  return theta * std::exp(-2.0 * theta - 2.0 * shannon);
}

UTerms u_of_t(const FblConfig& c, const SeriesParams& s, double t) {
  c.validate();
  s.validate();
  check_positive_time(t, "u_of_t");
  const auto [theta, shannon] = exponent_parts(c, t);
  const double g = theta * std::exp(-2.0 * theta - 2.0 * shannon);

  Diagnostics ignored;
  // -½ Σ m^{m-1}/m! g^m equals ½ W-series(-g).
  const double w_series = specfun::lambert_w0_series(-g, s.lambert_terms, s.early_stop_tol, &ignored);

  // Σ m^{m-1}/(m-1)! g^m, term ratio g (m/(m-1))^{m-1}.
  double term = g;
  double d_series = g;
  for (int m = 2; m <= s.lambert_terms && g != 0.0; ++m) {
    term *= g * std::pow(static_cast<double>(m) / (m - 1), m - 1);
    d_series += term;
    if (s.early_stop_tol > 0.0 && std::abs(term) < s.early_stop_tol * std::abs(d_series)) break;
  }

  UTerms out;
  out.u_value = theta + shannon + 0.5 * w_series;
  out.u_derivative = -theta / (2.0 * t) - shannon / t -
                     0.5 * d_series * (theta / t + 2.0 * shannon / t - 1.0 / (2.0 * t));
  return out;
}

double fbl_delay_cdf(const ChannelModel& m, const FblConfig& c, const SeriesParams& s, double t) {
  m.validate();
  return cdf_from_exponent(m, u_of_t(c, s, t).u_value);
}

double fbl_delay_pdf(const ChannelModel& m, const FblConfig& c, const SeriesParams& s, double t) {
  m.validate();
  const UTerms u = u_of_t(c, s, t);
  return pdf_from_exponent(m, u.u_value, u.u_derivative);
}

double fbl_delay_cdf_highsnr(const ChannelModel& m, const FblConfig& c, double t) {
  m.validate();
  c.validate();
  check_positive_time(t, "fbl_delay_cdf_highsnr");
  return cdf_from_exponent(m, highsnr_terms(c, t).u_value);
}

double fbl_delay_pdf_highsnr(const ChannelModel& m, const FblConfig& c, double t) {
  m.validate();
  c.validate();
  check_positive_time(t, "fbl_delay_pdf_highsnr");
  const UTerms u = highsnr_terms(c, t);
  return pdf_from_exponent(m, u.u_value, u.u_derivative);
}

double fbl_delay_violation(const ChannelModel& m, const FblConfig& c, double tau_th) {
  m.validate();
  c.validate();
  check_positive_time(tau_th, "fbl_delay_violation");
  const double n = m.antennas;
  const double x = std::expm1(highsnr_terms(c, tau_th).u_value);
  if (std::isinf(x)) return 1.0;
  return specfun::regularized_lower_gamma(n, n / m.avg_snr * x);
}

double delay_quantile(const ChannelModel& m, const FblConfig& c, const SeriesParams& s, double p) {
  const double guess = exact_delay_sample(SnrSample{m.avg_snr}, c);
  return detail::invert_cdf([&](double t) { return fbl_delay_cdf(m, c, s, t); }, p, guess);
}

double delay_quantile_highsnr(const ChannelModel& m, const FblConfig& c, double p) {
  const double guess = delay_highsnr(SnrSample{m.avg_snr}, c);
  return detail::invert_cdf([&](double t) { return fbl_delay_cdf_highsnr(m, c, t); }, p, guess);
}

double delay_highsnr(SnrSample gamma, const PreparedFbl& c) {
  check_positive_snr(gamma, "delay_highsnr");
  const double q = c.q_inv;
  const double l = std::log1p(gamma.value);
  const double root = (q + std::sqrt(q * q + 4.0 * c.config.payload_bits * kLn2 * l)) /
                      (2.0 * std::sqrt(c.config.bandwidth_hz) * l);
  return root * root;
}

double delay_highsnr(SnrSample gamma, const FblConfig& c) { return delay_highsnr(gamma, PreparedFbl{c}); }

double approx_validity_threshold(const FblConfig& c) {
  c.validate();
  const double q = c.q_inv();
  return std::expm1(q * q / (4.0 * c.payload_bits * kLn2));
}

double delay_approx_terms(SnrSample gamma, const FblConfig& c, Diagnostics* sink) {
  check_positive_snr(gamma, "delay_approx_terms");
  const double threshold = approx_validity_threshold(c);
  if (gamma.value < threshold) {
    warn_if(sink, fmt::format("delay_approx_terms: SNR {:.4g} below validity threshold {:.4g}", gamma.value,
                              threshold));
  }
  const double q = c.q_inv();
  const double l = std::log1p(gamma.value);
  const double ll2 = c.payload_bits * kLn2;
  const double b = c.bandwidth_hz;
  return ll2 / (b * l) + std::sqrt(ll2) * q / (b * l * std::sqrt(l)) + q * q / (2.0 * b * l * l);
}

double delay_upper(SnrSample gamma, const FblConfig& c, Diagnostics* sink) {
  c.validate();
  check_positive_snr(gamma, "delay_upper");
  const double l = std::log1p(gamma.value);
  if (!(l > 1.0)) {
    warn_if(sink, fmt::format("delay_upper: ln(1+SNR) = {:.4g} <= 1, bound not guaranteed", l));
  }
  const double q = c.q_inv();
  const double ll2 = c.payload_bits * kLn2;
  const double b = c.bandwidth_hz;
  return (2.0 * ll2 + q * q) / (2.0 * b * l) + std::sqrt(ll2) * q / (b * l * std::sqrt(l));
}

MomentReport fbl_delay_moments(const ChannelModel& m, const FblConfig& c, const RateMoments& rm) {
  m.validate();
  c.validate();
  if (!(rm.m1 > 0.0)) {
    throw std::domain_error(fmt::format("fbl_delay_moments: E[R] must be positive, got {}", rm.m1));
  }
  const double q = c.q_inv();
  const double ll2 = c.payload_bits * kLn2;
  const double b = c.bandwidth_hz;
  const double e1 = rm.m1;
  const double v = rm.variance;

  const double lead = (2.0 * ll2 + q * q) / (2.0 * kLn2 * b);
  const double cross = std::sqrt(ll2) * q / (b * std::pow(kLn2, 1.5));
  const double cross_var = ll2 * q * q / (b * b * std::pow(kLn2, 3));

  MomentReport report;
  report.method = MomentMethod::theorem3;
  report.diagnostics = rm.diagnostics;
  report.mean_delay = lead * (1.0 / e1 + v / std::pow(e1, 3)) +
                      cross * (1.0 / std::pow(e1, 1.5) + 15.0 * v / (8.0 * std::pow(e1, 3.5)));
  report.jitter = lead * lead * (v / std::pow(e1, 4) - v * v / std::pow(e1, 6)) +
                  cross_var * (9.0 * v / (4.0 * std::pow(e1, 5)) - 225.0 * v * v / (64.0 * std::pow(e1, 7)));

  if (report.jitter < 0.0) {
    report.diagnostics.push_back(fmt::format("Taylor jitter {:.3g} s^2 is negative; clamped to 0", report.jitter));
    report.jitter = 0.0;
    report.jitter_clamped = true;
  }
  if (m.antennas == 1) {
    report.heavy_tail = true;
    report.diagnostics.push_back(
        "single antenna: the true mean and variance of the delay are infinite; values are Taylor approximations");
  }
  return report;
}

}  // namespace fbl

namespace fbl::single_antenna {

double delay_cdf(double avg_snr, const FblConfig& c, const SeriesParams& s, double t) {
  const double u = u_of_t(c, s, t).u_value;
  return std::exp(-std::expm1(std::max(u, 0.0)) / avg_snr);
}

double delay_pdf(double avg_snr, const FblConfig& c, const SeriesParams& s, double t) {
  const UTerms u = u_of_t(c, s, t);
  const double x = std::expm1(u.u_value);
  if (std::isinf(x)) return 0.0;
  return -u.u_derivative / avg_snr * std::exp(u.u_value - x / avg_snr);
}

}  // namespace fbl::single_antenna

}  // namespace delaykit
