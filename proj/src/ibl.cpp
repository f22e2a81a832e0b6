// SPDX-License-Identifier: Apache-2.0
#include "delaykit/ibl.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "delaykit/detail/invert.hpp"
#include "delaykit/specfun.hpp"

namespace delaykit {
namespace {

constexpr double kLn2 = std::numbers::ln2;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_positive_time(double t, const char* who) {
  if (!(t > 0.0)) throw std::domain_error(fmt::format("{}: time must be positive, got {}", who, t));
}

void check_rate(double y, const char* who) {
  if (!(y >= 0.0)) throw std::domain_error(fmt::format("{}: rate must be >= 0, got {}", who, y));
}

// log of N^N / (ρ^N Γ(N)), the gamma-law normaliser shared by every pdf here.
double log_gamma_norm(const ChannelModel& m) {
  const double n = m.antennas;
  return n * std::log(n / m.avg_snr) - specfun::log_gamma(n);
}

// log of x^{N-1} e^{-(N/ρ)x} for the SNR threshold x = e^a - 1 >= 0.
// Returns -inf when the density vanishes (x = 0 with N > 1, or x = +inf).
double log_gamma_kernel(const ChannelModel& m, double x) {
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
  const double n = m.antennas;
  double value = -(n / m.avg_snr) * x;
  if (m.antennas > 1) {
    if (x == 0.0) return -std::numeric_limits<double>::infinity();
    value += (n - 1.0) * std::log(x);
  }
  return value;
}

}  // namespace

void LinkConfig::validate() const {
  if (!(payload_bits > 0.0) || !std::isfinite(payload_bits)) {
    throw std::invalid_argument(fmt::format("payload bits must be positive, got {}", payload_bits));
  }
  if (!(bandwidth_hz > 0.0) || !std::isfinite(bandwidth_hz)) {
    throw std::invalid_argument(fmt::format("bandwidth must be positive, got {}", bandwidth_hz));
  }
}

void IblApproxParams::validate() const {
  if (!(log_b >= 100.0) || !std::isfinite(log_b)) {
    throw std::invalid_argument(fmt::format("log surrogate constant b must be >= 100, got {}", log_b));
  }
}

std::string_view to_string(MomentMethod method) {
  switch (method) {
    case MomentMethod::theorem1: return "theorem1";
    case MomentMethod::theorem2: return "theorem2";
    case MomentMethod::theorem3: return "theorem3";
    case MomentMethod::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

double shannon_exponent(const LinkConfig& c, double t) { return c.payload_bits * kLn2 / (c.bandwidth_hz * t); }

double shannon_delay(SnrSample gamma, const LinkConfig& c) {
  const double rate = std::log1p(gamma.value) / kLn2;
  return c.payload_bits / rate / c.bandwidth_hz;
}

namespace ibl {

double rate_cdf(const ChannelModel& m, double y) {
  check_rate(y, "rate_cdf");
  return snr_cdf(m, std::expm1(y * kLn2));
}

double rate_pdf(const ChannelModel& m, double y) {
  m.validate();
  check_rate(y, "rate_pdf");
  const double a = y * kLn2;
  const double kernel = log_gamma_kernel(m, std::expm1(a));
  if (std::isinf(kernel)) return 0.0;
  return std::exp(log_gamma_norm(m) + std::log(kLn2) + a + kernel);
}

double delay_cdf(const ChannelModel& m, const LinkConfig& c, double t) {
  m.validate();
  c.validate();
  check_positive_time(t, "delay_cdf");
  const double n = m.antennas;
  const double x = std::expm1(shannon_exponent(c, t));
  if (std::isinf(x)) return 0.0;
  return specfun::regularized_upper_gamma(n, n / m.avg_snr * x);
}

double delay_pdf(const ChannelModel& m, const LinkConfig& c, double t) {
  m.validate();
  c.validate();
  check_positive_time(t, "delay_pdf");
  const double a = shannon_exponent(c, t);
  const double kernel = log_gamma_kernel(m, std::expm1(a));
  if (std::isinf(kernel)) return 0.0;
  const double log_jacobian = std::log(c.payload_bits * kLn2 / c.bandwidth_hz) - 2.0 * std::log(t);
  return std::exp(log_gamma_norm(m) + log_jacobian + a + kernel);
}

double delay_violation(const ChannelModel& m, const LinkConfig& c, double tau_th) {
  m.validate();
  c.validate();
  check_positive_time(tau_th, "delay_violation");
  const double n = m.antennas;
  const double x = std::expm1(shannon_exponent(c, tau_th));
  if (std::isinf(x)) return 1.0;
  return specfun::regularized_lower_gamma(n, n / m.avg_snr * x);
}

double delay_quantile(const ChannelModel& m, const LinkConfig& c, double p) {
  const double guess = shannon_delay(SnrSample{m.avg_snr}, c);
  return detail::invert_cdf([&](double t) { return delay_cdf(m, c, t); }, p, guess);
}

RateMoments rate_moments_exact(const ChannelModel& m, const IblApproxParams& p) {
  m.validate();
  p.validate();
  const int big_n = m.antennas;
  const double n = big_n;
  const double y = n / m.avg_snr;
  const double b = p.log_b;
  const double log_prefactor = n * std::log(n) + y - n * std::log(m.avg_snr) - specfun::log_gamma(n);
  const double prefactor = std::exp(log_prefactor);

  double s1 = 0.0, s2 = 0.0;
  double err1 = 0.0, err2 = 0.0;
  double binom = 1.0;  // C(N-1, k)
  for (int k = 0; k < big_n; ++k) {
    if (k > 0) binom = binom * (big_n - k) / k;
    const double a_k = ((big_n - 1 - k) % 2 == 0) ? binom : -binom;
    const double psi0 = specfun::psi_helper(k + 1.0, y);
    const double psi1 = specfun::psi_helper(1.0 / b + k + 1.0, y);
    const double psi2 = specfun::psi_helper(2.0 / b + k + 1.0, y);
    s1 += a_k * b * (psi1 - psi0);
    s2 += a_k * b * b * (psi2 - 2.0 * psi1 + psi0);
    err1 += std::abs(a_k) * b * (psi1 + psi0);
    err2 += std::abs(a_k) * b * b * (psi2 + 2.0 * psi1 + psi0);
  }

  RateMoments rm;
  rm.m1 = prefactor * s1 / kLn2;
  rm.m2 = prefactor * s2 / (kLn2 * kLn2);
  rm.variance = rm.m2 - rm.m1 * rm.m1;

  const double rel1 = 4.0 * kEps * err1 / std::abs(s1);
  const double rel2 = 4.0 * kEps * err2 / std::abs(s2);
  if (rel1 > 1e-6 || rel2 > 1e-6) {
    rm.diagnostics.push_back(fmt::format(
        "alternating-sum cancellation: estimated relative error {:.3g} (E[R]), {:.3g} (E[R^2]) at N={}",
        rel1, rel2, big_n));
  }
  if (rm.variance < 0.0) {
    rm.diagnostics.push_back(fmt::format("negative Var[R] = {:.3g} from cancellation; clamped to 0", rm.variance));
    rm.variance = 0.0;
    rm.m2 = rm.m1 * rm.m1;
  }
  return rm;
}

RateMoments rate_moments_highsnr(const ChannelModel& m) {
  m.validate();
  const double n = m.antennas;
  const double rho = m.avg_snr;
  const double ratio2 = (rho / (1.0 + rho)) * (rho / (1.0 + rho));  // ρ²/(1+ρ)²

  RateMoments rm;
  rm.m1 = std::log1p(rho) / kLn2 - ratio2 / (2.0 * kLn2 * n);
  rm.variance = ratio2 / (kLn2 * kLn2 * n) - ratio2 * ratio2 / (4.0 * kLn2 * kLn2 * n * n);
  rm.m2 = rm.variance + rm.m1 * rm.m1;
  if (rho < 3.0) {
    rm.diagnostics.push_back(
        fmt::format("high-SNR rate moments used at rho = {:.3g} < 3; approximation degrades", rho));
  }
  return rm;
}

RateMoments rate_moments_quadrature(const ChannelModel& m) {
  m.validate();
  const double n = m.antennas;
  const double upper = m.avg_snr * (n + 10.0 * std::sqrt(n)) / n * 20.0;
  const ChannelModel model = m;
  auto moment = [&](int order) {
    auto integrand = [&](double x) {
      const double r = std::log1p(x) / kLn2;
      return std::pow(r, order) * snr_pdf(model, x);
    };
    // Split at the mean so the adaptive rule resolves the bulk separately from the tail.
    using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
    return Rule::integrate(integrand, 0.0, m.avg_snr, 20, 1e-14) +
           Rule::integrate(integrand, m.avg_snr, upper, 20, 1e-14);
  };
  RateMoments rm;
  rm.m1 = moment(1);
  rm.m2 = moment(2);
  rm.variance = rm.m2 - rm.m1 * rm.m1;
  return rm;
}

MomentReport delay_moments(const ChannelModel& m, const LinkConfig& c, const RateMoments& rm,
                           MomentMethod method) {
  m.validate();
  c.validate();
  if (!(rm.m1 > 0.0)) throw std::domain_error(fmt::format("delay_moments: E[R] must be positive, got {}", rm.m1));

  const double scale = c.payload_bits / c.bandwidth_hz;
  const double e1 = rm.m1;
  MomentReport report;
  report.method = method;
  report.diagnostics = rm.diagnostics;

  switch (method) {
    case MomentMethod::theorem1: {
      const double e2 = rm.m2;
      report.mean_delay = scale * e2 / (e1 * e1 * e1);
      report.jitter = scale * scale *
                      (-(e2 * e2) / std::pow(e1, 6) + 3.0 * e2 / std::pow(e1, 4) - 2.0 / (e1 * e1));
      break;
    }
    case MomentMethod::theorem2: {
      const double v = rm.variance;
      report.mean_delay = scale * (1.0 / e1 + v / (e1 * e1 * e1));
      report.jitter = scale * scale * (v / std::pow(e1, 4) - v * v / std::pow(e1, 6));
      break;
    }
    default:
      throw std::invalid_argument(
          fmt::format("delay_moments: method {} is not a Shannon-rate approximation", to_string(method)));
  }

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

MomentReport delay_moments(const ChannelModel& m, const LinkConfig& c, MomentMethod method,
                           const IblApproxParams& p) {
  switch (method) {
    case MomentMethod::theorem1: return delay_moments(m, c, rate_moments_exact(m, p), method);
    case MomentMethod::theorem2: return delay_moments(m, c, rate_moments_highsnr(m), method);
    default:
      throw std::invalid_argument(
          fmt::format("delay_moments: method {} is not a Shannon-rate approximation", to_string(method)));
  }
}

}  // namespace ibl

namespace ibl::single_antenna {

double rate_cdf(double avg_snr, double y) {
  check_rate(y, "rate_cdf");
  return -std::expm1(-std::expm1(y * kLn2) / avg_snr);
}

double rate_pdf(double avg_snr, double y) {
  check_rate(y, "rate_pdf");
  const double a = y * kLn2;
  return kLn2 / avg_snr * std::exp(a - std::expm1(a) / avg_snr);
}

double delay_cdf(double avg_snr, const LinkConfig& c, double t) {
  check_positive_time(t, "delay_cdf");
  return std::exp(-std::expm1(shannon_exponent(c, t)) / avg_snr);
}

double delay_pdf(double avg_snr, const LinkConfig& c, double t) {
  check_positive_time(t, "delay_pdf");
  const double a = shannon_exponent(c, t);
  const double x = std::expm1(a);
  if (std::isinf(x)) return 0.0;
  return c.payload_bits * kLn2 / (avg_snr * c.bandwidth_hz) / (t * t) * std::exp(a - x / avg_snr);
}

}  // namespace ibl::single_antenna

}  // namespace delaykit
