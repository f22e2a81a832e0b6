// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "delaykit/channel.hpp"
#include "delaykit/diagnostics.hpp"
#include "delaykit/ibl.hpp"

namespace delaykit {

/// Short-packet link under the normal approximation of the coding rate.
struct FblConfig {
  double payload_bits = 200.0;
  double bandwidth_hz = 200e3;
  double bler = 1e-7;  // target block error rate ε, in (0, 0.5]

  void validate() const;
  /// Q⁻¹(ε).
  [[nodiscard]] double q_inv() const;
  [[nodiscard]] LinkConfig link() const { return LinkConfig{payload_bits, bandwidth_hz}; }
};

/// FblConfig with Q⁻¹(ε) evaluated once, for per-draw loops.
struct PreparedFbl {
  explicit PreparedFbl(const FblConfig& c);

  FblConfig config;
  double q_inv;
};

/// Truncation of the Lambert-series term in u(t).
struct SeriesParams {
  int lambert_terms = 20;
  double early_stop_tol = 1e-14;

  void validate() const;
};

/// u(t) = ln(1 + γ*(t)) where γ*(t) is the SNR whose blocklength is exactly B t,
/// together with its time derivative.
struct UTerms {
  double u_value = 0.0;
  double u_derivative = 0.0;
};

namespace fbl {

/// V(γ) = [1 - (1+γ)^{-2}] (log₂ e)².
double channel_dispersion(double gamma);

/// log₂(1+γ) - √(V(γ)/n) Q⁻¹(ε); may be negative for small n.
double fbl_rate(SnrSample gamma, double n, double eps);

/// Real-valued root n of n log₂(1+γ) - √(n V) Q⁻¹(ε) = L.
double min_blocklength(SnrSample gamma, const FblConfig& c);
double min_blocklength(SnrSample gamma, const PreparedFbl& c);

/// τ = n(γ) / B.
double exact_delay_sample(SnrSample gamma, const FblConfig& c);
double exact_delay_sample(SnrSample gamma, const PreparedFbl& c);

/// θφ², the argument magnitude of the Lambert series inside u(t). Bounded by 1/(2e).
double series_argument(const FblConfig& c, double t);

UTerms u_of_t(const FblConfig& c, const SeriesParams& s, double t);

double fbl_delay_cdf(const ChannelModel& m, const FblConfig& c, const SeriesParams& s, double t);
double fbl_delay_pdf(const ChannelModel& m, const FblConfig& c, const SeriesParams& s, double t);

/// Delay law under V(γ) ≈ (log₂ e)²; stochastically larger than the exact law.
double fbl_delay_cdf_highsnr(const ChannelModel& m, const FblConfig& c, double t);
double fbl_delay_pdf_highsnr(const ChannelModel& m, const FblConfig& c, double t);

/// Pr{τ > τ_th} under the high-SNR delay law.
double fbl_delay_violation(const ChannelModel& m, const FblConfig& c, double tau_th);

double delay_quantile(const ChannelModel& m, const FblConfig& c, const SeriesParams& s, double p);
double delay_quantile_highsnr(const ChannelModel& m, const FblConfig& c, double p);

/// Per-draw delay with V(γ) ≈ (log₂ e)²; upper-bounds exact_delay_sample.
double delay_highsnr(SnrSample gamma, const FblConfig& c);
double delay_highsnr(SnrSample gamma, const PreparedFbl& c);

/// e^{(Q⁻¹(ε))² / (4 L ln 2)} - 1, the SNR above which the binomial expansion of
/// the high-SNR delay is valid.
double approx_validity_threshold(const FblConfig& c);

/// Three-term expansion of delay_highsnr. Warns below approx_validity_threshold.
double delay_approx_terms(SnrSample gamma, const FblConfig& c, Diagnostics* sink = nullptr);

/// Closed-form upper bound on the high-SNR delay; requires ln(1+γ) > 1 (warns otherwise).
double delay_upper(SnrSample gamma, const FblConfig& c, Diagnostics* sink = nullptr);

/// Mean and jitter of delay_upper by second-order Taylor expansion in the
/// rate moments. Accepts moments from either the exact-series or high-SNR path.
MomentReport fbl_delay_moments(const ChannelModel& m, const FblConfig& c, const RateMoments& rm);

}  // namespace fbl

namespace fbl::single_antenna {

double delay_cdf(double avg_snr, const FblConfig& c, const SeriesParams& s, double t);
double delay_pdf(double avg_snr, const FblConfig& c, const SeriesParams& s, double t);

}  // namespace fbl::single_antenna

}  // namespace delaykit
