// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "delaykit/channel.hpp"
#include "delaykit/diagnostics.hpp"

namespace delaykit {

/// Payload and bandwidth of a Shannon-rate transmission: τ = L / (B log₂(1+γ)).
struct LinkConfig {
  double payload_bits = 1000.0;
  double bandwidth_hz = 200e3;

  void validate() const;
};

/// Constant b of the logarithm surrogate ln t ≈ b t^{1/b} - b.
struct IblApproxParams {
  double log_b = 1000.0;

  void validate() const;
};

/// First two moments of the transmission rate R = log₂(1+γ) in bits/s/Hz.
struct RateMoments {
  double m1 = 0.0;
  double m2 = 0.0;
  double variance = 0.0;
  std::vector<std::string> diagnostics;
};

enum class MomentMethod { theorem1, theorem2, theorem3, monte_carlo };

std::string_view to_string(MomentMethod method);

/// Mean delay (s) and jitter (delay variance, s²) of a delay law.
struct MomentReport {
  double mean_delay = 0.0;
  double jitter = 0.0;
  MomentMethod method = MomentMethod::theorem1;
  bool heavy_tail = false;      // true moments diverge (single antenna)
  bool jitter_clamped = false;  // Taylor jitter came out negative
  std::vector<std::string> diagnostics;
};

/// L ln2 / (B t): the Shannon-rate exponent so that 2^{L/(Bt)} = e^{a}.
double shannon_exponent(const LinkConfig& c, double t);

/// Per-draw Shannon delay; +inf for γ = 0.
double shannon_delay(SnrSample gamma, const LinkConfig& c);

namespace ibl {

double rate_cdf(const ChannelModel& m, double y);
double rate_pdf(const ChannelModel& m, double y);

double delay_cdf(const ChannelModel& m, const LinkConfig& c, double t);
double delay_pdf(const ChannelModel& m, const LinkConfig& c, double t);

/// Pr{τ > τ_th} = γ(N, (N/ρ)(2^{L/(Bτ_th)} - 1)) / Γ(N).
double delay_violation(const ChannelModel& m, const LinkConfig& c, double tau_th);

/// Delay t with delay_cdf(t) = p, by bisection.
double delay_quantile(const ChannelModel& m, const LinkConfig& c, double p);

/// E[R], E[R²] through the closed-form sums over Ψ(·, N/ρ) obtained with the
/// logarithm surrogate. Alternating sums lose precision as N grows; a
/// diagnostic is attached once the estimated relative error exceeds 1e-6.
RateMoments rate_moments_exact(const ChannelModel& m, const IblApproxParams& p = {});

/// High-SNR second-order approximations of E[R] and Var[R].
RateMoments rate_moments_highsnr(const ChannelModel& m);

/// Reference E[R], E[R²] by adaptive Gauss–Kronrod quadrature of
/// ∫ log₂(1+x)^k f_γ(x) dx; independent of the closed-form path.
RateMoments rate_moments_quadrature(const ChannelModel& m);

/// Second-order Taylor mean/jitter of τ = (L/B) R⁻¹ from rate moments.
/// theorem1 uses (E[R], E[R²]); theorem2 uses (E[R], Var[R]).
MomentReport delay_moments(const ChannelModel& m, const LinkConfig& c, const RateMoments& rm,
                           MomentMethod method);

/// Same, with the rate moments each theorem is stated with: theorem1 takes the
/// closed-form sums (rate_moments_exact), theorem2 the high-SNR expansion.
MomentReport delay_moments(const ChannelModel& m, const LinkConfig& c, MomentMethod method,
                           const IblApproxParams& p = {});

}  // namespace ibl

/// Closed forms specialised to a single antenna (exponential SNR).
namespace ibl::single_antenna {

double rate_cdf(double avg_snr, double y);
double rate_pdf(double avg_snr, double y);
double delay_cdf(double avg_snr, const LinkConfig& c, double t);
double delay_pdf(double avg_snr, const LinkConfig& c, double t);

}  // namespace ibl::single_antenna

}  // namespace delaykit
