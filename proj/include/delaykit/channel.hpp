// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "delaykit/random.hpp"

namespace delaykit {

/// Rayleigh-faded link with `antennas` i.i.d. branches combined at the
/// receiver; the instantaneous SNR is Gamma(N, ρ/N) with mean ρ.
struct ChannelModel {
  int antennas = 8;
  double avg_snr = 10.0;  // linear power ratio, not dB

  void validate() const;
};

/// Large-scale constituents of the average SNR.
struct PathLossParams {
  double tx_power = 1.0;     // W
  double ref_gain = 1.0;     // power gain at the reference distance
  double distance = 1.0;     // m
  double exponent = 2.0;     // path-loss exponent
  double noise_power = 1.0;  // W

  void validate() const;
};

/// Instantaneous linear SNR of one channel realization.
struct SnrSample {
  double value = 0.0;
};

/// ρ = P_t χ₀ d^{-α} / σ².
double avg_snr_from_pathloss(const PathLossParams& p);

double snr_cdf(const ChannelModel& m, double x);
double snr_pdf(const ChannelModel& m, double x);

/// Draws one SNR realization as (ρ/N) times a sum of N unit exponentials.
SnrSample snr_sample(const ChannelModel& m, RandomStream& rng);

}  // namespace delaykit
