// SPDX-License-Identifier: Apache-2.0
#include "delaykit/channel.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "delaykit/specfun.hpp"

namespace delaykit {

void ChannelModel::validate() const {
  if (antennas < 1) throw std::invalid_argument(fmt::format("antennas must be >= 1, got {}", antennas));
  if (!(avg_snr > 0.0) || !std::isfinite(avg_snr)) {
    throw std::invalid_argument(fmt::format("average SNR must be positive and finite, got {}", avg_snr));
  }
}

void PathLossParams::validate() const {
  for (double v : {tx_power, ref_gain, distance, exponent, noise_power}) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::domain_error("path-loss parameters must all be positive and finite");
    }
  }
}

double avg_snr_from_pathloss(const PathLossParams& p) {
  p.validate();
  return p.tx_power * p.ref_gain * std::pow(p.distance, -p.exponent) / p.noise_power;
}

double snr_cdf(const ChannelModel& m, double x) {
  m.validate();
  if (!(x >= 0.0)) throw std::domain_error(fmt::format("snr_cdf: x must be >= 0, got {}", x));
  const double n = m.antennas;
  return specfun::regularized_lower_gamma(n, n / m.avg_snr * x);
}

double snr_pdf(const ChannelModel& m, double x) {
  m.validate();
  if (!(x >= 0.0)) throw std::domain_error(fmt::format("snr_pdf: x must be >= 0, got {}", x));
  const double n = m.antennas;
  const double rate = n / m.avg_snr;
  if (x == 0.0) return m.antennas == 1 ? rate : 0.0;
  if (std::isinf(x)) return 0.0;
  return std::exp(n * std::log(rate) + (n - 1.0) * std::log(x) - rate * x - specfun::log_gamma(n));
}

SnrSample snr_sample(const ChannelModel& m, RandomStream& rng) {
  double sum = 0.0;
  for (int i = 0; i < m.antennas; ++i) sum += standard_exponential(rng);
  return SnrSample{sum * m.avg_snr / m.antennas};
}

}  // namespace delaykit
