// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "delaykit/channel.hpp"
#include "delaykit/fbl.hpp"
#include "delaykit/ibl.hpp"

namespace delaykit::mc {

struct McConfig {
  std::int64_t trials = 1'000'000;
  std::uint64_t seed = 42;
  int streams = 1;  // worker threads; output does not depend on it

  void validate() const;
};

/// Trials are cut into blocks of this many draws; block j always uses the
/// stream derived from (seed, j), whichever worker runs it.
inline constexpr std::int64_t kBlockSize = 65536;

/// Sorted per-draw samples; +inf entries (zero-SNR draws) sort last.
class EmpiricalDistribution {
 public:
  EmpiricalDistribution() = default;
  explicit EmpiricalDistribution(std::vector<double> samples);

  [[nodiscard]] const std::vector<double>& sorted_samples() const noexcept { return samples_; }
  [[nodiscard]] std::int64_t size() const noexcept { return static_cast<std::int64_t>(samples_.size()); }
  [[nodiscard]] std::int64_t infinite_count() const noexcept { return infinite_count_; }

  /// Fraction of samples <= t.
  [[nodiscard]] double ecdf(double t) const;
  /// Number of samples strictly greater than t.
  [[nodiscard]] std::int64_t count_above(double t) const;
  /// Empirical quantile (order statistic at rank ceil(p n)).
  [[nodiscard]] double quantile(double p) const;

 private:
  std::vector<double> samples_;
  std::int64_t infinite_count_ = 0;
};

struct ViolationEstimate {
  double probability = 0.0;
  double ci_low = 0.0;   // 95% Wilson interval
  double ci_high = 0.0;
  std::int64_t exceed = 0;
  std::int64_t trials = 0;
};

struct McMoments {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double std_error_mean = 0.0;
  double std_error_variance = 0.0;
  std::int64_t count = 0;              // finite samples used
  std::int64_t excluded_infinite = 0;  // +inf samples left out
  bool heavy_tail = false;             // largest sample dominates the variance
};

/// z-quantile of the two-sided 95% interval.
inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for k successes out of n.
std::pair<double, double> wilson_interval(std::int64_t k, std::int64_t n, double z = kZ95);

/// Generic driver: one SNR draw per trial, mapped through `delay_of_snr`.
EmpiricalDistribution simulate(const ChannelModel& m, const McConfig& mc,
                               const std::function<double(SnrSample)>& delay_of_snr);

/// Raw SNR draws.
EmpiricalDistribution simulate_snr(const ChannelModel& m, const McConfig& mc);

/// Shannon rate log₂(1+γ) per draw.
EmpiricalDistribution simulate_rate(const ChannelModel& m, const McConfig& mc);

/// Shannon delay L / (B log₂(1+γ)) per draw.
EmpiricalDistribution simulate_ibl(const ChannelModel& m, const LinkConfig& c, const McConfig& mc);

/// Exact finite-blocklength delay n(γ)/B per draw.
EmpiricalDistribution simulate_fbl(const ChannelModel& m, const FblConfig& c, const McConfig& mc);

/// High-SNR finite-blocklength delay (V ≈ (log₂ e)²) per draw.
EmpiricalDistribution simulate_fbl_highsnr(const ChannelModel& m, const FblConfig& c, const McConfig& mc);

ViolationEstimate empirical_violation(const EmpiricalDistribution& d, double tau_th);

McMoments empirical_moments(const EmpiricalDistribution& d);

}  // namespace delaykit::mc
