// SPDX-License-Identifier: Apache-2.0
#include "delaykit/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <fmt/format.h>

namespace delaykit::mc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double guarded(double gamma, double delay) { return gamma > 0.0 ? delay : kInf; }

}  // namespace

void McConfig::validate() const {
  if (trials < 1000) throw std::invalid_argument(fmt::format("trials must be >= 1000, got {}", trials));
  if (streams < 1) throw std::invalid_argument(fmt::format("streams must be >= 1, got {}", streams));
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples) : samples_(std::move(samples)) {
  std::sort(samples_.begin(), samples_.end());
  const auto first_inf = std::lower_bound(samples_.begin(), samples_.end(), kInf);
  infinite_count_ = samples_.end() - first_inf;
}

double EmpiricalDistribution::ecdf(double t) const {
  if (samples_.empty()) return 0.0;
  const auto rank = std::upper_bound(samples_.begin(), samples_.end(), t) - samples_.begin();
  return static_cast<double>(rank) / static_cast<double>(samples_.size());
}

std::int64_t EmpiricalDistribution::count_above(double t) const {
  return samples_.end() - std::upper_bound(samples_.begin(), samples_.end(), t);
}

double EmpiricalDistribution::quantile(double p) const {
  if (samples_.empty()) throw std::domain_error("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error(fmt::format("quantile level must lie in [0, 1], got {}", p));
  const auto n = static_cast<double>(samples_.size());
  auto rank = static_cast<std::size_t>(std::ceil(p * n));
  rank = std::clamp<std::size_t>(rank, 1, samples_.size());
  return samples_[rank - 1];
}

std::pair<double, double> wilson_interval(std::int64_t k, std::int64_t n, double z) {
  if (n <= 0 || k < 0 || k > n) throw std::domain_error(fmt::format("wilson_interval: need 0 <= k <= n, n > 0 (k={}, n={})", k, n));
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

EmpiricalDistribution simulate(const ChannelModel& m, const McConfig& mc,
                               const std::function<double(SnrSample)>& delay_of_snr) {
  m.validate();
  mc.validate();
  std::vector<double> out(static_cast<std::size_t>(mc.trials));
  const std::int64_t blocks = (mc.trials + kBlockSize - 1) / kBlockSize;
  const int workers = static_cast<int>(std::min<std::int64_t>(mc.streams, blocks));

  auto run = [&](int worker) {
    for (std::int64_t j = worker; j < blocks; j += workers) {
      RandomStream rng(derive_stream_seed(mc.seed, static_cast<std::uint64_t>(j)));
      const std::int64_t begin = j * kBlockSize;
      const std::int64_t end = std::min(mc.trials, begin + kBlockSize);
      for (std::int64_t i = begin; i < end; ++i) out[static_cast<std::size_t>(i)] = delay_of_snr(snr_sample(m, rng));
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  return EmpiricalDistribution(std::move(out));
}

EmpiricalDistribution simulate_snr(const ChannelModel& m, const McConfig& mc) {
  return simulate(m, mc, [](SnrSample g) { return g.value; });
}

EmpiricalDistribution simulate_rate(const ChannelModel& m, const McConfig& mc) {
  return simulate(m, mc, [](SnrSample g) { return std::log1p(g.value) / std::numbers::ln2; });
}

EmpiricalDistribution simulate_ibl(const ChannelModel& m, const LinkConfig& c, const McConfig& mc) {
  c.validate();
  return simulate(m, mc, [&c](SnrSample g) { return guarded(g.value, shannon_delay(g, c)); });
}

EmpiricalDistribution simulate_fbl(const ChannelModel& m, const FblConfig& c, const McConfig& mc) {
  const PreparedFbl prepared(c);
  return simulate(m, mc, [&prepared](SnrSample g) { return guarded(g.value, fbl::exact_delay_sample(g, prepared)); });
}

EmpiricalDistribution simulate_fbl_highsnr(const ChannelModel& m, const FblConfig& c, const McConfig& mc) {
  const PreparedFbl prepared(c);
  return simulate(m, mc, [&prepared](SnrSample g) { return guarded(g.value, fbl::delay_highsnr(g, prepared)); });
}

ViolationEstimate empirical_violation(const EmpiricalDistribution& d, double tau_th) {
  if (!(tau_th > 0.0)) throw std::domain_error(fmt::format("empirical_violation: threshold must be positive, got {}", tau_th));
  ViolationEstimate v;
  v.trials = d.size();
  v.exceed = d.count_above(tau_th);
  v.probability = static_cast<double>(v.exceed) / static_cast<double>(v.trials);
  std::tie(v.ci_low, v.ci_high) = wilson_interval(v.exceed, v.trials);
  return v;
}

McMoments empirical_moments(const EmpiricalDistribution& d) {
  const auto& s = d.sorted_samples();
  McMoments r;
  r.excluded_infinite = d.infinite_count();
  r.count = d.size() - d.infinite_count();
  if (r.count < 2) throw std::domain_error("empirical_moments: need at least two finite samples");
  const auto finite_end = s.begin() + r.count;
  const double n = static_cast<double>(r.count);

  double sum = 0.0;
  for (auto it = s.begin(); it != finite_end; ++it) sum += *it;
  r.mean = sum / n;

  double m2 = 0.0, m4 = 0.0, largest = 0.0, correction = 0.0;
  for (auto it = s.begin(); it != finite_end; ++it) {
    const double dev = *it - r.mean;
    const double sq = dev * dev;
    correction += dev;
    m2 += sq;
    m4 += sq * sq;
    largest = std::max(largest, sq);
  }
  // Two-pass with the compensating term for rounding in the mean.
  const double ss = m2 - correction * correction / n;
  r.variance = std::max(0.0, ss / (n - 1.0));
  r.std_error_mean = std::sqrt(r.variance / n);
  const double mu4 = m4 / n;
  const double mu2 = ss / n;
  r.std_error_variance = std::sqrt(std::max(0.0, (mu4 - mu2 * mu2 * (n - 3.0) / (n - 1.0)) / n));
  r.heavy_tail = ss > 0.0 && largest > 0.05 * m2;
  return r;
}

}  // namespace delaykit::mc
