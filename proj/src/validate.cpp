// SPDX-License-Identifier: Apache-2.0
#include "delaykit/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "delaykit/channel.hpp"
#include "delaykit/detail/invert.hpp"
#include "delaykit/fbl.hpp"
#include "delaykit/ibl.hpp"
#include "delaykit/mc.hpp"
#include "delaykit/specfun.hpp"

namespace delaykit::validate {
namespace {

double db(double v) { return std::pow(10.0, v / 10.0); }

CheckResult bounded(std::string name, double measured, double tolerance, std::string detail = {}) {
  CheckResult r;
  r.name = std::move(name);
  r.measured = measured;
  r.tolerance = tolerance;
  r.passed = std::isfinite(measured) && measured <= tolerance;
  r.detail = std::move(detail);
  return r;
}

// Ordering checks report the number of violated pairs against a tolerance of 0.
CheckResult ordered(std::string name, int violations, std::string detail = {}) {
  return bounded(std::move(name), violations, 0.0, std::move(detail));
}

std::vector<double> levels(int count) {
  std::vector<double> p(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) p[static_cast<std::size_t>(k)] = (k + 0.5) / count;
  return p;
}

std::vector<double> quantile_points(const std::function<double(double)>& cdf, double guess, const std::vector<double>& ps) {
  std::vector<double> t;
  t.reserve(ps.size());
  for (double p : ps) t.push_back(detail::invert_cdf(cdf, p, guess));
  return t;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> v = linspace(std::log(a), std::log(b), n);
  for (double& x : v) x = std::exp(x);
  return v;
}

int strictly_decreasing_violations(const std::vector<double>& v) {
  int bad = 0;
  for (std::size_t i = 1; i < v.size(); ++i) bad += !(v[i] < v[i - 1]);
  return bad;
}

int nonincreasing_violations(const std::vector<double>& v) {
  int bad = 0;
  for (std::size_t i = 1; i < v.size(); ++i) bad += !(v[i] <= v[i - 1]);
  return bad;
}

mc::McConfig mc_config(const ValidateOptions& o, std::int64_t trials, std::uint64_t salt) {
  return mc::McConfig{trials, splitmix64(o.seed + salt), o.streams};
}

// Closed-form CDF vs ECDF at the given points; deviation normalised by
// band(F) = factor·√(F(1−F)/n) + floor, floored at `min_band`.
CheckResult ecdf_check(const std::string& name, const std::function<double(double)>& cdf,
                       const mc::EmpiricalDistribution& d, const std::vector<double>& points, double factor,
                       double floor, double min_band) {
  double worst = 0.0;
  std::string where;
  for (double t : points) {
    const double f = cdf(t);
    const double band = binomial_band(f, d.size(), factor, floor, min_band);
    const double dev = std::abs(f - d.ecdf(t)) / band;
    if (dev > worst || where.empty()) {
      worst = std::max(worst, dev);
      where = fmt::format("worst at t={:.6g} s: closed form {:.6g}, empirical {:.6g}, band {:.3g}", t, f, d.ecdf(t), band);
    }
  }
  return bounded(name + " (deviation / band)", worst, 1.0, where);
}

double relative_gap(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min());
}

// --- criterion 1 ---------------------------------------------------------

CriterionResult ibl_distribution(const ValidateOptions& o) {
  CriterionResult r;
  const LinkConfig link{1000.0, 200e3};
  const auto ps = levels(20);
  struct Case {
    int antennas;
    double snr_db;
  };
  std::uint64_t salt = 100;
  for (const Case k : {Case{8, 10.0}, Case{1, 0.0}, Case{1, 10.0}, Case{1, 20.0}}) {
    const ChannelModel m{k.antennas, db(k.snr_db)};
    std::function<double(double)> cdf;
    if (k.antennas == 1) {
      cdf = [&m, &link](double t) { return ibl::single_antenna::delay_cdf(m.avg_snr, link, t); };
    } else {
      cdf = [&m, &link](double t) { return ibl::delay_cdf(m, link, t); };
    }
    const auto points = quantile_points(cdf, shannon_delay(SnrSample{m.avg_snr}, link), ps);
    const auto d = mc::simulate_ibl(m, link, mc_config(o, o.trials, salt++));
    r.add(ecdf_check(fmt::format("IBL delay CDF vs MC, N={}, rho={} dB", k.antennas, k.snr_db), cdf, d, points, 3.0,
                     1e-4, 0.0));
  }
  return r;
}

// --- criterion 2 ---------------------------------------------------------

CriterionResult fbl_distribution(const ValidateOptions& o) {
  CriterionResult r;
  const ChannelModel m{8, db(10.0)};
  const FblConfig c{200.0, 200e3, 1e-7};
  const SeriesParams s{20, 1e-14};
  auto lemma5 = [&](double t) { return fbl::fbl_delay_cdf(m, c, s, t); };
  const auto points = quantile_points(lemma5, fbl::exact_delay_sample(SnrSample{m.avg_snr}, c), levels(20));
  const auto d = mc::simulate_fbl(m, c, mc_config(o, o.trials, 200));
  r.add(ecdf_check("FBL series CDF (M=20) vs MC of exact delays", lemma5, d, points, 3.0, 0.0, 0.01));

  double worst = 0.0;
  double at = 0.0;
  for (double t : points) {
    const double gap = std::abs(fbl::fbl_delay_cdf_highsnr(m, c, t) - lemma5(t));
    if (gap >= worst) {
      worst = gap;
      at = t;
    }
  }
  r.add(bounded("FBL high-SNR CDF vs series CDF (max abs gap)", worst, 0.02, fmt::format("worst at t={:.6g} s", at)));
  return r;
}

// --- criterion 3 ---------------------------------------------------------

CriterionResult moment_formulas(const ValidateOptions& o) {
  CriterionResult r;
  const LinkConfig link{1000.0, 200e3};
  const FblConfig fcfg{200.0, 200e3, 1e-7};
  const std::vector<double> snrs_db{5.0, 10.0, 15.0, 20.0};

  struct Column {
    std::string name;
    bool finite;
    bool jitter;
    double tolerance;
    std::vector<double> values;
    double worst = 0.0;
    std::string detail;
  };
  std::vector<Column> cols{
      {"IBL theorem1 mean", false, false, 0.05, {}, 0.0, {}},
      {"IBL theorem2 mean", false, false, 0.05, {}, 0.0, {}},
      {"IBL theorem1 jitter", false, true, 0.25, {}, 0.0, {}},
      {"IBL theorem2 jitter", false, true, 0.25, {}, 0.0, {}},
      {"FBL theorem3 mean (closed-form rate moments)", true, false, 0.15, {}, 0.0, {}},
      {"FBL theorem3 mean (high-SNR rate moments)", true, false, 0.15, {}, 0.0, {}},
      {"FBL theorem3 jitter (closed-form rate moments)", true, true, 0.35, {}, 0.0, {}},
      {"FBL theorem3 jitter (high-SNR rate moments)", true, true, 0.35, {}, 0.0, {}},
  };
  std::vector<double> mcim, mcij, mcfm, mcfj;

  std::uint64_t salt = 300;
  for (double sdb : snrs_db) {
    const ChannelModel m{8, db(sdb)};
    const auto exact = ibl::rate_moments_exact(m);
    const auto high = ibl::rate_moments_highsnr(m);
    const auto th1 = ibl::delay_moments(m, link, MomentMethod::theorem1);
    const auto th2 = ibl::delay_moments(m, link, MomentMethod::theorem2);
    const auto th3a = fbl::fbl_delay_moments(m, fcfg, exact);
    const auto th3b = fbl::fbl_delay_moments(m, fcfg, high);
    const auto mi = mc::empirical_moments(mc::simulate_ibl(m, link, mc_config(o, o.trials, salt++)));
    const auto mf = mc::empirical_moments(mc::simulate_fbl(m, fcfg, mc_config(o, o.trials, salt++)));
    mcim.push_back(mi.mean);
    mcij.push_back(mi.variance);
    mcfm.push_back(mf.mean);
    mcfj.push_back(mf.variance);

    const double formula[] = {th1.mean_delay, th2.mean_delay, th1.jitter, th2.jitter,
                              th3a.mean_delay, th3b.mean_delay, th3a.jitter, th3b.jitter};
    for (std::size_t i = 0; i < cols.size(); ++i) {
      auto& c = cols[i];
      const double sim = c.finite ? (c.jitter ? mf.variance : mf.mean) : (c.jitter ? mi.variance : mi.mean);
      c.values.push_back(formula[i]);
      const double err = relative_gap(formula[i], sim);
      if (err >= c.worst || c.detail.empty()) {
        c.worst = std::max(c.worst, err);
        c.detail = fmt::format("worst at {} dB: formula {:.6g}, MC {:.6g}", sdb, formula[i], sim);
      }
    }
  }

  for (const auto& c : cols) r.add(bounded(c.name + " vs MC (max rel err)", c.worst, c.tolerance, c.detail));
  int bad = strictly_decreasing_violations(mcim) + strictly_decreasing_violations(mcij) +
            strictly_decreasing_violations(mcfm) + strictly_decreasing_violations(mcfj);
  for (const auto& c : cols) bad += strictly_decreasing_violations(c.values);
  r.add(ordered("all mean/jitter columns strictly decreasing in rho", bad));
  return r;
}

// --- criterion 4 ---------------------------------------------------------

CriterionResult antenna_trend(const ValidateOptions& o) {
  CriterionResult r;
  const LinkConfig link{1000.0, 200e3};
  const FblConfig fcfg{200.0, 200e3, 1e-7};
  std::uint64_t salt = 400;
  for (const bool finite : {false, true}) {
    const char* label = finite ? "FBL" : "IBL";
    auto jitter = [&](int n) {
      const ChannelModel m{n, db(10.0)};
      const auto cfg = mc_config(o, o.trials, salt++);
      return mc::empirical_moments(finite ? mc::simulate_fbl(m, fcfg, cfg) : mc::simulate_ibl(m, link, cfg)).variance;
    };
    const double j2 = jitter(2), j8 = jitter(8), j16 = jitter(16), j32 = jitter(32);
    r.add(bounded(fmt::format("{} MC jitter N=8 / N=2", label), j8 / j2, 0.5,
                  fmt::format("N=2 {:.6g} s^2, N=8 {:.6g} s^2", j2, j8)));
    r.add(bounded(fmt::format("{} MC jitter change N=16 -> N=32 (rel)", label), relative_gap(j32, j16), 0.10,
                  fmt::format("N=16 {:.6g} s^2, N=32 {:.6g} s^2", j16, j32)));
  }
  return r;
}

// --- criterion 5 ---------------------------------------------------------

CheckResult wilson_check(const std::string& name, const std::function<double(double)>& closed,
                         const mc::EmpiricalDistribution& d, const std::vector<double>& points) {
  double worst = 0.0;
  std::string where;
  for (double t : points) {
    const double p = closed(t);
    const auto v = mc::empirical_violation(d, t);
    const double half = p >= v.probability ? v.ci_high - v.probability : v.probability - v.ci_low;
    const double dev = half > 0.0 ? std::abs(p - v.probability) / half : (p == v.probability ? 0.0 : 1e300);
    if (dev >= worst || where.empty()) {
      worst = std::max(worst, dev);
      where = fmt::format("worst at t={:.6g} s: closed form {:.6g}, MC {:.6g} [{:.6g}, {:.6g}]", t, p, v.probability,
                          v.ci_low, v.ci_high);
    }
  }
  return bounded(name + " (distance / Wilson half-width)", worst, 1.0, where);
}

CriterionResult violation_probability(const ValidateOptions& o) {
  CriterionResult r;
  const ChannelModel m{8, db(10.0)};
  const LinkConfig link{1000.0, 200e3};
  const FblConfig fcfg{200.0, 200e3, 1e-7};
  const auto ibl_grid = linspace(1e-3, 4e-3, 10);
  const auto fbl_grid = linspace(0.4e-3, 1.2e-3, 10);

  auto eq21 = [&](double t) { return ibl::delay_violation(m, link, t); };
  auto eq46 = [&](double t) { return fbl::fbl_delay_violation(m, fcfg, t); };
  {
    const auto d = mc::simulate_ibl(m, link, mc_config(o, o.violation_trials, 500));
    r.add(wilson_check("IBL closed-form violation vs MC", eq21, d, ibl_grid));
    std::vector<double> freq;
    for (double t : ibl_grid) freq.push_back(mc::empirical_violation(d, t).probability);
    r.add(ordered("IBL MC violation nonincreasing in tau_th", nonincreasing_violations(freq)));
  }
  {
    const auto d = mc::simulate_fbl_highsnr(m, fcfg, mc_config(o, o.violation_trials, 501));
    r.add(wilson_check("FBL high-SNR violation vs MC of high-SNR delays", eq46, d, fbl_grid));
    std::vector<double> freq;
    for (double t : fbl_grid) freq.push_back(mc::empirical_violation(d, t).probability);
    r.add(ordered("FBL MC violation nonincreasing in tau_th", nonincreasing_violations(freq)));
  }

  const LinkConfig shared{fcfg.payload_bits, fcfg.bandwidth_hz};
  int below = 0;
  for (double t : fbl_grid) below += !(eq46(t) >= ibl::delay_violation(m, shared, t));
  r.add(ordered("FBL violation >= IBL violation at equal payload", below));

  std::vector<double> closed_ibl, closed_fbl;
  for (double t : ibl_grid) closed_ibl.push_back(eq21(t));
  for (double t : fbl_grid) closed_fbl.push_back(eq46(t));
  r.add(ordered("closed-form violation strictly decreasing in tau_th",
                strictly_decreasing_violations(closed_ibl) + strictly_decreasing_violations(closed_fbl)));

  int bad = 0;
  for (double t : {2e-3, 3e-3}) {
    std::vector<double> col;
    for (int n : {1, 2, 4, 8, 16, 32}) col.push_back(ibl::delay_violation(ChannelModel{n, m.avg_snr}, link, t));
    bad += strictly_decreasing_violations(col);
  }
  for (double t : {0.6e-3, 0.8e-3}) {
    std::vector<double> col;
    for (int n : {1, 2, 4, 8, 16, 32}) col.push_back(fbl::fbl_delay_violation(ChannelModel{n, m.avg_snr}, fcfg, t));
    bad += strictly_decreasing_violations(col);
  }
  r.add(ordered("closed-form violation strictly decreasing in N", bad));
  return r;
}

// --- criterion 6 ---------------------------------------------------------

CriterionResult approximation_tightness(const ValidateOptions&) {
  CriterionResult r;
  {
    const double b = 1000.0;
    double worst = 0.0;
    for (double t : logspace(0.1, 10.0, 201)) {
      const double lt = std::log(t);
      const double err = std::abs(b * std::expm1(lt / b) - lt);
      const double bound = lt * lt / (2.0 * b) * 1.1;
      worst = std::max(worst, bound > 0.0 ? err / bound : (err == 0.0 ? 0.0 : 1e300));
    }
    r.add(bounded("log surrogate error / (1.1 (ln t)^2 / 2b), b=1000, t in [0.1, 10]", worst, 1.0));
  }
  {
    double worst = 0.0;
    for (double x : logspace(3.0, 1e4, 200)) {
      const double inv = 1.0 / ((1.0 + x) * (1.0 + x));
      worst = std::max(worst, std::abs(std::sqrt(1.0 - inv) - (1.0 - 0.5 * inv)));
    }
    r.add(bounded("dispersion approximation gap for x >= 3", worst, 0.01));
  }
  {
    const FblConfig c{200.0, 200e3, 1e-7};
    int bad = 0;
    for (double gdb : linspace(5.0, 30.0, 101)) {
      const SnrSample g{db(gdb)};
      const double exact = fbl::exact_delay_sample(g, c);
      const double high = fbl::delay_highsnr(g, c);
      const double upper = fbl::delay_upper(g, c);
      bad += !(exact <= high && high <= upper);
    }
    r.add(ordered("exact <= high-SNR <= upper delay on [5, 30] dB", bad));
    const SnrSample g{db(10.0)};
    const double exact = fbl::exact_delay_sample(g, c);
    const double upper = fbl::delay_upper(g, c);
    r.add(bounded("upper delay vs exact at 10 dB (rel err)", relative_gap(upper, exact), 0.10,
                  fmt::format("exact {:.6g} s, upper {:.6g} s", exact, upper)));
  }
  return r;
}

// --- criterion 7 ---------------------------------------------------------

CriterionResult validity_constant(const ValidateOptions&) {
  CriterionResult r;
  const double v = fbl::approx_validity_threshold(FblConfig{100.0, 200e3, 1e-9});
  r.add(bounded("validity threshold at eps=1e-9, L=100 (|value - 0.14|)", std::abs(v - 0.14), 0.01,
                fmt::format("value {:.6g}", v)));
  return r;
}

// --- criterion 8 ---------------------------------------------------------

struct MaxGap {
  double worst = 0.0;
  std::string where;

  void update(double gap, const std::string& label) {
    if (gap >= worst || where.empty()) {
      worst = std::max(worst, gap);
      where = label;
    }
  }
};

CriterionResult collapse_and_reduction(const ValidateOptions& o) {
  CriterionResult r;
  const SeriesParams s{20, 1e-14};
  const ChannelModel m{8, db(10.0)};
  const LinkConfig link{1000.0, 200e3};
  const FblConfig half{link.payload_bits, link.bandwidth_hz, 0.5};
  const auto t_grid = quantile_points([&](double t) { return ibl::delay_cdf(m, link, t); },
                                      shannon_delay(SnrSample{m.avg_snr}, link), levels(20));

  {
    MaxGap gap;
    for (double gdb : linspace(-10.0, 30.0, 41)) {
      const SnrSample g{db(gdb)};
      const double ref = shannon_delay(g, link);
      gap.update(relative_gap(fbl::exact_delay_sample(g, half), ref), fmt::format("exact delay at {} dB", gdb));
      gap.update(relative_gap(fbl::delay_highsnr(g, half), ref), fmt::format("high-SNR delay at {} dB", gdb));
    }
    for (double t : t_grid) {
      const auto at = fmt::format(" at t={:.6g}", t);
      gap.update(std::abs(fbl::fbl_delay_cdf(m, half, s, t) - ibl::delay_cdf(m, link, t)), "cdf" + at);
      gap.update(std::abs(fbl::fbl_delay_cdf_highsnr(m, half, t) - ibl::delay_cdf(m, link, t)), "high-SNR cdf" + at);
      gap.update(std::abs(fbl::fbl_delay_violation(m, half, t) - ibl::delay_violation(m, link, t)), "violation" + at);
      gap.update(relative_gap(fbl::fbl_delay_pdf(m, half, s, t), ibl::delay_pdf(m, link, t)), "pdf" + at);
      gap.update(relative_gap(fbl::fbl_delay_pdf_highsnr(m, half, t), ibl::delay_pdf(m, link, t)), "high-SNR pdf" + at);
      gap.update(std::abs(fbl::single_antenna::delay_cdf(m.avg_snr, half, s, t) -
                          ibl::single_antenna::delay_cdf(m.avg_snr, link, t)),
                 "single-antenna cdf" + at);
      gap.update(relative_gap(fbl::single_antenna::delay_pdf(m.avg_snr, half, s, t),
                              ibl::single_antenna::delay_pdf(m.avg_snr, link, t)),
                 "single-antenna pdf" + at);
    }
    for (double p : {0.05, 0.5, 0.95}) {
      gap.update(relative_gap(fbl::delay_quantile(m, half, s, p), ibl::delay_quantile(m, link, p)),
                 fmt::format("quantile at p={}", p));
    }
    const auto rm = ibl::rate_moments_exact(m);
    const auto th2 = ibl::delay_moments(m, link, rm, MomentMethod::theorem2);
    const auto th3 = fbl::fbl_delay_moments(m, half, rm);
    gap.update(relative_gap(th3.mean_delay, th2.mean_delay), "moment mean");
    gap.update(relative_gap(th3.jitter, th2.jitter), "moment jitter");

    const auto cfg = mc_config(o, 4096, 800);
    const auto a = mc::simulate_fbl(m, half, cfg).sorted_samples();
    const auto b = mc::simulate_ibl(m, link, cfg).sorted_samples();
    for (std::size_t i = 0; i < a.size(); ++i) gap.update(relative_gap(a[i], b[i]), "MC sample");
    r.add(bounded("FBL at eps=0.5 vs IBL (max gap)", gap.worst, 1e-10, "worst: " + gap.where));
  }

  {
    MaxGap gap;
    const ChannelModel one{1, m.avg_snr};
    const FblConfig fcfg{200.0, 200e3, 1e-7};
    for (double x : logspace(1e-3, 100.0, 30)) {
      gap.update(std::abs(snr_cdf(one, x) + std::expm1(-x / one.avg_snr)), fmt::format("snr cdf at x={:.4g}", x));
    }
    for (double y : linspace(0.05, 8.0, 30)) {
      const auto at = fmt::format(" at y={:.4g}", y);
      gap.update(std::abs(ibl::rate_cdf(one, y) - ibl::single_antenna::rate_cdf(one.avg_snr, y)), "rate cdf" + at);
      gap.update(relative_gap(ibl::rate_pdf(one, y), ibl::single_antenna::rate_pdf(one.avg_snr, y)), "rate pdf" + at);
    }
    for (double t : t_grid) {
      const auto at = fmt::format(" at t={:.6g}", t);
      gap.update(std::abs(ibl::delay_cdf(one, link, t) - ibl::single_antenna::delay_cdf(one.avg_snr, link, t)),
                 "IBL delay cdf" + at);
      gap.update(relative_gap(ibl::delay_pdf(one, link, t), ibl::single_antenna::delay_pdf(one.avg_snr, link, t)),
                 "IBL delay pdf" + at);
      const double tf = t / 5.0;
      gap.update(std::abs(fbl::fbl_delay_cdf(one, fcfg, s, tf) - fbl::single_antenna::delay_cdf(one.avg_snr, fcfg, s, tf)),
                 "FBL delay cdf" + at);
      gap.update(relative_gap(fbl::fbl_delay_pdf(one, fcfg, s, tf),
                              fbl::single_antenna::delay_pdf(one.avg_snr, fcfg, s, tf)),
                 "FBL delay pdf" + at);
    }
    r.add(bounded("N=1 formulas vs single-antenna forms (max gap)", gap.worst, 1e-12, "worst: " + gap.where));
  }

  {
    const FblConfig fcfg{200.0, 200e3, 1e-7};
    const ChannelModel one{1, m.avg_snr};
    const auto ps = std::vector<double>{0.1, 0.25, 0.5, 0.75, 0.9};
    auto add = [&](const std::string& name, const std::function<double(double)>& cdf,
                   const std::function<double(double)>& pdf, double guess) {
      r.add(check_pdf_matches_cdf(name, cdf, pdf, quantile_points(cdf, guess, ps)));
    };
    add("SNR pdf vs cdf", [&](double x) { return snr_cdf(m, x); }, [&](double x) { return snr_pdf(m, x); },
        m.avg_snr);
    add("IBL rate pdf vs cdf", [&](double y) { return ibl::rate_cdf(m, y); },
        [&](double y) { return ibl::rate_pdf(m, y); }, 3.0);
    add("IBL delay pdf vs cdf", [&](double t) { return ibl::delay_cdf(m, link, t); },
        [&](double t) { return ibl::delay_pdf(m, link, t); }, 1e-3);
    add("single-antenna rate pdf vs cdf", [&](double y) { return ibl::single_antenna::rate_cdf(one.avg_snr, y); },
        [&](double y) { return ibl::single_antenna::rate_pdf(one.avg_snr, y); }, 3.0);
    add("single-antenna IBL delay pdf vs cdf",
        [&](double t) { return ibl::single_antenna::delay_cdf(one.avg_snr, link, t); },
        [&](double t) { return ibl::single_antenna::delay_pdf(one.avg_snr, link, t); }, 1e-3);
    add("FBL series delay pdf vs cdf", [&](double t) { return fbl::fbl_delay_cdf(m, fcfg, s, t); },
        [&](double t) { return fbl::fbl_delay_pdf(m, fcfg, s, t); }, 3e-4);
    add("FBL high-SNR delay pdf vs cdf", [&](double t) { return fbl::fbl_delay_cdf_highsnr(m, fcfg, t); },
        [&](double t) { return fbl::fbl_delay_pdf_highsnr(m, fcfg, t); }, 3e-4);
    add("single-antenna FBL delay pdf vs cdf",
        [&](double t) { return fbl::single_antenna::delay_cdf(one.avg_snr, fcfg, s, t); },
        [&](double t) { return fbl::single_antenna::delay_pdf(one.avg_snr, fcfg, s, t); }, 3e-4);
  }

  {
    std::mt19937_64 rng(splitmix64(o.seed + 801));
    std::uniform_real_distribution<double> s_dist(1e-3, 64.0), x_dist(0.0, 200.0);
    MaxGap gap;
    for (int i = 0; i < 400; ++i) {
      const double a = s_dist(rng), x = x_dist(rng);
      const double full = std::exp(specfun::log_gamma(a));
      gap.update(relative_gap(specfun::lower_inc_gamma(a, x) + specfun::upper_inc_gamma(a, x), full),
                 fmt::format("s={:.6g}, x={:.6g}", a, x));
    }
    r.add(bounded("incomplete gamma complement identity (rel)", gap.worst, 1e-12, "worst: " + gap.where));
  }
  {
    MaxGap gap;
    for (double p : {1e-15, 1e-12, 1e-9, 1e-7, 1e-5, 1e-3, 0.1, 0.3, 0.5, 0.7, 0.9, 0.999}) {
      gap.update(relative_gap(specfun::gaussian_q(specfun::gaussian_q_inv(p)), p), fmt::format("p={}", p));
    }
    r.add(bounded("Q(Qinv(p)) round trip (rel)", gap.worst, 1e-12, "worst: " + gap.where));
  }
  {
    MaxGap gap;
    std::vector<double> xs = linspace(-1.0 / std::numbers::e + 1e-9, 1.0, 60);
    for (double x : logspace(1.0, 1e6, 60)) xs.push_back(x);
    const specfun::Tolerances tol;
    for (double x : xs) {
      const double w = specfun::lambert_w0(x);
      gap.update(std::abs(w * std::exp(w) - x) / std::max(std::abs(x), 1e-300), fmt::format("x={:.6g}", x));
    }
    r.add(bounded("Lambert W residual |W e^W - x| / |x|", gap.worst, tol.rel_tol, "worst: " + gap.where));
  }
  {
    MaxGap gap;
    for (double x : linspace(-0.18, 0.18, 73)) {
      gap.update(std::abs(specfun::lambert_w0_series(x, 30) - specfun::lambert_w0(x)), fmt::format("x={:.4g}", x));
    }
    r.add(bounded("Lambert series (30 terms) vs iterative on |x| <= 0.18", gap.worst, 1e-8, "worst: " + gap.where));
  }
  return r;
}

// --- criterion 9 ---------------------------------------------------------

CriterionResult determinism(const ValidateOptions& o) {
  CriterionResult r;
  ValidateOptions inner = o;
  inner.trials = std::min<std::int64_t>(o.trials, 20'000);
  inner.violation_trials = inner.trials;
  inner.criteria = {1, 6, 7};
  const std::string first = run_acceptance(inner).to_json().dump(2);
  const std::string second = run_acceptance(inner).to_json().dump(2);
  r.add(ordered("repeated report is byte-identical", first == second ? 0 : 1,
                fmt::format("{} bytes per report", first.size())));

  const ChannelModel m{8, db(10.0)};
  const LinkConfig link{1000.0, 200e3};
  const std::int64_t n = 3 * mc::kBlockSize + 123;
  const auto one = mc::simulate_ibl(m, link, mc::McConfig{n, o.seed, 1}).sorted_samples();
  const auto three = mc::simulate_ibl(m, link, mc::McConfig{n, o.seed, 3}).sorted_samples();
  r.add(ordered("sample set independent of stream count", one == three ? 0 : 1));
  return r;
}

}  // namespace

void CriterionResult::add(CheckResult c) {
  passed = passed && c.passed;
  checks.push_back(std::move(c));
}

bool ValidationReport::passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
}

nlohmann::ordered_json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

nlohmann::ordered_json ValidationReport::to_json() const {
  nlohmann::ordered_json j;
  j["options"] = {{"trials", options.trials},
                  {"violation_trials", options.violation_trials},
                  {"seed", options.seed},
                  {"streams", options.streams}};
  j["passed"] = passed();
  auto& list = j["criteria"] = nlohmann::ordered_json::array();
  for (const auto& c : criteria) {
    nlohmann::ordered_json cj;
    cj["id"] = c.id;
    cj["title"] = c.title;
    cj["passed"] = c.passed;
    auto& checks = cj["checks"] = nlohmann::ordered_json::array();
    for (const auto& k : c.checks) {
      checks.push_back({{"name", k.name},
                        {"passed", k.passed},
                        {"measured", json_number(k.measured)},
                        {"tolerance", json_number(k.tolerance)},
                        {"detail", k.detail}});
    }
    list.push_back(std::move(cj));
  }
  return j;
}

std::string criterion_title(int id) {
  switch (id) {
    case 1: return "IBL distribution fidelity";
    case 2: return "FBL distribution fidelity";
    case 3: return "moment formulas";
    case 4: return "antenna trend";
    case 5: return "violation probability";
    case 6: return "approximation tightness";
    case 7: return "validity constant";
    case 8: return "collapse and reduction suite";
    case 9: return "determinism";
    default: throw std::invalid_argument(fmt::format("unknown criterion {}", id));
  }
}

CriterionResult run_criterion(int id, const ValidateOptions& opts) {
  CriterionResult r;
  switch (id) {
    case 1: r = ibl_distribution(opts); break;
    case 2: r = fbl_distribution(opts); break;
    case 3: r = moment_formulas(opts); break;
    case 4: r = antenna_trend(opts); break;
    case 5: r = violation_probability(opts); break;
    case 6: r = approximation_tightness(opts); break;
    case 7: r = validity_constant(opts); break;
    case 8: r = collapse_and_reduction(opts); break;
    case 9: r = determinism(opts); break;
    default: throw std::invalid_argument(fmt::format("unknown criterion {}", id));
  }
  r.id = id;
  r.title = criterion_title(id);
  return r;
}

ValidationReport run_acceptance(const ValidateOptions& opts) {
  ValidationReport report;
  report.options = opts;
  for (int id = 1; id <= kCriterionCount; ++id) {
    if (!opts.criteria.empty() && !opts.criteria.contains(id)) continue;
    report.criteria.push_back(run_criterion(id, opts));
  }
  return report;
}

double binomial_band(double f, std::int64_t n, double factor, double floor, double min_band) {
  if (n <= 0) throw std::domain_error("binomial_band: sample size must be positive");
  return std::max(factor * std::sqrt(f * (1.0 - f) / static_cast<double>(n)) + floor, min_band);
}

CheckResult check_pdf_matches_cdf(const std::string& name, const std::function<double(double)>& cdf,
                                  const std::function<double(double)>& pdf, const std::vector<double>& points,
                                  double rel_tol) {
  MaxGap gap;
  for (double t : points) {
    const double h = 1e-4 * t;
    const double fd = (cdf(t + h) - cdf(t - h)) / (2.0 * h);
    const double f = pdf(t);
    gap.update(std::abs(fd - f) / std::max(std::abs(fd), std::numeric_limits<double>::min()),
               fmt::format("at {:.6g}: pdf {:.6g}, difference quotient {:.6g}", t, f, fd));
  }
  return bounded(name + " (rel)", gap.worst, rel_tol, "worst " + gap.where);
}

}  // namespace delaykit::validate
