// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "delaykit/cli.hpp"
#include "delaykit/validate.hpp"

namespace delaykit::cli {
namespace {

constexpr double kMs = 1e3;
constexpr double kMs2 = 1e6;

double from_db(double v) { return std::pow(10.0, v / 10.0); }

std::vector<double> linspace(double a, double b, int n) {
  if (n == 1) return {a};
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

std::vector<double> grid_or(const RunSpec& spec, double start, double stop, int points) {
  const GridSpec g = spec.grid.value_or(GridSpec{start, stop, points});
  return linspace(g.start, g.stop, g.points);
}

const char* regime_name(Regime r) { return r == Regime::ibl ? "ibl" : "fbl"; }

double fbl_or_ibl_quantile(const RunSpec& spec, const ChannelModel& m, double p) {
  if (spec.regime == Regime::ibl) return ibl::delay_quantile(m, spec.link, p);
  return fbl::delay_quantile(m, spec.fbl, spec.series, p);
}

mc::EmpiricalDistribution simulate_delay(const RunSpec& spec, const ChannelModel& m, const mc::McConfig& cfg) {
  return spec.regime == Regime::ibl ? mc::simulate_ibl(m, spec.link, cfg) : mc::simulate_fbl(m, spec.fbl, cfg);
}

void note_infinite(Diagnostics& diag, const mc::EmpiricalDistribution& d) {
  if (d.infinite_count() > 0) {
    diag.warn(fmt::format("{} Monte Carlo draws had zero SNR and infinite delay", d.infinite_count()));
  }
}

// Histogram density over a bin of width `width` centred at x.
double histogram_density(const mc::EmpiricalDistribution& d, double x, double width) {
  const double lo = x - 0.5 * width;
  const double hi = x + 0.5 * width;
  return (d.ecdf(hi) - (lo > 0.0 ? d.ecdf(lo) : 0.0)) / width;
}

double grid_step(const std::vector<double>& g) { return g.size() > 1 ? g[1] - g[0] : std::abs(g[0]) * 0.02; }

std::vector<int> antenna_grid(const RunSpec& spec) {
  if (!spec.grid) return {1, 2, 4, 8, 16, 32};
  std::vector<int> out;
  for (double v : linspace(spec.grid->start, spec.grid->stop, spec.grid->points)) {
    const int n = static_cast<int>(std::lround(v));
    if (n < 1) throw std::invalid_argument(fmt::format("antenna grid value {} is below 1", v));
    if (out.empty() || n > out.back()) out.push_back(n);
  }
  return out;
}

}  // namespace

void RunSpec::validate() const {
  model.validate();
  link.validate();
  fbl.validate();
  approx.validate();
  series.validate();
  mc.validate();
  if (grid) {
    if (grid->points < 1) throw std::invalid_argument("grid needs at least one point");
    if (grid->points > 1 && !(grid->stop > grid->start)) {
      throw std::invalid_argument(fmt::format("grid must be strictly increasing ({} .. {})", grid->start, grid->stop));
    }
    if (!std::isfinite(grid->start) || !std::isfinite(grid->stop)) throw std::invalid_argument("grid bounds must be finite");
  }
  if (tau_ms && !(*tau_ms > 0.0)) throw std::invalid_argument("--tau-ms must be positive");
}

nlohmann::ordered_json RunSpec::to_json() const {
  nlohmann::ordered_json j;
  j["regime"] = regime_name(regime);
  j["snr_db"] = snr_db;
  j["avg_snr"] = model.avg_snr;
  j["antennas"] = model.antennas;
  j["bits"] = regime == Regime::ibl ? link.payload_bits : fbl.payload_bits;
  j["bandwidth_hz"] = regime == Regime::ibl ? link.bandwidth_hz : fbl.bandwidth_hz;
  if (regime == Regime::fbl) j["bler"] = fbl.bler;
  j["log_b"] = approx.log_b;
  j["lambert_terms"] = series.lambert_terms;
  j["trials"] = mc.trials;
  j["seed"] = mc.seed;
  j["sweep"] = sweep;
  if (grid) j["grid"] = {{"start", grid->start}, {"stop", grid->stop}, {"points", grid->points}};
  if (tau_ms) j["tau_ms"] = *tau_ms;
  return j;
}

Table cmd_dist(const RunSpec& spec, Diagnostics& diag) {
  spec.validate();
  const ChannelModel& m = spec.model;
  const bool single = m.antennas == 1;
  Table t;

  if (spec.variable == "rate") {
    t.columns = {"rate_bps_hz", "cdf", "pdf_per_bps_hz", "mc_ecdf", "mc_pdf_per_bps_hz", "provenance"};
    const double mean = std::log1p(m.avg_snr) / std::numbers::ln2;
    const auto grid = grid_or(spec, 0.0, 3.0 * mean, 61);
    if (grid.front() < 0.0) throw std::invalid_argument("rate grid must be nonnegative");
    const auto d = mc::simulate_rate(m, spec.mc);
    const double w = grid_step(grid);
    for (double y : grid) {
      const double cdf = single ? ibl::single_antenna::rate_cdf(m.avg_snr, y) : ibl::rate_cdf(m, y);
      const double pdf = single ? ibl::single_antenna::rate_pdf(m.avg_snr, y) : ibl::rate_pdf(m, y);
      t.add_row({y, cdf, pdf, d.ecdf(y), histogram_density(d, y, w), std::string("closed-form+mc")});
    }
    return t;
  }
  if (spec.variable != "delay") throw std::invalid_argument(fmt::format("unknown --variable '{}'", spec.variable));

  std::vector<double> grid_ms;
  if (spec.grid) {
    grid_ms = linspace(spec.grid->start, spec.grid->stop, spec.grid->points);
    if (!(grid_ms.front() > 0.0)) throw std::invalid_argument("delay grid must be positive");
  } else {
    grid_ms = linspace(fbl_or_ibl_quantile(spec, m, 1e-3) * kMs, fbl_or_ibl_quantile(spec, m, 0.999) * kMs, 50);
  }

  t.columns = {"t_ms", "cdf", "pdf_per_ms"};
  if (spec.regime == Regime::fbl) {
    t.columns.insert(t.columns.end(), {"cdf_highsnr", "pdf_highsnr_per_ms"});
  }
  if (single) t.columns.insert(t.columns.end(), {"cdf_single", "pdf_single_per_ms"});
  t.columns.insert(t.columns.end(), {"mc_ecdf", "mc_pdf_per_ms", "provenance"});

  const auto d = simulate_delay(spec, m, spec.mc);
  note_infinite(diag, d);
  const double width = grid_step(grid_ms) / kMs;
  for (double ms : grid_ms) {
    const double s = ms / kMs;
    std::vector<Cell> row{ms};
    if (spec.regime == Regime::ibl) {
      row.emplace_back(ibl::delay_cdf(m, spec.link, s));
      row.emplace_back(ibl::delay_pdf(m, spec.link, s) / kMs);
      if (single) {
        row.emplace_back(ibl::single_antenna::delay_cdf(m.avg_snr, spec.link, s));
        row.emplace_back(ibl::single_antenna::delay_pdf(m.avg_snr, spec.link, s) / kMs);
      }
    } else {
      row.emplace_back(fbl::fbl_delay_cdf(m, spec.fbl, spec.series, s));
      row.emplace_back(fbl::fbl_delay_pdf(m, spec.fbl, spec.series, s) / kMs);
      row.emplace_back(fbl::fbl_delay_cdf_highsnr(m, spec.fbl, s));
      row.emplace_back(fbl::fbl_delay_pdf_highsnr(m, spec.fbl, s) / kMs);
      if (single) {
        row.emplace_back(fbl::single_antenna::delay_cdf(m.avg_snr, spec.fbl, spec.series, s));
        row.emplace_back(fbl::single_antenna::delay_pdf(m.avg_snr, spec.fbl, spec.series, s) / kMs);
      }
    }
    row.emplace_back(d.ecdf(s));
    row.emplace_back(histogram_density(d, s, width) / kMs);
    row.emplace_back(std::string("closed-form+mc"));
    t.add_row(std::move(row));
  }
  return t;
}

Table cmd_moments(const RunSpec& spec, Diagnostics& diag) {
  spec.validate();
  Table t;
  t.columns = {"snr_db", "antennas"};
  if (spec.regime == Regime::ibl) {
    t.columns.insert(t.columns.end(), {"theorem1_mean_ms", "theorem1_jitter_ms2", "theorem2_mean_ms",
                                       "theorem2_jitter_ms2"});
  } else {
    t.columns.insert(t.columns.end(), {"theorem3_mean_ms", "theorem3_jitter_ms2", "theorem3_highsnr_mean_ms",
                                       "theorem3_highsnr_jitter_ms2"});
  }
  t.columns.insert(t.columns.end(), {"mc_mean_ms", "mc_mean_se_ms", "mc_jitter_ms2", "mc_jitter_se_ms2",
                                     "heavy_tail", "provenance"});

  struct Point {
    double snr_db;
    int antennas;
  };
  std::vector<Point> points;
  if (spec.sweep == "none") {
    points.push_back({spec.snr_db, spec.model.antennas});
  } else if (spec.sweep == "snr") {
    for (double v : grid_or(spec, 0.0, 30.0, 16)) points.push_back({v, spec.model.antennas});
  } else if (spec.sweep == "antennas") {
    for (int n : antenna_grid(spec)) points.push_back({spec.snr_db, n});
  } else {
    throw std::invalid_argument(fmt::format("moments: --sweep must be none, snr or antennas, got '{}'", spec.sweep));
  }

  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto [sdb, n] = points[i];
    const ChannelModel m{n, spec.sweep == "snr" ? from_db(sdb) : spec.model.avg_snr};
    std::vector<Cell> row{sdb, static_cast<std::int64_t>(n)};
    bool heavy = false;
    auto push = [&](const MomentReport& r) {
      row.emplace_back(r.mean_delay * kMs);
      row.emplace_back(r.jitter * kMs2);
      heavy = heavy || r.heavy_tail;
      for (const auto& msg : r.diagnostics) diag.warn(fmt::format("{} dB, N={}: {}", sdb, n, msg));
    };
    if (spec.regime == Regime::ibl) {
      push(ibl::delay_moments(m, spec.link, MomentMethod::theorem1, spec.approx));
      push(ibl::delay_moments(m, spec.link, MomentMethod::theorem2, spec.approx));
    } else {
      auto exact = fbl::fbl_delay_moments(m, spec.fbl, ibl::rate_moments_exact(m, spec.approx));
      auto high = fbl::fbl_delay_moments(m, spec.fbl, ibl::rate_moments_highsnr(m));
      exact.heavy_tail = false;  // one heavy-tail note per row is enough
      exact.diagnostics.erase(std::remove_if(exact.diagnostics.begin(), exact.diagnostics.end(),
                                             [](const std::string& d) { return d.starts_with("single antenna"); }),
                              exact.diagnostics.end());
      push(exact);
      push(high);
    }
    const mc::McConfig cfg{spec.mc.trials, derive_stream_seed(spec.mc.seed, 1'000'000 + i), spec.mc.streams};
    const auto d = simulate_delay(spec, m, cfg);
    note_infinite(diag, d);
    const auto mm = mc::empirical_moments(d);
    heavy = heavy || mm.heavy_tail;
    row.emplace_back(mm.mean * kMs);
    row.emplace_back(mm.std_error_mean * kMs);
    row.emplace_back(mm.variance * kMs2);
    row.emplace_back(mm.std_error_variance * kMs2);
    row.emplace_back(static_cast<std::int64_t>(heavy));
    row.emplace_back(std::string("approx+mc"));
    t.add_row(std::move(row));
  }
  return t;
}

Table cmd_violation(const RunSpec& spec, Diagnostics& diag) {
  spec.validate();
  const bool finite = spec.regime == Regime::fbl;
  Table t;
  t.columns = {"tau_ms", "antennas", "pv"};
  if (finite) t.columns.emplace_back("pv_series");
  t.columns.insert(t.columns.end(), {"mc_pv", "mc_ci_low", "mc_ci_high"});
  if (finite) t.columns.insert(t.columns.end(), {"mc_pv_highsnr", "mc_highsnr_ci_low", "mc_highsnr_ci_high"});
  t.columns.emplace_back("provenance");

  auto closed = [&](const ChannelModel& m, double s) {
    return finite ? fbl::fbl_delay_violation(m, spec.fbl, s) : ibl::delay_violation(m, spec.link, s);
  };
  auto emit = [&](const ChannelModel& m, double ms, const mc::EmpiricalDistribution& d,
                  const mc::EmpiricalDistribution* high) {
    const double s = ms / kMs;
    std::vector<Cell> row{ms, static_cast<std::int64_t>(m.antennas), closed(m, s)};
    if (finite) row.emplace_back(1.0 - fbl::fbl_delay_cdf(m, spec.fbl, spec.series, s));
    const auto v = mc::empirical_violation(d, s);
    row.insert(row.end(), {v.probability, v.ci_low, v.ci_high});
    if (finite) {
      const auto h = mc::empirical_violation(*high, s);
      row.insert(row.end(), {h.probability, h.ci_low, h.ci_high});
    }
    row.emplace_back(std::string("closed-form+mc"));
    t.add_row(std::move(row));
  };

  if (spec.sweep == "none" || spec.sweep == "tau") {
    const ChannelModel& m = spec.model;
    std::vector<double> grid_ms;
    if (spec.grid) {
      grid_ms = linspace(spec.grid->start, spec.grid->stop, spec.grid->points);
      if (!(grid_ms.front() > 0.0)) throw std::invalid_argument("threshold grid must be positive");
    } else {
      auto q = [&](double p) {
        return finite ? fbl::delay_quantile_highsnr(m, spec.fbl, p) : ibl::delay_quantile(m, spec.link, p);
      };
      grid_ms = linspace(q(1e-3) * kMs, q(0.999) * kMs, 30);
    }
    const auto d = simulate_delay(spec, m, spec.mc);
    note_infinite(diag, d);
    std::optional<mc::EmpiricalDistribution> high;
    if (finite) high = mc::simulate_fbl_highsnr(m, spec.fbl, spec.mc);
    for (double ms : grid_ms) emit(m, ms, d, high ? &*high : nullptr);
  } else if (spec.sweep == "antennas") {
    const double tau = spec.tau_ms.value_or(
        (finite ? fbl::delay_quantile_highsnr(spec.model, spec.fbl, 0.9) : ibl::delay_quantile(spec.model, spec.link, 0.9)) *
        kMs);
    const auto ns = antenna_grid(spec);
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const ChannelModel m{ns[i], spec.model.avg_snr};
      const mc::McConfig cfg{spec.mc.trials, derive_stream_seed(spec.mc.seed, 2'000'000 + i), spec.mc.streams};
      const auto d = simulate_delay(spec, m, cfg);
      note_infinite(diag, d);
      std::optional<mc::EmpiricalDistribution> high;
      if (finite) high = mc::simulate_fbl_highsnr(m, spec.fbl, cfg);
      emit(m, tau, d, high ? &*high : nullptr);
    }
  } else {
    throw std::invalid_argument(fmt::format("violation: --sweep must be tau or antennas, got '{}'", spec.sweep));
  }
  return t;
}

Table cmd_approx_report(const RunSpec& spec, Diagnostics& diag) {
  spec.validate();
  Table t;
  if (spec.table == "log") {
    t.columns = {"t", "ln_t", "surrogate_b10", "surrogate_b100", "surrogate_b1000", "provenance"};
    for (double x : grid_or(spec, 0.1, 10.0, 100)) {
      if (!(x > 0.0)) throw std::invalid_argument("log table grid must be positive");
      const double lx = std::log(x);
      std::vector<Cell> row{x, lx};
      for (double b : {10.0, 100.0, 1000.0}) row.emplace_back(b * std::expm1(lx / b));
      row.emplace_back(std::string("closed-form+approx"));
      t.add_row(std::move(row));
    }
  } else if (spec.table == "dispersion") {
    t.columns = {"x", "exact", "approx", "gap", "provenance"};
    for (double x : grid_or(spec, 0.0, 30.0, 121)) {
      if (x < 0.0) throw std::invalid_argument("dispersion grid must be nonnegative");
      const double inv = 1.0 / ((1.0 + x) * (1.0 + x));
      const double exact = std::sqrt(1.0 - inv);
      const double approx = 1.0 - 0.5 * inv;
      t.add_row({x, exact, approx, approx - exact, std::string("closed-form+approx")});
    }
  } else if (spec.table == "delay") {
    t.columns = {"gamma_db", "exact_ms", "highsnr_ms", "expansion_ms", "upper_ms", "provenance"};
    const PreparedFbl prepared(spec.fbl);
    for (double gdb : grid_or(spec, 5.0, 30.0, 26)) {
      const SnrSample g{from_db(gdb)};
      t.add_row({gdb, fbl::exact_delay_sample(g, prepared) * kMs, fbl::delay_highsnr(g, prepared) * kMs,
                 fbl::delay_approx_terms(g, spec.fbl, &diag) * kMs, fbl::delay_upper(g, spec.fbl, &diag) * kMs,
                 std::string("closed-form+approx")});
    }
  } else {
    throw std::invalid_argument(fmt::format("approx-report: --table must be log, dispersion or delay, got '{}'", spec.table));
  }
  return t;
}

}  // namespace delaykit::cli
