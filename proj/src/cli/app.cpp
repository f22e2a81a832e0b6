// SPDX-License-Identifier: Apache-2.0
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "delaykit/cli.hpp"
#include "delaykit/validate.hpp"

namespace delaykit::cli {
namespace {

struct Flags {
  std::string regime = "ibl";
  double snr_db = 10.0;
  int antennas = 8;
  std::optional<double> bits;
  double bandwidth_hz = 200e3;
  double bler = 1e-7;
  double log_b = 1000.0;
  int lambert_terms = 20;
  std::optional<std::int64_t> trials;
  std::optional<std::uint64_t> seed;
  int streams = 1;
  std::optional<double> grid_start, grid_stop;
  std::optional<int> grid_points;
  std::string sweep = "none";
  std::string format = "csv";
  std::string out;
  std::string variable = "delay";
  std::string table = "delay";
  std::optional<double> tau_ms;
  std::optional<std::int64_t> violation_trials;
  std::vector<int> criteria;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--regime", f.regime, "ibl or fbl")->check(CLI::IsMember({"ibl", "fbl"}));
  sub->add_option("--snr-db", f.snr_db, "average SNR in dB");
  sub->add_option("--antennas", f.antennas, "receive antennas N")->check(CLI::PositiveNumber);
  sub->add_option("--bits", f.bits, "payload bits L (default 1000 ibl, 200 fbl)");
  sub->add_option("--bandwidth-hz", f.bandwidth_hz, "bandwidth B in Hz");
  sub->add_option("--bler", f.bler, "target block error rate, in (0, 0.5]");
  sub->add_option("--log-b", f.log_b, "log-surrogate constant b for the rate moments");
  sub->add_option("--lambert-terms", f.lambert_terms, "terms M of the Lambert series");
  sub->add_option("--trials", f.trials, "Monte Carlo draws");
  sub->add_option("--seed", f.seed, fmt::format("random seed (default 42, or ${})", kSeedEnv));
  sub->add_option("--streams", f.streams, "worker threads; output does not depend on it");
  sub->add_option("--grid-start", f.grid_start, "first grid value");
  sub->add_option("--grid-stop", f.grid_stop, "last grid value");
  sub->add_option("--grid-points", f.grid_points, "number of grid values");
  sub->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", f.out, "output file (default stdout)");
}

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnv);
  if (env == nullptr || *env == '\0') return 42;
  std::size_t used = 0;
  const std::string text(env);
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) throw std::invalid_argument(fmt::format("{}='{}' is not an unsigned integer", kSeedEnv, text));
  return v;
}

RunSpec build_spec(const Flags& f, std::int64_t default_trials) {
  RunSpec s;
  s.regime = f.regime == "fbl" ? Regime::fbl : Regime::ibl;
  s.snr_db = f.snr_db;
  s.model = ChannelModel{f.antennas, std::pow(10.0, f.snr_db / 10.0)};
  s.link = LinkConfig{f.bits.value_or(1000.0), f.bandwidth_hz};
  s.fbl = FblConfig{f.bits.value_or(200.0), f.bandwidth_hz, f.bler};
  s.approx = IblApproxParams{f.log_b};
  s.series = SeriesParams{f.lambert_terms, 1e-14};
  s.mc = mc::McConfig{f.trials.value_or(default_trials), f.seed ? *f.seed : default_seed(), f.streams};
  if (f.grid_start || f.grid_stop || f.grid_points) {
    if (!f.grid_start || !f.grid_stop) throw std::invalid_argument("--grid-start and --grid-stop go together");
    s.grid = GridSpec{*f.grid_start, *f.grid_stop, f.grid_points.value_or(50)};
  }
  s.format = f.format == "json" ? Format::json : Format::csv;
  s.sweep = f.sweep;
  s.variable = f.variable;
  s.table = f.table;
  s.tau_ms = f.tau_ms;
  s.validate();
  return s;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
  file << text;
  if (!file) throw std::runtime_error(fmt::format("failed writing '{}'", path));
}

std::string validation_csv(const validate::ValidationReport& r) {
  Table t;
  t.columns = {"criterion", "check", "passed", "measured", "tolerance", "detail"};
  for (const auto& c : r.criteria) {
    for (const auto& k : c.checks) {
      t.add_row({static_cast<std::int64_t>(c.id), k.name, static_cast<std::int64_t>(k.passed), k.measured,
                 k.tolerance, k.detail});
    }
  }
  return to_csv(t);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transmission delay analysis for multi-antenna fading links"};
  app.require_subcommand(1);
  Flags f;

  auto* dist = app.add_subcommand("dist", "closed-form and simulated delay or rate distribution");
  add_common(dist, f);
  dist->add_option("--variable", f.variable, "delay or rate")->check(CLI::IsMember({"delay", "rate"}));

  auto* moments = app.add_subcommand("moments", "mean delay and jitter from the moment formulas and simulation");
  add_common(moments, f);
  moments->add_option("--sweep", f.sweep, "none, snr or antennas")->check(CLI::IsMember({"none", "snr", "antennas"}));

  auto* violation = app.add_subcommand("violation", "delay violation probability");
  add_common(violation, f);
  violation->add_option("--sweep", f.sweep, "tau or antennas")->check(CLI::IsMember({"none", "tau", "antennas"}));
  violation->add_option("--tau-ms", f.tau_ms, "threshold for the antenna sweep, in ms");

  auto* approx = app.add_subcommand("approx-report", "tightness of the analytical approximations");
  add_common(approx, f);
  approx->add_option("--table", f.table, "log, dispersion or delay")
      ->check(CLI::IsMember({"log", "dispersion", "delay"}));

  auto* val = app.add_subcommand("validate", "run the analytical-vs-simulation acceptance checks");
  add_common(val, f);
  val->add_option("--violation-trials", f.violation_trials, "draws for violation checks (default: --trials)");
  val->add_option("--criteria", f.criteria, "subset of criteria 1-9")->check(CLI::Range(1, validate::kCriterionCount));

  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (val->parsed()) {
      if (val->count("--format") == 0) f.format = "json";
      const RunSpec spec = build_spec(f, 100'000);
      validate::ValidateOptions o;
      o.trials = spec.mc.trials;
      o.violation_trials = f.violation_trials.value_or(o.trials);
      o.seed = spec.mc.seed;
      o.streams = spec.mc.streams;
      o.criteria = {f.criteria.begin(), f.criteria.end()};
      if (o.violation_trials < 1000) throw std::invalid_argument("--violation-trials must be >= 1000");
      const auto report = validate::run_acceptance(o);
      for (const auto& c : report.criteria) {
        err << fmt::format("[{}] criterion {}: {}\n", c.passed ? "PASS" : "FAIL", c.id, c.title);
      }
      emit(spec.format == Format::json ? report.to_json().dump(2) + '\n' : validation_csv(report), f.out, out);
      return report.passed() ? kExitOk : kExitValidationFailed;
    }

    std::string command;
    std::int64_t default_trials = 1'000'000;
    if (violation->parsed()) default_trials = 10'000'000;
    const RunSpec spec = build_spec(f, default_trials);
    Diagnostics diag;
    Table table;
    if (dist->parsed()) {
      command = "dist";
      table = cmd_dist(spec, diag);
    } else if (moments->parsed()) {
      command = "moments";
      table = cmd_moments(spec, diag);
    } else if (violation->parsed()) {
      command = "violation";
      table = cmd_violation(spec, diag);
    } else {
      command = "approx-report";
      table = cmd_approx_report(spec, diag);
    }
    if (spec.format == Format::csv) {
      for (const auto& m : diag.messages()) err << "warning: " << m << '\n';
    }
    emit(render(spec, command, table, diag), f.out, out);
    return kExitOk;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace delaykit::cli
