// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "delaykit/channel.hpp"
#include "delaykit/diagnostics.hpp"
#include "delaykit/fbl.hpp"
#include "delaykit/ibl.hpp"
#include "delaykit/mc.hpp"

namespace delaykit::cli {

enum class Regime { ibl, fbl };
enum class Format { csv, json };

/// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Name of the optional environment variable that overrides the default seed.
inline constexpr const char* kSeedEnv = "DELAYKIT_SEED";

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
};

/// Everything a command needs. ρ is stored linear; `snr_db` keeps the user's value for echoing.
struct RunSpec {
  Regime regime = Regime::ibl;
  double snr_db = 10.0;
  ChannelModel model{8, 10.0};
  LinkConfig link{1000.0, 200e3};
  FblConfig fbl{200.0, 200e3, 1e-7};
  IblApproxParams approx{};
  SeriesParams series{};
  mc::McConfig mc{};
  std::optional<GridSpec> grid;
  Format format = Format::csv;
  std::string sweep = "none";
  std::string variable = "delay";
  std::string table = "delay";
  std::optional<double> tau_ms;

  void validate() const;
  [[nodiscard]] nlohmann::ordered_json to_json() const;
};

using Cell = std::variant<double, std::int64_t, std::string>;

/// Rectangular output with a fixed header.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

/// Shortest round-trip decimal form; +inf as "inf". NaN is a logic error.
std::string format_number(double v);

std::string to_csv(const Table& t);
nlohmann::ordered_json rows_json(const Table& t);

/// Renders {spec, rows, diagnostics} as JSON or the table as CSV.
std::string render(const RunSpec& spec, const std::string& command, const Table& t, const Diagnostics& diag);

Table cmd_dist(const RunSpec& spec, Diagnostics& diag);
Table cmd_moments(const RunSpec& spec, Diagnostics& diag);
Table cmd_violation(const RunSpec& spec, Diagnostics& diag);
Table cmd_approx_report(const RunSpec& spec, Diagnostics& diag);

/// Full command line (args[0] is the program name). Writes results to `--out`
/// or `out`, messages to `err`; returns an exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace delaykit::cli
