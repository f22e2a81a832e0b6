// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "delaykit/cli.hpp"
#include "delaykit/validate.hpp"

namespace delaykit::cli {
namespace {

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return fmt::format("{}", *i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

nlohmann::ordered_json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return validate::json_number(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

}  // namespace

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) {
    throw std::logic_error(fmt::format("row has {} cells, table has {} columns", row.size(), columns.size()));
  }
  for (const auto& c : row) {
    if (const auto* d = std::get_if<double>(&c); d != nullptr && std::isnan(*d)) {
      throw std::logic_error("NaN reached an output row");
    }
  }
  rows.push_back(std::move(row));
}

std::string format_number(double v) {
  if (std::isnan(v)) throw std::logic_error("NaN reached an output row");
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{}", v);
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json rows_json(const Table& t) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  return rows;
}

std::string render(const RunSpec& spec, const std::string& command, const Table& t, const Diagnostics& diag) {
  if (spec.format == Format::csv) return to_csv(t);
  nlohmann::ordered_json j;
  j["spec"] = spec.to_json();
  j["spec"]["command"] = command;
  j["rows"] = rows_json(t);
  j["diagnostics"] = diag.messages();
  return j.dump(2) + '\n';
}

}  // namespace delaykit::cli
