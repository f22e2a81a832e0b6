// SPDX-License-Identifier: Apache-2.0
// Runs the acceptance criteria at full scale and prints one line per criterion.
//
//   acceptance [--criterion K]... [--trials N] [--violation-trials N] [--seed S] [--json PATH]
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <fmt/format.h>

#include "delaykit/validate.hpp"

int main(int argc, char** argv) {
  delaykit::validate::ValidateOptions opts;
  opts.trials = 1'000'000;
  opts.violation_trials = 10'000'000;
  opts.seed = 42;
  std::string json_path;

  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    auto next = [&]() -> std::string {
      if (i + 1 >= argc) {
        std::cerr << "missing value after " << a << '\n';
        std::exit(2);
      }
      return argv[++i];
    };
    if (a == "--criterion") {
      opts.criteria.insert(std::stoi(next()));
    } else if (a == "--trials") {
      opts.trials = std::stoll(next());
    } else if (a == "--violation-trials") {
      opts.violation_trials = std::stoll(next());
    } else if (a == "--seed") {
      opts.seed = std::stoull(next());
    } else if (a == "--json") {
      json_path = next();
    } else {
      std::cerr << "unknown argument " << a << '\n';
      return 2;
    }
  }

  const auto report = delaykit::validate::run_acceptance(opts);
  for (const auto& c : report.criteria) {
    std::cout << fmt::format("{} criterion {}: {}\n", c.passed ? "PASS" : "FAIL", c.id, c.title);
    for (const auto& k : c.checks) {
      std::cout << fmt::format("    [{}] {}: measured {:.6g}, tolerance {:.6g}{}{}\n", k.passed ? "ok" : "FAIL", k.name,
                               k.measured, k.tolerance, k.detail.empty() ? "" : "; ", k.detail);
    }
  }
  if (!json_path.empty()) std::ofstream(json_path, std::ios::binary) << report.to_json().dump(2) << '\n';
  return report.passed() ? 0 : 1;
}
