/* Copyright 2026 The ionphoton Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ionphoton/config.hpp"

// Batch front-end. Each subcommand turns one or more configurations into a
// ReportBundle: a set of named output files plus a manifest of their hashes.
// Ion numbers in report tables are one-based (J_12 couples ions 1 and 2).
namespace ionphoton::cli {

enum class Format { csv, json };

using Cell = std::variant<std::monostate, double, std::int64_t, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  std::string to_csv() const;
  std::string to_json() const;  // array of objects, keys in column order
};

struct ReportBundle {
  std::map<std::string, std::string> files;  // name -> bytes
  std::string console;                      // human summary for stdout

  void add(const std::string &stem, const Table &table, Format format);
  std::string manifest() const;
  void write(const std::filesystem::path &dir) const;
};

struct Inputs {
  std::vector<config::ConfigFile> cases;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  Format format = Format::csv;
};

inline constexpr std::string_view kPolarityNote =
    "POLARITY NOTE: the printed six-factor CNOT product flips the target when the control is |g>, "
    "but the reference outcome tables need the flip on |e>; protocol runs negate the Z_c and Z_c Z_t "
    "angles (convention=eq8) unless convention=verbatim is set.";

ReportBundle cmd_couplings(const Inputs &in);
ReportBundle cmd_emission(const Inputs &in);
ReportBundle cmd_gates(const Inputs &in);
ReportBundle cmd_run(const Inputs &in);

// Loads --preset or --config into parsed cases.
std::vector<config::ConfigFile> load_cases(const std::optional<std::string> &preset,
                                           const std::optional<std::string> &config_path);

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericError = 3 };

/// Full command line entry point; never throws.
int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace ionphoton::cli
