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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ionphoton/cavity.hpp"
#include "ionphoton/crystal.hpp"
#include "ionphoton/protocol.hpp"

// Plain-text experiment configuration:
//
//   # comment
//   [traps]
//   count = 2
//   d_um = 6.0
//   nu_Mrad_s = 5.55
//
// Keys carry their unit as a suffix; values are converted to SI on read.
// Parsing never consults the locale.
namespace ionphoton::config {

class ConfigFile {
 public:
  static ConfigFile parse(std::string_view text);

  bool has_section(const std::string &section) const;
  bool has(const std::string &section, const std::string &key) const;

  std::optional<std::string> string(const std::string &section, const std::string &key) const;
  std::optional<double> number(const std::string &section, const std::string &key) const;
  std::optional<std::vector<double>> list(const std::string &section, const std::string &key) const;

  std::optional<std::uint64_t> unsigned_integer(const std::string &section, const std::string &key) const;

  double require_number(const std::string &section, const std::string &key) const;

  // Throws ConfigError naming the first key not matched by `allowed`
  // (a map from section to regular expressions over key names).
  void reject_unknown(const std::map<std::string, std::vector<std::string>> &allowed) const;

  const std::map<std::string, std::map<std::string, std::string>> &sections() const { return sections_; }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
};

// Every section and key pattern the front-end understands.
const std::map<std::string, std::vector<std::string>> &schema();

crystal::IonSpecies read_species(const ConfigFile &cfg);
crystal::TrapArray read_traps(const ConfigFile &cfg);
crystal::FieldGradient read_gradient(const ConfigFile &cfg);
cavity::CavitySetup read_cavity(const ConfigFile &cfg);
protocol::ExperimentConfig read_experiment(const ConfigFile &cfg);

struct SweepGrid {
  double omega_laser = 0.0;
  double g_cav = 0.0;
  std::vector<double> kappas;
  std::vector<double> deltas;
  std::optional<double> summary_kappa;
};

SweepGrid read_sweep(const ConfigFile &cfg);

// Optional [reference] values: tabulated numbers to compare against.
struct Reference {
  std::optional<double> deviation;  // m
  std::optional<double> gap;        // m
  std::optional<double> eps_max;
  std::optional<double> j12;        // rad/s
  std::optional<double> j13;        // rad/s
};

Reference read_reference(const ConfigFile &cfg);

std::optional<double> laser_lamb_dicke(const ConfigFile &cfg);

// Embedded preset configurations; a preset may hold several cases.
struct Preset {
  std::string name;
  std::string description;
  std::vector<std::string> cases;  // config texts
};

const std::vector<Preset> &presets();
const Preset &find_preset(const std::string &name);

std::string explain_units();

}  // namespace ionphoton::config
