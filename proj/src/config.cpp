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

#include "ionphoton/config.hpp"

#include <charconv>
#include <regex>
#include <sstream>

#include "ionphoton/constants.hpp"
#include "ionphoton/error.hpp"
#include "ionphoton/io.hpp"

namespace ionphoton::config {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

constexpr double kMega = constants::mega_rad_s;
constexpr double kMicro = constants::micrometre;

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text) {
  ConfigFile cfg;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find_first_of("#;");
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno), "", "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError("line " + std::to_string(lineno), "", "empty section name");
      if (!schema().count(section)) throw ConfigError(section, "", "unknown section");
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(section, line, "expected key = value");
    if (section.empty()) throw ConfigError("", trim(line.substr(0, eq)), "key outside any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(section, "", "empty key");
    auto &sec = cfg.sections_[section];
    if (sec.count(key)) throw ConfigError(section, key, "duplicate key");
    sec[key] = value;
  }
  cfg.reject_unknown(schema());
  return cfg;
}

bool ConfigFile::has_section(const std::string &section) const { return sections_.count(section) > 0; }

bool ConfigFile::has(const std::string &section, const std::string &key) const {
  const auto it = sections_.find(section);
  return it != sections_.end() && it->second.count(key) > 0;
}

std::optional<std::string> ConfigFile::string(const std::string &section, const std::string &key) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return std::nullopt;
  const auto kv = it->second.find(key);
  if (kv == it->second.end()) return std::nullopt;
  return kv->second;
}

std::optional<double> ConfigFile::number(const std::string &section, const std::string &key) const {
  const auto s = string(section, key);
  if (!s) return std::nullopt;
  double v = 0.0;
  if (!io::parse_number(*s, v) || !std::isfinite(v)) throw ConfigError(section, key, "not a number: '" + *s + "'");
  return v;
}

std::optional<std::uint64_t> ConfigFile::unsigned_integer(const std::string &section, const std::string &key) const {
  const auto s = string(section, key);
  if (!s) return std::nullopt;
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), v);
  if (ec != std::errc() || ptr != s->data() + s->size())
    throw ConfigError(section, key, "not a non-negative integer: '" + *s + "'");
  return v;
}

std::optional<std::vector<double>> ConfigFile::list(const std::string &section, const std::string &key) const {
  const auto s = string(section, key);
  if (!s) return std::nullopt;
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s->size()) {
    const auto comma = s->find(',', start);
    const std::string item = trim(std::string_view(*s).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    double v = 0.0;
    if (!io::parse_number(item, v) || !std::isfinite(v)) throw ConfigError(section, key, "bad list item '" + item + "'");
    out.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double ConfigFile::require_number(const std::string &section, const std::string &key) const {
  const auto v = number(section, key);
  if (!v) throw ConfigError(section, key, "required key is missing");
  return *v;
}

void ConfigFile::reject_unknown(const std::map<std::string, std::vector<std::string>> &allowed) const {
  for (const auto &[section, keys] : sections_) {
    const auto it = allowed.find(section);
    if (it == allowed.end()) throw ConfigError(section, "", "unknown section");
    for (const auto &[key, value] : keys) {
      bool ok = false;
      for (const auto &pattern : it->second) ok = ok || std::regex_match(key, std::regex(pattern));
      if (!ok) throw ConfigError(section, key, "unknown key");
    }
  }
}

const std::map<std::string, std::vector<std::string>> &schema() {
  static const std::map<std::string, std::vector<std::string>> s = {
      {"species", {"label", "mass_amu", "g_factor"}},
      {"traps", {"count", "d_um", "z_[1-9]_um", "nu_[1-9]_Mrad_s", "nu_Mrad_s"}},
      {"gradient", {"dBdz_T_per_m", "B0_T"}},
      {"cavity",
       {"(omega|h|delta)(_[ge])?_Mrad_s", "kappa_Mrad_s", "kappa_rad_s", "radius_um", "kappa_grid_rad_s",
        "kappa_max_rad_s", "kappa_points", "delta_list_Mrad_s"}},
      {"protocol",
       {"ion_count", "convention", "t0_ms", "t1_ms", "pulse_time_us", "hadamard_time_us", "detection_time_ms",
        "collection_efficiency", "emission_time_s", "eta"}},
      {"run", {"seed", "trials", "threads"}},
      {"reference", {"Delta_um", "h_um", "eps_max", "J_12_krad_s", "J_13_krad_s"}},
  };
  return s;
}

crystal::IonSpecies read_species(const ConfigFile &cfg) {
  crystal::IonSpecies sp = crystal::IonSpecies::ytterbium171();
  if (auto label = cfg.string("species", "label")) sp.label = *label;
  if (auto m = cfg.number("species", "mass_amu")) sp.mass = *m * constants::atomic_mass_unit;
  if (auto g = cfg.number("species", "g_factor")) sp.g_factor = *g;
  if (!(sp.mass > 0.0)) throw ConfigError("species", "mass_amu", "must be positive");
  if (!(sp.g_factor > 0.0)) throw ConfigError("species", "g_factor", "must be positive");
  return sp;
}

crystal::TrapArray read_traps(const ConfigFile &cfg) {
  if (!cfg.has_section("traps")) throw ConfigError("traps", "", "section is required");
  const auto count = cfg.unsigned_integer("traps", "count");
  if (!count) throw ConfigError("traps", "count", "required key is missing");
  if (*count < 1 || *count > 8) throw ConfigError("traps", "count", "must be in 1..8");
  const std::size_t n = *count;

  std::vector<double> nu;
  const auto common = cfg.number("traps", "nu_Mrad_s");
  for (std::size_t m = 1; m <= n; ++m) {
    const std::string key = "nu_" + std::to_string(m) + "_Mrad_s";
    const auto v = cfg.number("traps", key);
    if (!v && !common) throw ConfigError("traps", key, "required key is missing");
    const double x = v ? *v : *common;
    if (!(x > 0.0)) throw ConfigError("traps", v ? key : "nu_Mrad_s", "must be positive");
    nu.push_back(x * kMega);
  }

  crystal::TrapArray traps;
  if (const auto d = cfg.number("traps", "d_um")) {
    if (!(*d > 0.0)) throw ConfigError("traps", "d_um", "must be positive");
    traps = crystal::TrapArray::uniform(nu, *d * kMicro);
  } else {
    traps.frequencies = nu;
    for (std::size_t m = 1; m <= n; ++m) {
      const std::string key = "z_" + std::to_string(m) + "_um";
      const auto z = cfg.number("traps", key);
      if (!z) throw ConfigError("traps", key, "required key is missing (or give d_um)");
      if (m > 1 && !(*z * kMicro > traps.centers.back()))
        throw ConfigError("traps", key, "trap centers must be strictly increasing");
      traps.centers.push_back(*z * kMicro);
    }
  }
  return traps;
}

crystal::FieldGradient read_gradient(const ConfigFile &cfg) {
  crystal::FieldGradient g;
  g.dBdz = cfg.number("gradient", "dBdz_T_per_m").value_or(0.0);
  g.B0 = cfg.number("gradient", "B0_T").value_or(0.0);
  if (!(g.dBdz >= 0.0)) throw ConfigError("gradient", "dBdz_T_per_m", "must be >= 0");
  return g;
}

namespace {

cavity::RamanChannel read_channel(const ConfigFile &cfg, const std::string &level, std::optional<cavity::ScaledCavity> scaled) {
  auto pick = [&](const std::string &base) -> std::optional<double> {
    if (auto v = cfg.number("cavity", base + "_" + level + "_Mrad_s")) return *v * kMega;
    if (auto v = cfg.number("cavity", base + "_Mrad_s")) return *v * kMega;
    return std::nullopt;
  };
  cavity::RamanChannel ch;
  const auto omega = pick("omega");
  const auto delta = pick("delta");
  auto h = pick("h");
  if (!omega) throw ConfigError("cavity", "omega_Mrad_s", "required key is missing");
  if (!delta) throw ConfigError("cavity", "delta_Mrad_s", "required key is missing");
  if (!h && scaled) h = scaled->g_cav;
  if (!h) throw ConfigError("cavity", "h_Mrad_s", "required key is missing (or give radius_um)");
  ch.omega_laser = *omega;
  ch.g_cav = *h;
  ch.detuning = *delta;
  if (ch.detuning == 0.0) throw ConfigError("cavity", "delta_Mrad_s", "detuning must be non-zero");
  if (ch.omega_laser < 0.0) throw ConfigError("cavity", "omega_Mrad_s", "must be >= 0");
  if (ch.g_cav < 0.0) throw ConfigError("cavity", "h_Mrad_s", "must be >= 0");
  return ch;
}

}  // namespace

cavity::CavitySetup read_cavity(const ConfigFile &cfg) {
  if (!cfg.has_section("cavity")) throw ConfigError("cavity", "", "section is required");
  std::optional<cavity::ScaledCavity> scaled;
  cavity::CavitySetup c;
  if (const auto r = cfg.number("cavity", "radius_um")) {
    if (!(*r > 0.0)) throw ConfigError("cavity", "radius_um", "must be positive");
    c.radius = *r * kMicro;
    scaled = cavity::scale_cavity(*c.radius);
  }
  c.channel_g = read_channel(cfg, "g", scaled);
  c.channel_e = read_channel(cfg, "e", scaled);
  const auto kM = cfg.number("cavity", "kappa_Mrad_s");
  const auto kr = cfg.number("cavity", "kappa_rad_s");
  if (kM && kr) throw ConfigError("cavity", "kappa_rad_s", "conflicts with kappa_Mrad_s");
  if (kM) c.kappa = *kM * kMega;
  else if (kr) c.kappa = *kr;
  else if (scaled) c.kappa = scaled->kappa;
  else throw ConfigError("cavity", "kappa_Mrad_s", "required key is missing");
  if (!(c.kappa >= 0.0)) throw ConfigError("cavity", kM ? "kappa_Mrad_s" : "kappa_rad_s", "must be >= 0");
  return c;
}

SweepGrid read_sweep(const ConfigFile &cfg) {
  SweepGrid g;
  g.omega_laser = cfg.require_number("cavity", "omega_Mrad_s") * kMega;
  g.g_cav = cfg.require_number("cavity", "h_Mrad_s") * kMega;
  const auto deltas = cfg.list("cavity", "delta_list_Mrad_s");
  if (deltas) {
    for (double d : *deltas) {
      if (d == 0.0) throw ConfigError("cavity", "delta_list_Mrad_s", "detuning must be non-zero");
      g.deltas.push_back(d * kMega);
    }
  } else if (const auto d = cfg.number("cavity", "delta_Mrad_s")) {
    if (*d == 0.0) throw ConfigError("cavity", "delta_Mrad_s", "detuning must be non-zero");
    g.deltas.push_back(*d * kMega);
  } else {
    throw ConfigError("cavity", "delta_list_Mrad_s", "required key is missing");
  }

  if (const auto grid = cfg.list("cavity", "kappa_grid_rad_s")) {
    g.kappas = *grid;
  } else if (const auto kmax = cfg.number("cavity", "kappa_max_rad_s")) {
    const auto points = cfg.unsigned_integer("cavity", "kappa_points").value_or(101);
    if (points < 2) throw ConfigError("cavity", "kappa_points", "need at least 2 points");
    if (!(*kmax > 0.0)) throw ConfigError("cavity", "kappa_max_rad_s", "must be positive");
    for (std::uint64_t k = 0; k < points; ++k)
      g.kappas.push_back(*kmax * static_cast<double>(k) / static_cast<double>(points - 1));
  } else {
    throw ConfigError("cavity", "kappa_grid_rad_s", "give kappa_grid_rad_s or kappa_max_rad_s");
  }
  for (double k : g.kappas)
    if (!(k >= 0.0)) throw ConfigError("cavity", "kappa_grid_rad_s", "decay rates must be >= 0");
  if (const auto k = cfg.number("cavity", "kappa_Mrad_s")) g.summary_kappa = *k * kMega;
  else if (const auto k2 = cfg.number("cavity", "kappa_rad_s")) g.summary_kappa = *k2;
  return g;
}

protocol::ExperimentConfig read_experiment(const ConfigFile &cfg) {
  protocol::ExperimentConfig e;
  e.species = read_species(cfg);
  e.traps = read_traps(cfg);
  e.gradient = read_gradient(cfg);
  e.ion_count = cfg.unsigned_integer("protocol", "ion_count").value_or(e.traps.size());
  if (e.ion_count != e.traps.size()) throw ConfigError("protocol", "ion_count", "does not match [traps] count");
  if (e.ion_count < 2 || e.ion_count > 6) throw ConfigError("protocol", "ion_count", "must be in 2..6");
  e.cavities.assign(e.ion_count, read_cavity(cfg));
  if (const auto conv = cfg.string("protocol", "convention")) {
    try {
      e.polarity = gates::parse_polarity(*conv);
    } catch (const DomainError &) {
      throw ConfigError("protocol", "convention", "expected eq8 or verbatim");
    }
  }
  e.seed = cfg.unsigned_integer("run", "seed").value_or(0);
  if (const auto t0 = cfg.number("protocol", "t0_ms")) {
    if (!(*t0 >= 0.0)) throw ConfigError("protocol", "t0_ms", "must be >= 0");
    e.t0 = *t0 * 1e-3;
  }
  auto nonneg = [&](const std::string &key, double scale) {
    const double v = cfg.number("protocol", key).value_or(0.0);
    if (!(v >= 0.0)) throw ConfigError("protocol", key, "must be >= 0");
    return v * scale;
  };
  e.t1 = nonneg("t1_ms", 1e-3);
  e.overheads.pulse_time = nonneg("pulse_time_us", 1e-6);
  e.overheads.hadamard_time = nonneg("hadamard_time_us", 1e-6);
  e.overheads.detection_time = nonneg("detection_time_ms", 1e-3);
  e.collection_efficiency = cfg.number("protocol", "collection_efficiency").value_or(1.0);
  if (!(e.collection_efficiency >= 0.0 && e.collection_efficiency <= 1.0))
    throw ConfigError("protocol", "collection_efficiency", "must be in [0, 1]");
  if (const auto t = cfg.number("protocol", "emission_time_s")) {
    if (!(*t >= 0.0)) throw ConfigError("protocol", "emission_time_s", "must be >= 0");
    e.emission_time = *t;
  }
  return e;
}

Reference read_reference(const ConfigFile &cfg) {
  Reference r;
  if (auto v = cfg.number("reference", "Delta_um")) r.deviation = *v * kMicro;
  if (auto v = cfg.number("reference", "h_um")) r.gap = *v * kMicro;
  if (auto v = cfg.number("reference", "eps_max")) r.eps_max = *v;
  if (auto v = cfg.number("reference", "J_12_krad_s")) r.j12 = *v * constants::kilo_rad_s;
  if (auto v = cfg.number("reference", "J_13_krad_s")) r.j13 = *v * constants::kilo_rad_s;
  return r;
}

std::optional<double> laser_lamb_dicke(const ConfigFile &cfg) {
  const auto eta = cfg.number("protocol", "eta");
  if (eta && !(*eta >= 0.0)) throw ConfigError("protocol", "eta", "must be >= 0");
  return eta;
}

std::string explain_units() {
  return "Units\n"
         "  Config keys carry their unit as a suffix; everything is converted to SI on read.\n"
         "    _um        micrometres            _T_per_m   tesla per metre\n"
         "    _Mrad_s    10^6 rad/s             _rad_s     rad/s\n"
         "    _krad_s    10^3 rad/s             _amu       atomic mass units\n"
         "    _ms/_us/_s milli-, micro-, seconds\n"
         "  Tabulated trap and cavity rates quoted as \"MHz\" or \"KHz\" are angular: the\n"
         "  built-in presets enter them as 10^6 (10^3) rad/s. Only that reading makes the\n"
         "  ion force balance and the gradient Lamb-Dicke values match the tabulated ones.\n"
         "  Output files are SI throughout: m, rad/s, s.\n";
}

}  // namespace ionphoton::config
