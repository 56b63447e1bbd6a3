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

#include <sstream>

#include "ionphoton/config.hpp"
#include "ionphoton/error.hpp"

namespace ionphoton::config {

namespace {

struct TwoIonRow {
  const char *d, *nu, *dBdz, *delta, *h, *eps, *j;
};

struct ThreeIonRow {
  const char *d, *nu_outer, *nu_middle, *dBdz, *delta, *h, *eps, *j12, *j13;
};

// Reference two-trap crystals; "MHz"/"KHz" entered as 10^6/10^3 rad/s.
constexpr TwoIonRow kTable1[] = {
    {"6.0", "5.55", "550", "0.521", "7.042", "7.066e-2", "6.328"},
    {"7.0", "4.50", "400", "0.588", "8.176", "7.038e-2", "4.980"},
    {"8.0", "3.75", "300", "0.653", "9.307", "6.939e-2", "3.959"},
    {"9.0", "3.30", "250", "0.681", "10.362", "7.005e-2", "3.370"},
    {"10.0", "2.35", "150", "1.001", "12.001", "6.994e-2", "2.875"},
};

constexpr ThreeIonRow kTable2[] = {
    {"6.0", "2.75", "7.75", "240", "2.037", "8.037", "6.994e-2", "1.455", "1.448"},
    {"7.0", "2.55", "7.25", "210", "1.922", "8.922", "7.048e-2", "1.141", "1.149"},
    {"8.0", "2.05", "5.80", "150", "2.252", "10.25", "6.962e-2", "0.922", "0.922"},
    {"9.0", "1.45", "4.10", "90", "3.186", "12.19", "6.810e-2", "0.747", "0.747"},
    {"10.0", "1.20", "3.40", "70", "3.688", "13.69", "6.996e-2", "0.670", "0.672"},
};

std::string two_ion_case(const TwoIonRow &r) {
  std::ostringstream s;
  s << "[species]\nlabel = Yb-171\nmass_amu = 171\ng_factor = 2.0\n"
    << "[traps]\ncount = 2\nd_um = " << r.d << "\nnu_Mrad_s = " << r.nu << "\n"
    << "[gradient]\ndBdz_T_per_m = " << r.dBdz << "\n"
    << "[protocol]\neta = 0.1\n"
    << "[reference]\nDelta_um = " << r.delta << "\nh_um = " << r.h << "\neps_max = " << r.eps
    << "\nJ_12_krad_s = " << r.j << "\n";
  return s.str();
}

std::string three_ion_case(const ThreeIonRow &r) {
  std::ostringstream s;
  s << "[species]\nlabel = Yb-171\nmass_amu = 171\ng_factor = 2.0\n"
    << "[traps]\ncount = 3\nd_um = " << r.d << "\nnu_1_Mrad_s = " << r.nu_outer
    << "\nnu_2_Mrad_s = " << r.nu_middle << "\nnu_3_Mrad_s = " << r.nu_outer << "\n"
    << "[gradient]\ndBdz_T_per_m = " << r.dBdz << "\n"
    << "[protocol]\neta = 0.1\n"
    << "[reference]\nDelta_um = " << r.delta << "\nh_um = " << r.h << "\neps_max = " << r.eps
    << "\nJ_12_krad_s = " << r.j12 << "\nJ_13_krad_s = " << r.j13 << "\n";
  return s.str();
}

std::string protocol_case(const std::string &traps, const std::string &kappa_Mrad_s, int seed) {
  std::ostringstream s;
  s << "[species]\nlabel = Yb-171\nmass_amu = 171\ng_factor = 2.0\n"
    << traps
    << "[cavity]\nomega_Mrad_s = 10\nh_Mrad_s = 138\ndelta_Mrad_s = 0.1\nkappa_Mrad_s = " << kappa_Mrad_s << "\n"
    << "[protocol]\nconvention = eq8\n"
    << "[run]\nseed = " << seed << "\ntrials = 100000\nthreads = 1\n";
  return s.str();
}

std::vector<Preset> build_presets() {
  std::vector<Preset> out;

  Preset t1{"table1", "two-ion couplings, five trap spacings", {}};
  for (const auto &r : kTable1) t1.cases.push_back(two_ion_case(r));
  out.push_back(t1);

  Preset t2{"table2", "three-ion couplings, five trap spacings", {}};
  for (const auto &r : kTable2) t2.cases.push_back(three_ion_case(r));
  out.push_back(t2);

  const std::string cavity_head = "[cavity]\nomega_Mrad_s = 10\nh_Mrad_s = 138\n";
  out.push_back({"fig2", "pair emission probability vs cavity decay, four detunings",
                 {cavity_head + "delta_list_Mrad_s = 0.1, 0.25, 0.5, 1.0\nkappa_max_rad_s = 1e9\nkappa_points = 101\n"
                                "kappa_Mrad_s = 960\n"}});
  out.push_back({"fig2-narrow", "pair emission probability at detuning 1e-3 (10^6 rad/s)",
                 {cavity_head + "delta_list_Mrad_s = 0.001\nkappa_max_rad_s = 1e9\nkappa_points = 101\n"}});

  const std::string two = "[traps]\ncount = 2\nd_um = 6.0\nnu_Mrad_s = 5.55\n[gradient]\ndBdz_T_per_m = 550\n";
  const std::string three =
      "[traps]\ncount = 3\nd_um = 8.0\nnu_1_Mrad_s = 2.05\nnu_2_Mrad_s = 5.80\nnu_3_Mrad_s = 2.05\n"
      "[gradient]\ndBdz_T_per_m = 150\n";
  const std::string five = "[traps]\ncount = 5\nd_um = 8.0\nnu_Mrad_s = 3.75\n[gradient]\ndBdz_T_per_m = 300\n";
  out.push_back({"ideal2", "two ions, lossless cavities", {protocol_case(two, "0", 1)}});
  out.push_back({"ideal3", "three ions, lossless cavities", {protocol_case(three, "0", 1)}});
  out.push_back({"ideal5", "five ions, lossless cavities", {protocol_case(five, "0", 1)}});
  out.push_back({"lossy2", "two ions, 10 um cavities (kappa = 960e6 rad/s)", {protocol_case(two, "960", 1)}});
  return out;
}

}  // namespace

const std::vector<Preset> &presets() {
  static const std::vector<Preset> p = build_presets();
  return p;
}

const Preset &find_preset(const std::string &name) {
  for (const auto &p : presets())
    if (p.name == name) return p;
  throw ConfigError("preset", name, "unknown preset");
}

}  // namespace ionphoton::config
