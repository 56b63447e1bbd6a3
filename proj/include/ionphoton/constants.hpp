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

#include <numbers>

// CODATA 2018 values, SI units.
namespace ionphoton::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double hbar = 1.054571817e-34;             // J s
inline constexpr double bohr_magneton = 9.2740100783e-24;   // J/T
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

// e^2 / (4 pi eps0), J m
inline constexpr double coulomb_constant =
    elementary_charge * elementary_charge / (4.0 * pi * vacuum_permittivity);

// Tables quote "MHz"/"KHz"; those are read as angular rates.
inline constexpr double mega_rad_s = 1.0e6;
inline constexpr double kilo_rad_s = 1.0e3;
inline constexpr double micrometre = 1.0e-6;

}  // namespace ionphoton::constants
