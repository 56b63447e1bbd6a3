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

#include <string>
#include <vector>

#include <Eigen/Dense>

// Statics and small-oscillation dynamics of ions held in an axial array of
// microtraps, and the magnetic-gradient spin-spin couplings they mediate.
//
// Everything is SI: metres, kilograms, rad/s, tesla. The model is 1-D along
// the trap axis; V(z) = sum_m M nu_m^2 (z_m - c_m)^2 / 2 + sum_{m<n} k_e / |z_m - z_n|.
namespace ionphoton::crystal {

struct IonSpecies {
  double mass = 0.0;      // kg
  double g_factor = 2.0;  // dimensionless
  std::string label;

  static IonSpecies ytterbium171();
  void validate() const;
};

struct TrapArray {
  std::vector<double> centers;      // m, strictly increasing
  std::vector<double> frequencies;  // rad/s

  std::size_t size() const { return centers.size(); }
  void validate() const;

  // N traps spaced by `spacing`, centred on the origin.
  static TrapArray uniform(std::vector<double> frequencies, double spacing);
  TrapArray shifted(double offset) const;
};

struct FieldGradient {
  double dBdz = 0.0;  // T/m
  double B0 = 0.0;    // T at z = 0; level splittings are not modelled

  void validate() const;
  // d(omega)/dz = g mu_B (dB/dz) / hbar, rad/(s m).
  double splitting_gradient(const IonSpecies &species) const;
};

struct Equilibrium {
  std::vector<double> positions;   // m
  // Displacement from the trap centre, positive when pointing away from the
  // middle of the array. A trap sitting exactly at the middle reports the
  // raw displacement z - c.
  std::vector<double> deviations;
  std::vector<double> gaps;        // positions[k+1] - positions[k]
  double residual = 0.0;           // max |force|, N
  int iterations = 0;
};

struct NormalModes {
  std::vector<double> frequencies;  // rad/s, ascending
  Eigen::MatrixXd mode_matrix;      // row n = mode n, column m = ion m
  std::vector<double> spreads;      // sqrt(hbar / (2 M nu_n)), m

  std::size_t size() const { return frequencies.size(); }
};

struct CouplingMatrix {
  Eigen::MatrixXd J;  // rad/s, symmetric, zero diagonal

  std::size_t size() const { return static_cast<std::size_t>(J.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
};

inline constexpr double kEpsilonCutoff = 0.071;

struct EpsilonMatrix {
  Eigen::MatrixXd eps;  // rows = modes, columns = ions, magnitudes
  double eps_max = 0.0;

  bool exceeds_cutoff(double cutoff = kEpsilonCutoff) const { return eps_max > cutoff; }
};

struct SolverOptions {
  int max_iterations = 200;
  double force_tolerance = 1e-14;  // relative to ke / (closest gap)^2
  double step_tolerance = 1e-14;   // relative to the smallest gap
  double min_gap = 10e-9;          // m; closer than this counts as a collision
};

// Potential energy and its derivatives; exposed for tests and oracles.
double potential_energy(const std::vector<double> &z, const TrapArray &traps,
                        const IonSpecies &species);
std::vector<double> forces(const std::vector<double> &z, const TrapArray &traps,
                           const IonSpecies &species);
Eigen::MatrixXd hessian(const std::vector<double> &z, const TrapArray &traps,
                        const IonSpecies &species);

/// Newton iteration on the force balance, starting at the trap centres.
/// Throws SolverError on non-convergence and InstabilityError if two ions
/// come closer than `min_gap` or swap order.
Equilibrium solve_equilibrium(const TrapArray &traps, const IonSpecies &species,
                              const SolverOptions &options = {});

/// Diagonalizes the Hessian at `eq`. Throws InstabilityError when an
/// eigenvalue is not positive.
NormalModes normal_modes(const Equilibrium &eq, const TrapArray &traps,
                         const IonSpecies &species);

/// J_ij = sum_n S_ni S_nj (domega/dz)^2 dz_n^2 / nu_n, diagonal zeroed.
CouplingMatrix coupling_matrix(const NormalModes &modes, const FieldGradient &grad,
                               const IonSpecies &species);

/// eps(l, n) = |S_ln| (domega_n/dz) dz_l / nu_l for mode l and ion n.
EpsilonMatrix epsilon_matrix(const NormalModes &modes, const FieldGradient &grad,
                             const IonSpecies &species);

inline constexpr double kLambDickeWarning = 0.123;

struct LambDicke {
  double value = 0.0;
  bool warning = false;  // value > kLambDickeWarning
};

LambDicke effective_lamb_dicke(double eta, double eps_max);

// Convenience bundle: equilibrium, modes, J and eps for one configuration.
struct CrystalSolution {
  Equilibrium equilibrium;
  NormalModes modes;
  CouplingMatrix couplings;
  EpsilonMatrix epsilon;
};

CrystalSolution solve_crystal(const TrapArray &traps, const IonSpecies &species,
                              const FieldGradient &grad);

}  // namespace ionphoton::crystal
