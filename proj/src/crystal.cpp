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

#include "ionphoton/crystal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ionphoton/constants.hpp"
#include "ionphoton/error.hpp"
#include "ionphoton/jacobi.hpp"

namespace ionphoton::crystal {

using constants::coulomb_constant;

IonSpecies IonSpecies::ytterbium171() {
  return {171.0 * constants::atomic_mass_unit, 2.0, "Yb-171"};
}

void IonSpecies::validate() const {
  if (!(mass > 0.0)) throw DomainError("species mass must be positive");
  if (!(g_factor > 0.0)) throw DomainError("species g factor must be positive");
}

void TrapArray::validate() const {
  if (centers.empty()) throw DomainError("trap array is empty");
  if (centers.size() != frequencies.size())
    throw DomainError("trap centers and frequencies differ in length");
  for (std::size_t m = 0; m < size(); ++m) {
    if (!std::isfinite(centers[m])) throw DomainError("trap center is not finite");
    if (!(frequencies[m] > 0.0) || !std::isfinite(frequencies[m]))
      throw DomainError("trap frequencies must be positive");
    if (m > 0 && !(centers[m] > centers[m - 1]))
      throw DomainError("trap centers must be strictly increasing");
  }
}

TrapArray TrapArray::uniform(std::vector<double> frequencies, double spacing) {
  TrapArray t;
  const double n = static_cast<double>(frequencies.size());
  for (std::size_t m = 0; m < frequencies.size(); ++m)
    t.centers.push_back((static_cast<double>(m) - 0.5 * (n - 1.0)) * spacing);
  t.frequencies = std::move(frequencies);
  return t;
}

TrapArray TrapArray::shifted(double offset) const {
  TrapArray t = *this;
  for (double &c : t.centers) c += offset;
  return t;
}

void FieldGradient::validate() const {
  if (!(dBdz >= 0.0) || !std::isfinite(dBdz)) throw DomainError("field gradient must be >= 0");
}

double FieldGradient::splitting_gradient(const IonSpecies &species) const {
  return species.g_factor * constants::bohr_magneton * dBdz / constants::hbar;
}

double potential_energy(const std::vector<double> &z, const TrapArray &traps,
                        const IonSpecies &species) {
  double v = 0.0;
  for (std::size_t m = 0; m < z.size(); ++m) {
    const double d = z[m] - traps.centers[m];
    v += 0.5 * species.mass * traps.frequencies[m] * traps.frequencies[m] * d * d;
    for (std::size_t n = m + 1; n < z.size(); ++n) v += coulomb_constant / std::abs(z[n] - z[m]);
  }
  return v;
}

std::vector<double> forces(const std::vector<double> &z, const TrapArray &traps,
                           const IonSpecies &species) {
  std::vector<double> f(z.size());
  for (std::size_t m = 0; m < z.size(); ++m) {
    f[m] = -species.mass * traps.frequencies[m] * traps.frequencies[m] * (z[m] - traps.centers[m]);
    for (std::size_t n = 0; n < z.size(); ++n) {
      if (n == m) continue;
      const double r = z[m] - z[n];
      f[m] += std::copysign(coulomb_constant / (r * r), r);
    }
  }
  return f;
}

Eigen::MatrixXd hessian(const std::vector<double> &z, const TrapArray &traps,
                        const IonSpecies &species) {
  const auto n = static_cast<Eigen::Index>(z.size());
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    const auto um = static_cast<std::size_t>(m);
    k(m, m) = species.mass * traps.frequencies[um] * traps.frequencies[um];
    for (Eigen::Index p = 0; p < n; ++p) {
      if (p == m) continue;
      const double r = std::abs(z[um] - z[static_cast<std::size_t>(p)]);
      const double kc = 2.0 * coulomb_constant / (r * r * r);
      k(m, m) += kc;
      k(m, p) = -kc;
    }
  }
  return k;
}

namespace {

double max_abs(const std::vector<double> &v) {
  double r = 0.0;
  for (double x : v) r = std::max(r, std::abs(x));
  return r;
}

double min_gap(const std::vector<double> &z) {
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < z.size(); ++k) g = std::min(g, z[k + 1] - z[k]);
  return g;
}

}  // namespace

Equilibrium solve_equilibrium(const TrapArray &traps, const IonSpecies &species,
                              const SolverOptions &options) {
  traps.validate();
  species.validate();
  const std::size_t n = traps.size();

  std::vector<double> z = traps.centers;
  if (min_gap(z) < options.min_gap) throw InstabilityError("trap centers closer than the collision limit");

  // Forces are judged against the Coulomb force at the closest spacing.
  auto force_scale = [&](const std::vector<double> &pos) {
    const double g = n > 1 ? min_gap(pos) : 1e-6;
    return coulomb_constant / (g * g);
  };
  std::vector<double> f = forces(z, traps, species);
  double residual = max_abs(f);
  int iter = 0;
  bool converged = residual < options.force_tolerance * force_scale(z);

  while (!converged && iter < options.max_iterations) {
    ++iter;
    const Eigen::MatrixXd k = hessian(z, traps, species);
    const Eigen::VectorXd rhs = Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd step = k.partialPivLu().solve(rhs);

    // Backtrack until the ordering is kept and the force residual drops.
    double scale = 1.0;
    std::vector<double> trial(n);
    std::vector<double> trial_f;
    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving, scale *= 0.5) {
      for (std::size_t m = 0; m < n; ++m) trial[m] = z[m] + scale * step(static_cast<Eigen::Index>(m));
      if (min_gap(trial) < options.min_gap) continue;
      trial_f = forces(trial, traps, species);
      if (max_abs(trial_f) < residual || halving >= 30) {
        accepted = true;
        break;
      }
    }
    if (!accepted) throw InstabilityError("ions collide during equilibrium search");

    double biggest_move = 0.0;
    for (std::size_t m = 0; m < n; ++m) biggest_move = std::max(biggest_move, std::abs(trial[m] - z[m]));
    z = trial;
    f = std::move(trial_f);
    residual = max_abs(f);

    const double length = n > 1 ? min_gap(z) : std::sqrt(coulomb_constant / (species.mass * traps.frequencies[0] * traps.frequencies[0]));
    converged = residual < options.force_tolerance * force_scale(z) || biggest_move < options.step_tolerance * length;
  }
  if (!converged) throw SolverError("equilibrium solver did not converge", residual);

  Equilibrium eq;
  eq.positions = z;
  eq.residual = residual;
  eq.iterations = iter;
  const double middle = 0.5 * (traps.centers.front() + traps.centers.back());
  const double span = traps.centers.back() - traps.centers.front();
  for (std::size_t m = 0; m < n; ++m) {
    const double raw = z[m] - traps.centers[m];
    const double side = traps.centers[m] - middle;
    const bool at_middle = std::abs(side) <= 1e-12 * span;
    eq.deviations.push_back(at_middle || side > 0.0 ? raw : -raw);
  }
  for (std::size_t k = 0; k + 1 < n; ++k) eq.gaps.push_back(z[k + 1] - z[k]);
  return eq;
}

NormalModes normal_modes(const Equilibrium &eq, const TrapArray &traps, const IonSpecies &species) {
  species.validate();
  if (eq.positions.size() != traps.size()) throw DomainError("equilibrium does not match trap array");
  const Eigen::MatrixXd k = hessian(eq.positions, traps, species);
  const linalg::SymmetricEigen es = linalg::jacobi_eigen(k);

  NormalModes modes;
  modes.mode_matrix = es.vectors.transpose();
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const double lambda = es.values(i);
    if (!(lambda > 0.0)) {
      std::ostringstream os;
      os << "Hessian eigenvalue " << lambda << " is not positive; configuration is unstable";
      throw InstabilityError(os.str());
    }
    const double nu = std::sqrt(lambda / species.mass);
    modes.frequencies.push_back(nu);
    modes.spreads.push_back(std::sqrt(constants::hbar / (2.0 * species.mass * nu)));
  }
  return modes;
}

CouplingMatrix coupling_matrix(const NormalModes &modes, const FieldGradient &grad,
                               const IonSpecies &species) {
  grad.validate();
  const double dw = grad.splitting_gradient(species);
  const Eigen::Index n = modes.mode_matrix.cols();
  CouplingMatrix out{Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double sum = 0.0;
      for (std::size_t mode = 0; mode < modes.size(); ++mode) {
        const auto r = static_cast<Eigen::Index>(mode);
        const double dz = modes.spreads[mode];
        sum += modes.mode_matrix(r, i) * modes.mode_matrix(r, j) * dz * dz / modes.frequencies[mode];
      }
      out.J(i, j) = out.J(j, i) = sum * dw * dw;
    }
  }
  return out;
}

EpsilonMatrix epsilon_matrix(const NormalModes &modes, const FieldGradient &grad,
                             const IonSpecies &species) {
  grad.validate();
  const double dw = grad.splitting_gradient(species);
  EpsilonMatrix out;
  out.eps = modes.mode_matrix.cwiseAbs();
  for (std::size_t l = 0; l < modes.size(); ++l)
    out.eps.row(static_cast<Eigen::Index>(l)) *= dw * modes.spreads[l] / modes.frequencies[l];
  out.eps_max = out.eps.size() > 0 ? out.eps.maxCoeff() : 0.0;
  return out;
}

LambDicke effective_lamb_dicke(double eta, double eps_max) {
  if (!(eta >= 0.0) || !(eps_max >= 0.0)) throw DomainError("Lamb-Dicke inputs must be >= 0");
  const double v = std::hypot(eta, eps_max);
  return {v, v > kLambDickeWarning};
}

CrystalSolution solve_crystal(const TrapArray &traps, const IonSpecies &species,
                              const FieldGradient &grad) {
  CrystalSolution s;
  s.equilibrium = solve_equilibrium(traps, species);
  s.modes = normal_modes(s.equilibrium, traps, species);
  s.couplings = coupling_matrix(s.modes, grad, species);
  s.epsilon = epsilon_matrix(s.modes, grad, species);
  return s;
}

}  // namespace ionphoton::crystal
