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

#include "ionphoton/cavity.hpp"

#include <algorithm>
#include <limits>
#include <cassert>
#include <cmath>

#include "ionphoton/error.hpp"
#include "ionphoton/io.hpp"

namespace ionphoton::cavity {

namespace {

// exp(-kappa t / 2) * {C(t), S(t)} where the sector propagator is
// exp(-kappa t/2) [C I + S (M + kappa/2)], M = [[0, -iW], [-iW, -kappa]].
struct Damped {
  double c = 1.0;
  double s = 0.0;
};

Damped damped_terms(double omega, double kappa, double t) {
  const double disc = 0.25 * kappa * kappa - omega * omega;
  if (disc < 0.0) {
    const double w = std::sqrt(-disc);
    const double env = std::exp(-0.5 * kappa * t);
    return {env * std::cos(w * t), env * std::sin(w * t) / w};
  }
  if (disc > 0.0) {
    const double w = std::sqrt(disc);
    // cosh and sinh folded into the envelope so large t cannot overflow.
    const double grow = std::exp((w - 0.5 * kappa) * t);
    const double decay = std::exp(-(w + 0.5 * kappa) * t);
    return {0.5 * (grow + decay), 0.5 * (grow - decay) / w};
  }
  const double env = std::exp(-0.5 * kappa * t);
  return {env, env * t};
}

void propagate_sector(double omega, double kappa, double t, cplx &aux, cplx &photon) {
  const Damped d = damped_terms(omega, kappa, t);
  const cplx mi(0.0, -omega);
  const cplx a = aux;
  const cplx b = photon;
  aux = d.c * a + d.s * (0.5 * kappa * a + mi * b);
  photon = d.c * b + d.s * (mi * a - 0.5 * kappa * b);
}

}  // namespace

double effective_rabi(const RamanChannel &channel) {
  if (channel.detuning == 0.0) throw DomainError("Raman detuning must be non-zero");
  if (channel.omega_laser < 0.0 || channel.g_cav < 0.0)
    throw DomainError("laser and cavity couplings must be >= 0");
  const double r = channel.omega_laser * channel.g_cav / channel.detuning;
  if (!std::isfinite(r)) throw DomainError("effective Rabi rate is not finite");
  return r;
}

void CavitySetup::validate() const {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw DomainError("cavity decay rate must be >= 0");
  if (radius && !(*radius > 0.0)) throw DomainError("cavity radius must be positive");
  effective_rabi(channel_g);
  effective_rabi(channel_e);
}

ResolvedRabi resolve_rabi(const CavitySetup &setup) {
  setup.validate();
  const double wg = effective_rabi(setup.channel_g);
  const double we = effective_rabi(setup.channel_e);
  const double scale = std::max(std::abs(wg), std::abs(we));
  const bool mismatch = scale > 0.0 && std::abs(wg - we) > 1e-6 * scale;
  return {mismatch ? 0.5 * (wg + we) : wg, mismatch};
}

double FourLevelAmplitudes::norm2() const {
  double s = 0.0;
  for (const cplx &a : amp) s += std::norm(a);
  return s;
}

FourLevelAmplitudes FourLevelAmplitudes::initial() {
  FourLevelAmplitudes s;
  s.amp[kAuxG] = s.amp[kAuxE] = cplx(1.0 / std::sqrt(2.0), 0.0);
  return s;
}

FourLevelAmplitudes evolve_conditional(double omega_eff, double kappa,
                                       const FourLevelAmplitudes &state, double t) {
  if (!(t >= 0.0)) throw DomainError("evolution time must be >= 0");
  if (!(kappa >= 0.0)) throw DomainError("cavity decay rate must be >= 0");
  FourLevelAmplitudes out = state;
  if (t == 0.0) return out;
  using F = FourLevelAmplitudes;
  propagate_sector(omega_eff, kappa, t, out.amp[F::kAuxG], out.amp[F::kPhotonG]);
  propagate_sector(omega_eff, kappa, t, out.amp[F::kAuxE], out.amp[F::kPhotonE]);
  return out;
}

FourLevelAmplitudes evolve_conditional(const CavitySetup &setup, const FourLevelAmplitudes &state,
                                       double t) {
  return evolve_conditional(resolve_rabi(setup).omega_eff, setup.kappa, state, t);
}

double optimal_emission_time(double omega_eff, double kappa) {
  if (!(omega_eff > 0.0)) throw DomainError("effective Rabi rate must be positive");
  if (!(kappa >= 0.0)) throw DomainError("cavity decay rate must be >= 0");
  const double disc = 0.25 * kappa * kappa - omega_eff * omega_eff;
  if (disc < 0.0) {
    const double w = std::sqrt(-disc);
    return std::atan2(2.0 * w, kappa) / w;
  }
  if (disc > 0.0) {
    const double w = std::sqrt(disc);
    return std::atanh(2.0 * w / kappa) / w;
  }
  return 2.0 / kappa;
}

double success_probability(double omega_eff, double kappa, double tau) {
  if (!(tau >= 0.0)) throw DomainError("emission time must be >= 0");
  const double s = damped_terms(omega_eff, kappa, tau).s;
  const double p = s * s * omega_eff * omega_eff;
  assert(p >= 0.0 && p <= 1.0 + 1e-12);
  // Within a few ulp of 1 the deviation is rounding, not physics; this keeps
  // the lossless limit at exactly 1.
  if (p > 1.0 - 4.0 * std::numeric_limits<double>::epsilon()) return 1.0;
  return p;
}

EmissionResult emit(const CavitySetup &setup, std::optional<double> tau) {
  const ResolvedRabi rabi = resolve_rabi(setup);
  EmissionResult r;
  r.rabi_mismatch = rabi.mismatch;
  r.tau_star = tau ? *tau : optimal_emission_time(rabi.omega_eff, setup.kappa);
  const FourLevelAmplitudes out =
      evolve_conditional(rabi.omega_eff, setup.kappa, FourLevelAmplitudes::initial(), r.tau_star);
  using F = FourLevelAmplitudes;
  const cplx bg = out.amp[F::kPhotonG];
  const cplx be = out.amp[F::kPhotonE];
  r.p_success = std::norm(bg) + std::norm(be);
  if (r.p_success > 1.0 - 4.0 * std::numeric_limits<double>::epsilon()) r.p_success = 1.0;
  if (r.p_success > 0.0) {
    // Drop the phase the two branches share.
    const cplx phase = std::abs(bg) > 0.0 ? std::conj(bg) / std::abs(bg) : std::conj(be) / std::abs(be);
    const double n = std::sqrt(r.p_success);
    r.conditional_state = {bg * phase / n, be * phase / n};
  } else {
    // Limit t -> 0: both branches start with equal weight and equal rates.
    r.conditional_state = {cplx(1.0 / std::sqrt(2.0)), cplx(1.0 / std::sqrt(2.0))};
  }
  return r;
}

ScaledCavity scale_cavity(double radius, const ScalingAnchor &anchor) {
  if (!(radius > 0.0)) throw DomainError("cavity radius must be positive");
  if (!(anchor.radius > 0.0)) throw DomainError("scaling anchor radius must be positive");
  const double ratio = radius / anchor.radius;
  return {anchor.g_cav * std::pow(ratio, -0.75), anchor.kappa / ratio};
}

std::vector<SweepRow> fig2_sweep(double omega_laser, double g_cav, std::vector<double> kappas,
                                 const std::vector<double> &deltas) {
  if (kappas.empty() || deltas.empty()) throw DomainError("sweep ranges must be non-empty");
  std::sort(kappas.begin(), kappas.end());
  std::vector<SweepRow> rows;
  rows.reserve(kappas.size() * deltas.size());
  for (double delta : deltas) {
    const double w = effective_rabi({omega_laser, g_cav, delta});
    for (double kappa : kappas) {
      SweepRow row;
      row.kappa = kappa;
      row.delta = delta;
      row.tau_star = optimal_emission_time(w, kappa);
      row.p_single = success_probability(w, kappa, row.tau_star);
      row.p_pair = row.p_single * row.p_single;
      rows.push_back(row);
    }
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow> &rows) {
  std::string out = io::csv_line({"kappa_rad_s", "delta_rad_s", "tau_star_s", "p_single", "p_pair"});
  for (const SweepRow &r : rows)
    out += io::csv_line({io::format_number(r.kappa), io::format_number(r.delta),
                         io::format_number(r.tau_star), io::format_number(r.p_single),
                         io::format_number(r.p_pair)});
  return out;
}

}  // namespace ionphoton::cavity
