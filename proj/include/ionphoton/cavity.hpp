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

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

// Conditional (no-jump) dynamics of one ion driving two Raman channels into
// a lossy two-mode microcavity, after adiabatic elimination of the excited
// level. Rates in rad/s, times in s.
namespace ionphoton::cavity {

using cplx = std::complex<double>;

struct RamanChannel {
  double omega_laser = 0.0;  // laser Rabi rate
  double g_cav = 0.0;        // cavity coupling
  double detuning = 0.0;     // from the excited level, must be non-zero
};

/// omega_laser * g_cav / detuning. Throws DomainError for zero detuning.
double effective_rabi(const RamanChannel &channel);

struct CavitySetup {
  RamanChannel channel_g;  // |g'> -> |g>, photon into the sigma_0 mode
  RamanChannel channel_e;  // |e'> -> |e>, photon into the sigma_+ mode
  double kappa = 0.0;      // field decay rate, both modes
  std::optional<double> radius;  // m, only used for scaling bookkeeping

  void validate() const;
};

struct ResolvedRabi {
  double omega_eff = 0.0;
  bool mismatch = false;  // channels differ by more than 1e-6 relative; mean used
};

// The two channels are assumed to share one effective rate.
ResolvedRabi resolve_rabi(const CavitySetup &setup);

/// Amplitudes over {|g',00>, |g,10>, |e',00>, |e,01>}.
struct FourLevelAmplitudes {
  static constexpr std::size_t kAuxG = 0;
  static constexpr std::size_t kPhotonG = 1;
  static constexpr std::size_t kAuxE = 2;
  static constexpr std::size_t kPhotonE = 3;

  std::array<cplx, 4> amp{};

  double norm2() const;
  // (|g'> + |e'>)|00> / sqrt 2
  static FourLevelAmplitudes initial();
};

/// Propagates `state` for time t >= 0 under the non-Hermitian cavity
/// Hamiltonian. Closed-form 2x2 propagator per sector; handles the
/// under-, critically and over-damped cases.
FourLevelAmplitudes evolve_conditional(const CavitySetup &setup, const FourLevelAmplitudes &state,
                                       double t);

// Same propagation with an explicit effective rate.
FourLevelAmplitudes evolve_conditional(double omega_eff, double kappa,
                                       const FourLevelAmplitudes &state, double t);

/// First maximum of the emission probability in time. Underdamped branch
/// solves tan(W' t) = 2W'/kappa with W' = sqrt(W^2 - kappa^2/4); the
/// overdamped branch uses tanh; the critical point gives t = 2/kappa. A
/// finite maximizer exists on every branch when omega_eff > 0.
double optimal_emission_time(double omega_eff, double kappa);

/// exp(-kappa t) sin^2(W' t) (W / W')^2, continued to sinh/cosh when W' is
/// imaginary.
double success_probability(double omega_eff, double kappa, double tau);

struct EmissionResult {
  double tau_star = 0.0;
  double p_success = 0.0;
  // Normalized amplitudes of the one-photon branch: (|g,10>, |e,01>).
  std::array<cplx, 2> conditional_state{};
  bool rabi_mismatch = false;
};

/// Runs the ion from the initial superposition to `tau` (default: the
/// optimal time) and reports the photon-emitted branch.
EmissionResult emit(const CavitySetup &setup, std::optional<double> tau = std::nullopt);

struct ScalingAnchor {
  double radius = 10e-6;      // m
  double g_cav = 138.4e6;     // rad/s
  double kappa = 960.0e6;     // rad/s
};

struct ScaledCavity {
  double g_cav = 0.0;
  double kappa = 0.0;
};

/// g ~ R^(-3/4), kappa ~ 1/R at fixed finesse, measured from `anchor`.
ScaledCavity scale_cavity(double radius, const ScalingAnchor &anchor = {});

struct SweepRow {
  double kappa = 0.0;
  double delta = 0.0;
  double tau_star = 0.0;
  double p_single = 0.0;
  double p_pair = 0.0;
};

/// Pair success probability at the optimal time for each (delta, kappa),
/// both cavities identical. Rows ordered by delta as given, then kappa
/// ascending.
std::vector<SweepRow> fig2_sweep(double omega_laser, double g_cav, std::vector<double> kappas,
                                 const std::vector<double> &deltas);

std::string sweep_csv(const std::vector<SweepRow> &rows);

}  // namespace ionphoton::cavity
