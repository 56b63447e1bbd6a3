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

#include <complex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ionphoton/crystal.hpp"

// Statevector simulation of N ion qubits, each paired with the polarization
// qubit of the photon it emitted, and a compiler that builds CNOTs out of
// the always-on Ising interaction.
//
// Basis conventions (fixed; golden files depend on them):
//   ion qubit     |e> -> 0, |g> -> 1, sigma_z = |e><e| - |g><g|
//   photon qubit  |s+> -> 0, |s0> -> 1
//   site bits     (ion << 1) | photon
//   state index   site 0 occupies the most significant pair of bits
// Ion indices are zero-based everywhere in the API and in serialized text.
namespace ionphoton::gates {

using cplx = std::complex<double>;
using GateMatrix = Eigen::MatrixXcd;

inline constexpr std::size_t kMaxIons = 6;

enum class Axis { x, y, z };

char axis_name(Axis a);

class SpinPhotonState {
 public:
  explicit SpinPhotonState(std::size_t ion_count);
  SpinPhotonState(std::size_t ion_count, std::vector<cplx> amplitudes);

  std::size_t ion_count() const { return ion_count_; }
  std::size_t dimension() const { return amps_.size(); }
  const std::vector<cplx> &amplitudes() const { return amps_; }
  std::vector<cplx> &amplitudes() { return amps_; }
  cplx amplitude(std::size_t index) const { return amps_[index]; }

  double norm2() const;

  // Bit positions of ion m's spin and photon within the state index.
  std::size_t spin_shift(std::size_t ion) const { return 2 * (ion_count_ - 1 - ion) + 1; }
  std::size_t photon_shift(std::size_t ion) const { return 2 * (ion_count_ - 1 - ion); }

  // Index from per-site spin and photon bits.
  std::size_t index_of(const std::vector<int> &spins, const std::vector<int> &photons) const;

 private:
  std::size_t ion_count_;
  std::vector<cplx> amps_;
};

/// exp(-i angle/2 sigma_axis) on one ion; photons untouched.
void apply_rotation(SpinPhotonState &state, std::size_t ion, Axis axis, double angle);
SpinPhotonState rotated(SpinPhotonState state, std::size_t ion, Axis axis, double angle);

/// |g> -> (|g> + |e>)/sqrt2, |e> -> (|g> - |e>)/sqrt2.
void apply_hadamard(SpinPhotonState &state, std::size_t ion);

/// exp(+i t sum_{i<j} (J_ij/2) sigma_z^i sigma_z^j), the free evolution
/// under H = -sum_{i<j} (J_ij/2) sigma_z^i sigma_z^j.
void ising_evolve(SpinPhotonState &state, const crystal::CouplingMatrix &J, double t);

// Dense ion-subspace unitary (dimension 2^N) applied to every photon
// configuration.
void apply_ion_unitary(SpinPhotonState &state, const GateMatrix &u);

struct Rotation {
  std::size_t ion = 0;
  Axis axis = Axis::x;
  double angle = 0.0;
};

struct IsingDelay {
  double duration = 0.0;  // s
};

struct GlobalPhase {
  double angle = 0.0;  // multiplies by exp(i angle)
};

using PulseElement = std::variant<Rotation, IsingDelay, GlobalPhase>;

/// Elements are kept in operator-product order: the LAST element acts
/// first, as in a written product of exponentials.
struct PulseSequence {
  std::vector<PulseElement> elements;

  double total_duration() const;
  std::size_t rotation_count() const;

  // Builders that take elements in the order they are applied in time.
  static PulseSequence from_time_order(std::vector<PulseElement> applied_first_to_last);
  std::vector<PulseElement> time_order() const;

  // `later` acts after *this.
  PulseSequence then(const PulseSequence &later) const;

  void validate(std::size_t ion_count) const;
};

/// One element per line: `ROT <ion> <x|y|z> <angle>`, `ZZ <seconds>`,
/// `PHASE <angle>`, earliest first; `#` starts a comment line. Numbers use
/// shortest round-trip formatting.
std::string serialize(const PulseSequence &seq);
PulseSequence parse_sequence(std::string_view text);

void apply_sequence(SpinPhotonState &state, const PulseSequence &seq,
                    const crystal::CouplingMatrix &J);

/// Unitary on the 2^N ion subspace produced by `seq` with the couplings
/// J switched on during every IsingDelay.
GateMatrix sequence_unitary(const PulseSequence &seq, const crystal::CouplingMatrix &J);

/// |Tr(U^dagger V)| / dim. Throws DomainError on mismatched dimensions.
double gate_fidelity(const GateMatrix &u, const GateMatrix &v);

// Ideal reference gates on N ions.
GateMatrix identity_gate(std::size_t ion_count);
GateMatrix single_qubit_gate(std::size_t ion_count, std::size_t ion, const Eigen::Matrix2cd &m);
GateMatrix rotation_gate(std::size_t ion_count, std::size_t ion, Axis axis, double angle);
GateMatrix hadamard_gate(std::size_t ion_count, std::size_t ion);
// exp(-i angle sigma_z^i sigma_z^j)
GateMatrix zz_gate(std::size_t ion_count, std::size_t i, std::size_t j, double angle);

enum class ControlLevel { e, g };

// Flips `target` when `control` is in the given level.
GateMatrix controlled_x(std::size_t ion_count, std::size_t control, std::size_t target,
                        ControlLevel active);

/// Sign choice for the six-factor CNOT product
///   e^{-i pi/4} e^{-i(pi/4)Y_t} e^{+i(pi/4)Z_c} e^{+i(pi/4)Z_t} e^{-i(pi/4)Z_c Z_t} e^{+i(pi/4)Y_t}.
/// `verbatim` uses those signs and flips the target when the control is
/// |g>. `eq8` negates the Z_c and Z_c Z_t angles, which flips the target
/// when the control is |e>; that is the polarity the outcome tables need.
enum class Polarity { verbatim, eq8 };

ControlLevel active_level(Polarity p);
std::string_view polarity_name(Polarity p);
Polarity parse_polarity(std::string_view name);

// The six factors as dense 2-ion (4x4) matrices, leftmost first.
std::vector<GateMatrix> cnot_factors(Polarity polarity);
GateMatrix cnot_product(Polarity polarity);

/// Sequence whose net action is exp(-i angle Z_i Z_j) while every other
/// coupling in J is cancelled.
///
/// Each ion k carries a toggling-frame sign w_k(s) on 2^m equal time slices,
/// drawn from the rows of a Walsh-Hadamard matrix: ion i takes the constant
/// row, ion j the constant row times the needed sign, every other ion its
/// own non-constant row. Distinct rows are orthogonal, so every pair except
/// (i, j) averages to zero. Sign changes are realized with instantaneous
/// x pi-pulses, and a trailing PHASE element cancels the (-i) per pulse so
/// the sequence is exact, global phase included.
PulseSequence compile_refocused_zz(const crystal::CouplingMatrix &J, std::size_t i, std::size_t j,
                                   double angle);

/// CNOT(control -> target) from the six-factor product, the Z_c Z_t factor
/// realized by compile_refocused_zz on the live couplings.
PulseSequence cnot_sequence(const crystal::CouplingMatrix &J, std::size_t control,
                            std::size_t target, Polarity polarity = Polarity::eq8);

struct SequenceTiming {
  double free_evolution = 0.0;  // s, sum of IsingDelay
  std::size_t pulses = 0;
  double total = 0.0;           // free_evolution + pulses * pulse_time
  double overhead_factor = 1.0; // total / free_evolution
};

SequenceTiming sequence_timing(const PulseSequence &seq, double pulse_time);

}  // namespace ionphoton::gates
