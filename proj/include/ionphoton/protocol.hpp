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
#include <vector>

#include "ionphoton/cavity.hpp"
#include "ionphoton/crystal.hpp"
#include "ionphoton/gates.hpp"

// End-to-end N-ion entangled photon protocol: prepare, emit, entangle,
// measure, and the bookkeeping around it.
namespace ionphoton::protocol {

using cplx = std::complex<double>;

struct TimingOverheads {
  double pulse_time = 0.0;      // s per single-qubit pulse inside a CNOT
  double hadamard_time = 0.0;   // s
  double detection_time = 0.0;  // s, fluorescence readout
};

struct ExperimentConfig {
  std::size_t ion_count = 2;
  crystal::TrapArray traps;
  crystal::FieldGradient gradient;
  crystal::IonSpecies species = crystal::IonSpecies::ytterbium171();
  std::vector<cavity::CavitySetup> cavities;  // one per ion
  gates::Polarity polarity = gates::Polarity::eq8;
  std::uint64_t seed = 0;
  std::optional<double> t0;  // s per CNOT; derived from J when absent
  double t1 = 0.0;           // s, Hadamard + measurement
  TimingOverheads overheads;
  double collection_efficiency = 1.0;
  std::optional<double> emission_time;  // overrides the optimal time on every ion

  void validate() const;
};

/// Per-ion state of the auxiliary superposition with empty cavities.
std::vector<cavity::FourLevelAmplitudes> prepare_initial(std::size_t ion_count);

struct EmissionStage {
  gates::SpinPhotonState state;
  std::vector<double> probabilities;  // P_m
  std::vector<double> times;          // tau_m
  std::vector<bool> rabi_mismatch;

  double total_probability() const;
};

/// Runs each cavity and, conditional on every ion emitting, builds the
/// product spin-photon state. |g,10> becomes |g>|s0> and |e,01> becomes
/// |e>|s+>.
EmissionStage emission_stage(const ExperimentConfig &cfg);

/// CNOT(0 -> k) for k = 1..N-1 compiled against J, then a Hadamard on ion 0.
gates::SpinPhotonState entangle_stage(gates::SpinPhotonState state,
                                      const crystal::CouplingMatrix &J, gates::Polarity polarity);

// Reference path with ideal gate matrices instead of pulse sequences.
gates::SpinPhotonState entangle_ideal(gates::SpinPhotonState state, gates::Polarity polarity);

struct PhotonTerm {
  std::string photons;  // e.g. "s0 s+"
  std::uint32_t bits = 0;
  cplx amplitude;       // in the normalized photon state
};

struct OutcomeRow {
  std::string ions;  // over {e, g}, ion 0 first
  std::vector<PhotonTerm> terms;
  double probability = 0.0;

  // "(+|s0 s+> - |s+ s0>)/sqrt2"
  std::string expression() const;
};

struct OutcomeTable {
  std::size_t ion_count = 0;
  std::vector<OutcomeRow> rows;  // ion strings in index order (e = 0)
};

/// Projects onto each ion basis string and normalizes what is left of the
/// photons. Terms with |amplitude| below 1e-12 are dropped.
OutcomeTable outcome_table(const gates::SpinPhotonState &state);

struct TimingEstimate {
  double t0 = 0.0;
  double t1 = 0.0;
  double total = 0.0;
  double bare_cnot = 0.0;        // pi / (2 min_k |J_0k|)
  double overhead_factor = 1.0;  // compiled CNOT with pulses over bare_cnot
  bool t0_derived = false;
};

/// (N - 1) t0 + t1.
double timing_estimate(std::size_t ion_count, double t0, double t1);

// Fills t0 from the couplings when the config leaves it out.
TimingEstimate timing_for(const ExperimentConfig &cfg, const crystal::CouplingMatrix &J);

// True when t lies within a decade of one millisecond.
bool is_order_millisecond(double seconds);

struct SuccessRate {
  double any_state = 0.0;       // prod P_m
  double specific_state = 0.0;  // prod P_m / 2^N
};

SuccessRate success_rate(std::size_t ion_count, const std::vector<double> &probabilities);

// Per-trial random stream. Trial k of seed s draws its i-th 64-bit word as
// splitmix64(mix(s, k) + i * golden), so trials are independent of thread
// layout.
class TrialStream {
 public:
  TrialStream(std::uint64_t seed, std::uint64_t trial);
  std::uint64_t next();
  double uniform();  // [0, 1) with 53 random bits

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

struct RunReport {
  std::size_t ion_count = 0;
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::vector<double> emission_probabilities;
  double total_emission_probability = 0.0;
  double acceptance_probability = 0.0;  // includes collection efficiency
  std::uint64_t successes = 0;
  std::map<std::string, std::uint64_t> counts;  // every ion string, zero if unseen
  std::map<std::string, double> frequencies;    // counts / successes
  std::vector<std::string> outside_3sigma;      // ion strings outside the binomial band
  double chi_square = 0.0;
  double chi_square_critical = 0.0;  // 0.999 quantile, 2^N - 1 dof
  bool chi_square_pass = true;
  TimingEstimate timing;
  SuccessRate rate;
  std::vector<std::string> notes;
};

/// Monte Carlo over trials: each draws emission success with probability
/// prod P_m (times collection efficiency^N), then an ion string from the
/// outcome table. Deterministic for a given seed and independent of
/// `threads`.
RunReport sample_run(const ExperimentConfig &cfg, const OutcomeTable &table,
                     const EmissionStage &emission, const TimingEstimate &timing,
                     std::uint64_t trials, unsigned threads = 1);

struct PipelineResult {
  crystal::CrystalSolution crystal;
  EmissionStage emission;
  gates::SpinPhotonState entangled;
  OutcomeTable table;
  TimingEstimate timing;
};

PipelineResult run_pipeline(const ExperimentConfig &cfg);

}  // namespace ionphoton::protocol
