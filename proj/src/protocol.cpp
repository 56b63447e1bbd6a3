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

#include "ionphoton/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>

#include "ionphoton/error.hpp"
#include "ionphoton/io.hpp"

namespace ionphoton::protocol {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::string ion_string(std::size_t ions, std::size_t n) {
  std::string s;
  for (std::size_t m = 0; m < n; ++m) s += ((ions >> (n - 1 - m)) & 1u) ? 'g' : 'e';
  return s;
}

std::string photon_string(std::size_t photons, std::size_t n) {
  std::string s;
  for (std::size_t m = 0; m < n; ++m) {
    if (m) s += ' ';
    s += ((photons >> (n - 1 - m)) & 1u) ? "s0" : "s+";
  }
  return s;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (ion_count < 2 || ion_count > gates::kMaxIons) throw DomainError("ion count must be in 2..6");
  if (traps.size() != ion_count) throw DomainError("trap array does not match ion count");
  if (cavities.size() != ion_count) throw DomainError("need one cavity setup per ion");
  traps.validate();
  gradient.validate();
  species.validate();
  for (const auto &c : cavities) c.validate();
  if (!(collection_efficiency >= 0.0 && collection_efficiency <= 1.0))
    throw DomainError("collection efficiency must be in [0, 1]");
  if (t0 && !(*t0 >= 0.0)) throw DomainError("t0 must be >= 0");
  if (!(t1 >= 0.0)) throw DomainError("t1 must be >= 0");
  if (emission_time && !(*emission_time >= 0.0)) throw DomainError("emission time must be >= 0");
  if (!(overheads.pulse_time >= 0.0 && overheads.hadamard_time >= 0.0 && overheads.detection_time >= 0.0))
    throw DomainError("timing overheads must be >= 0");
}

std::vector<cavity::FourLevelAmplitudes> prepare_initial(std::size_t ion_count) {
  if (ion_count == 0) throw DomainError("ion count must be >= 1");
  return std::vector<cavity::FourLevelAmplitudes>(ion_count, cavity::FourLevelAmplitudes::initial());
}

double EmissionStage::total_probability() const {
  double p = 1.0;
  for (double x : probabilities) p *= x;
  return p;
}

EmissionStage emission_stage(const ExperimentConfig &cfg) {
  cfg.validate();
  const std::size_t n = cfg.ion_count;
  std::vector<std::array<cplx, 2>> site(n);  // (g s0, e s+)
  EmissionStage out{gates::SpinPhotonState(n), {}, {}, {}};
  for (std::size_t m = 0; m < n; ++m) {
    const cavity::EmissionResult r = cavity::emit(cfg.cavities[m], cfg.emission_time);
    out.probabilities.push_back(r.p_success);
    out.times.push_back(r.tau_star);
    out.rabi_mismatch.push_back(r.rabi_mismatch);
    site[m] = r.conditional_state;
  }
  // Every site is either |g s0> (bits 11) or |e s+> (bits 00).
  auto &amps = out.state.amplitudes();
  for (std::size_t pattern = 0; pattern < (std::size_t{1} << n); ++pattern) {
    std::size_t idx = 0;
    cplx a = 1.0;
    for (std::size_t m = 0; m < n; ++m) {
      const bool g = (pattern >> (n - 1 - m)) & 1u;
      idx = (idx << 2) | (g ? 3u : 0u);
      a *= g ? site[m][0] : site[m][1];
    }
    amps[idx] = a;
  }
  return out;
}

gates::SpinPhotonState entangle_stage(gates::SpinPhotonState state, const crystal::CouplingMatrix &J,
                                      gates::Polarity polarity) {
  const std::size_t n = state.ion_count();
  for (std::size_t k = 1; k < n; ++k) gates::apply_sequence(state, gates::cnot_sequence(J, 0, k, polarity), J);
  gates::apply_hadamard(state, 0);
  return state;
}

gates::SpinPhotonState entangle_ideal(gates::SpinPhotonState state, gates::Polarity polarity) {
  const std::size_t n = state.ion_count();
  for (std::size_t k = 1; k < n; ++k)
    gates::apply_ion_unitary(state, gates::controlled_x(n, 0, k, gates::active_level(polarity)));
  gates::apply_hadamard(state, 0);
  return state;
}

std::string OutcomeRow::expression() const {
  const double r2 = std::sqrt(2.0);
  bool compact = !terms.empty();
  for (const auto &t : terms)
    compact = compact && std::abs(t.amplitude.imag()) < 1e-9 && std::abs(std::abs(t.amplitude.real()) * r2 - 1.0) < 1e-9;
  std::string s = "(";
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto &t = terms[k];
    if (compact) {
      const bool neg = t.amplitude.real() < 0.0;
      if (k == 0) s += neg ? "-" : "+";
      else s += neg ? " - " : " + ";
    } else {
      if (k) s += " + ";
      s += "(" + io::format_number(t.amplitude.real()) + (t.amplitude.imag() < 0 ? "" : "+") +
           io::format_number(t.amplitude.imag()) + "i)";
    }
    s += "|" + t.photons + ">";
  }
  s += compact ? ")/sqrt2" : ")";
  return s;
}

OutcomeTable outcome_table(const gates::SpinPhotonState &state) {
  const std::size_t n = state.ion_count();
  const std::size_t dim = std::size_t{1} << n;
  OutcomeTable table;
  table.ion_count = n;
  for (std::size_t ions = 0; ions < dim; ++ions) {
    OutcomeRow row;
    row.ions = ion_string(ions, n);
    std::vector<std::pair<std::size_t, cplx>> found;
    for (std::size_t ph = dim; ph-- > 0;) {  // s0 (bit 1) sorts before s+
      std::size_t idx = 0;
      for (std::size_t m = 0; m < n; ++m) {
        const std::size_t sb = (ions >> (n - 1 - m)) & 1u;
        const std::size_t pb = (ph >> (n - 1 - m)) & 1u;
        idx = (idx << 2) | (sb << 1) | pb;
      }
      const cplx a = state.amplitude(idx);
      row.probability += std::norm(a);
      found.emplace_back(ph, a);
    }
    if (row.probability > 0.0) {
      const double norm = std::sqrt(row.probability);
      for (const auto &[ph, a] : found) {
        const cplx c = a / norm;
        if (std::abs(c) < 1e-12) continue;
        row.terms.push_back({photon_string(ph, n), static_cast<std::uint32_t>(ph), c});
      }
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

double timing_estimate(std::size_t ion_count, double t0, double t1) {
  if (ion_count < 2) throw DomainError("timing needs at least two ions");
  if (!(t0 >= 0.0) || !(t1 >= 0.0)) throw DomainError("t0 and t1 must be >= 0");
  return static_cast<double>(ion_count - 1) * t0 + t1;
}

TimingEstimate timing_for(const ExperimentConfig &cfg, const crystal::CouplingMatrix &J) {
  TimingEstimate t;
  std::size_t weakest = 1;
  double jmin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < J.size(); ++k) {
    if (std::abs(J(0, k)) < jmin) {
      jmin = std::abs(J(0, k));
      weakest = k;
    }
  }
  if (jmin > 0.0 && std::isfinite(jmin)) {
    t.bare_cnot = kPi / (2.0 * jmin);
    const auto seq = gates::cnot_sequence(J, 0, weakest, cfg.polarity);
    t.overhead_factor = gates::sequence_timing(seq, cfg.overheads.pulse_time).total / t.bare_cnot;
  }
  if (cfg.t0) {
    t.t0 = *cfg.t0;
  } else {
    if (t.bare_cnot == 0.0) throw UncompilableError("cannot derive t0: a coupling to ion 0 is zero");
    t.t0 = t.bare_cnot * t.overhead_factor;
    t.t0_derived = true;
  }
  t.t1 = cfg.t1 + cfg.overheads.hadamard_time + cfg.overheads.detection_time;
  t.total = timing_estimate(cfg.ion_count, t.t0, t.t1);
  return t;
}

bool is_order_millisecond(double seconds) { return seconds >= 1e-4 && seconds < 1e-2; }

SuccessRate success_rate(std::size_t ion_count, const std::vector<double> &probabilities) {
  if (probabilities.size() != ion_count) throw DomainError("need one probability per ion");
  double p = 1.0;
  for (double x : probabilities) {
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("probabilities must lie in [0, 1]");
    p *= x;
  }
  return {p, std::ldexp(p, -static_cast<int>(ion_count))};
}

TrialStream::TrialStream(std::uint64_t seed, std::uint64_t trial)
    : base_(splitmix64(seed ^ splitmix64(trial))) {}

std::uint64_t TrialStream::next() {
  return splitmix64(base_ + 0x9E3779B97F4A7C15ull * counter_++);
}

double TrialStream::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

RunReport sample_run(const ExperimentConfig &cfg, const OutcomeTable &table, const EmissionStage &emission,
                     const TimingEstimate &timing, std::uint64_t trials, unsigned threads) {
  if (trials == 0) throw DomainError("trials must be >= 1");
  if (table.rows.empty()) throw DomainError("outcome table is empty");
  RunReport rep;
  rep.ion_count = cfg.ion_count;
  rep.seed = cfg.seed;
  rep.trials = trials;
  rep.emission_probabilities = emission.probabilities;
  rep.total_emission_probability = emission.total_probability();
  rep.acceptance_probability =
      rep.total_emission_probability * std::pow(cfg.collection_efficiency, static_cast<double>(cfg.ion_count));
  rep.timing = timing;
  rep.rate = success_rate(cfg.ion_count, emission.probabilities);

  std::vector<double> cumulative;
  double acc = 0.0;
  for (const auto &row : table.rows) cumulative.push_back(acc += row.probability);

  const std::size_t rows = table.rows.size();
  auto run_range = [&](std::uint64_t begin, std::uint64_t end, std::vector<std::uint64_t> &counts) {
    for (std::uint64_t k = begin; k < end; ++k) {
      TrialStream rng(cfg.seed, k);
      if (!(rng.uniform() < rep.acceptance_probability)) continue;
      const double u = rng.uniform() * acc;
      const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      counts[std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), rows - 1)]++;
    }
  };

  threads = std::max(1u, threads);
  std::vector<std::vector<std::uint64_t>> partial(threads, std::vector<std::uint64_t>(rows, 0));
  if (threads == 1) {
    run_range(0, trials, partial[0]);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (trials + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::uint64_t b = std::min<std::uint64_t>(trials, t * chunk);
      const std::uint64_t e = std::min<std::uint64_t>(trials, b + chunk);
      pool.emplace_back(run_range, b, e, std::ref(partial[t]));
    }
    for (auto &th : pool) th.join();
  }
  std::vector<std::uint64_t> counts(rows, 0);
  for (const auto &p : partial)
    for (std::size_t r = 0; r < rows; ++r) counts[r] += p[r];

  for (std::size_t r = 0; r < rows; ++r) rep.successes += counts[r];
  std::size_t dof = 0;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto &row = table.rows[r];
    rep.counts[row.ions] = counts[r];
    const double n = static_cast<double>(rep.successes);
    const double p = row.probability / acc;
    rep.frequencies[row.ions] = rep.successes ? static_cast<double>(counts[r]) / n : 0.0;
    if (p > 0.0) {
      ++dof;
      if (rep.successes) {
        const double expected = n * p;
        const double diff = static_cast<double>(counts[r]) - expected;
        rep.chi_square += diff * diff / expected;
        if (std::abs(diff) > 3.0 * std::sqrt(n * p * (1.0 - p))) rep.outside_3sigma.push_back(row.ions);
      }
    }
  }
  if (dof > 1) {
    boost::math::chi_squared dist(static_cast<double>(dof - 1));
    rep.chi_square_critical = boost::math::quantile(dist, 0.999);
    rep.chi_square_pass = rep.chi_square <= rep.chi_square_critical;
  }
  if (rep.successes == 0) rep.notes.push_back("no successful trials; frequency checks skipped");
  if (!timing.t0_derived && cfg.t0) rep.notes.push_back("t0 taken from configuration");
  if (timing.t1 == 0.0) rep.notes.push_back("t1 (Hadamard + detection) is 0");
  for (std::size_t m = 0; m < emission.rabi_mismatch.size(); ++m)
    if (emission.rabi_mismatch[m])
      rep.notes.push_back("ion " + std::to_string(m + 1) + ": Raman channel rates differ; mean used");
  return rep;
}

PipelineResult run_pipeline(const ExperimentConfig &cfg) {
  cfg.validate();
  PipelineResult r{crystal::solve_crystal(cfg.traps, cfg.species, cfg.gradient), emission_stage(cfg),
                   gates::SpinPhotonState(cfg.ion_count), {}, {}};
  r.entangled = entangle_stage(r.emission.state, r.crystal.couplings, cfg.polarity);
  r.table = outcome_table(r.entangled);
  r.timing = timing_for(cfg, r.crystal.couplings);
  return r;
}

}  // namespace ionphoton::protocol
