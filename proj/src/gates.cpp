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

#include "ionphoton/gates.hpp"

#include <cmath>
#include <sstream>

#include "ionphoton/error.hpp"
#include "ionphoton/io.hpp"

namespace ionphoton::gates {

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::Matrix2cd pauli(Axis a) {
  Eigen::Matrix2cd m;
  switch (a) {
    case Axis::x: m << 0, 1, 1, 0; break;
    case Axis::y: m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case Axis::z: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::Matrix2cd rotation_2x2(Axis a, double angle) {
  return std::cos(0.5 * angle) * Eigen::Matrix2cd::Identity() -
         cplx(0.0, std::sin(0.5 * angle)) * pauli(a);
}

Eigen::Matrix2cd hadamard_2x2() {
  Eigen::Matrix2cd h;
  const double r = 1.0 / std::sqrt(2.0);
  h << -r, r, r, r;
  return h;
}

void apply_2x2(SpinPhotonState &state, std::size_t ion, const Eigen::Matrix2cd &m) {
  if (ion >= state.ion_count()) throw DomainError("ion index out of range");
  const std::size_t bit = std::size_t{1} << state.spin_shift(ion);
  auto &a = state.amplitudes();
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k & bit) continue;
    const cplx e = a[k];
    const cplx g = a[k | bit];
    a[k] = m(0, 0) * e + m(0, 1) * g;
    a[k | bit] = m(1, 0) * e + m(1, 1) * g;
  }
}

void check_couplings(const crystal::CouplingMatrix &J, std::size_t n) {
  if (J.size() != n) throw DomainError("coupling matrix dimension does not match ion count");
}

// Ising phase of the ion bit string `ions` (ion 0 most significant of n bits).
double ising_phase(const crystal::CouplingMatrix &J, std::size_t n, std::size_t ions) {
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double zi = ((ions >> (n - 1 - i)) & 1u) ? -1.0 : 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double zj = ((ions >> (n - 1 - j)) & 1u) ? -1.0 : 1.0;
      phase += 0.5 * J(i, j) * zi * zj;
    }
  }
  return phase;
}

std::size_t ion_bits_of(const SpinPhotonState &s, std::size_t index) {
  std::size_t ions = 0;
  for (std::size_t m = 0; m < s.ion_count(); ++m) ions = (ions << 1) | ((index >> s.spin_shift(m)) & 1u);
  return ions;
}

}  // namespace

char axis_name(Axis a) {
  switch (a) {
    case Axis::x: return 'x';
    case Axis::y: return 'y';
    case Axis::z: return 'z';
  }
  return '?';
}

SpinPhotonState::SpinPhotonState(std::size_t ion_count) : ion_count_(ion_count) {
  if (ion_count == 0 || ion_count > kMaxIons) throw DomainError("ion count must be in 1..6");
  amps_.assign(std::size_t{1} << (2 * ion_count), cplx{});
}

SpinPhotonState::SpinPhotonState(std::size_t ion_count, std::vector<cplx> amplitudes)
    : SpinPhotonState(ion_count) {
  if (amplitudes.size() != amps_.size()) throw DomainError("amplitude vector has the wrong dimension");
  amps_ = std::move(amplitudes);
}

double SpinPhotonState::norm2() const {
  double s = 0.0;
  for (const cplx &a : amps_) s += std::norm(a);
  return s;
}

std::size_t SpinPhotonState::index_of(const std::vector<int> &spins,
                                      const std::vector<int> &photons) const {
  if (spins.size() != ion_count_ || photons.size() != ion_count_)
    throw DomainError("site bit strings have the wrong length");
  std::size_t idx = 0;
  for (std::size_t m = 0; m < ion_count_; ++m)
    idx = (idx << 2) | (static_cast<std::size_t>(spins[m] & 1) << 1) | static_cast<std::size_t>(photons[m] & 1);
  return idx;
}

void apply_rotation(SpinPhotonState &state, std::size_t ion, Axis axis, double angle) {
  apply_2x2(state, ion, rotation_2x2(axis, angle));
}

SpinPhotonState rotated(SpinPhotonState state, std::size_t ion, Axis axis, double angle) {
  apply_rotation(state, ion, axis, angle);
  return state;
}

void apply_hadamard(SpinPhotonState &state, std::size_t ion) { apply_2x2(state, ion, hadamard_2x2()); }

void ising_evolve(SpinPhotonState &state, const crystal::CouplingMatrix &J, double t) {
  const std::size_t n = state.ion_count();
  check_couplings(J, n);
  if (t == 0.0) return;
  // Phases depend only on the ion bits; tabulate them once.
  std::vector<cplx> table(std::size_t{1} << n);
  for (std::size_t ions = 0; ions < table.size(); ++ions)
    table[ions] = std::polar(1.0, t * ising_phase(J, n, ions));
  auto &a = state.amplitudes();
  for (std::size_t k = 0; k < a.size(); ++k) a[k] *= table[ion_bits_of(state, k)];
}

void apply_ion_unitary(SpinPhotonState &state, const GateMatrix &u) {
  const std::size_t n = state.ion_count();
  const std::size_t dim = std::size_t{1} << n;
  if (static_cast<std::size_t>(u.rows()) != dim || u.rows() != u.cols())
    throw DomainError("ion unitary has the wrong dimension");
  auto &a = state.amplitudes();
  // Scatter index for each ion string with all photon bits cleared.
  std::vector<std::size_t> spin_index(dim);
  for (std::size_t ions = 0; ions < dim; ++ions) {
    std::size_t idx = 0;
    for (std::size_t m = 0; m < n; ++m)
      if ((ions >> (n - 1 - m)) & 1u) idx |= std::size_t{1} << state.spin_shift(m);
    spin_index[ions] = idx;
  }
  Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
  for (std::size_t photons = 0; photons < dim; ++photons) {
    std::size_t pidx = 0;
    for (std::size_t m = 0; m < n; ++m)
      if ((photons >> (n - 1 - m)) & 1u) pidx |= std::size_t{1} << state.photon_shift(m);
    for (std::size_t s = 0; s < dim; ++s) v(static_cast<Eigen::Index>(s)) = a[spin_index[s] | pidx];
    const Eigen::VectorXcd w = u * v;
    for (std::size_t s = 0; s < dim; ++s) a[spin_index[s] | pidx] = w(static_cast<Eigen::Index>(s));
  }
}

double PulseSequence::total_duration() const {
  double t = 0.0;
  for (const auto &e : elements)
    if (const auto *d = std::get_if<IsingDelay>(&e)) t += d->duration;
  return t;
}

std::size_t PulseSequence::rotation_count() const {
  std::size_t n = 0;
  for (const auto &e : elements) n += std::holds_alternative<Rotation>(e) ? 1 : 0;
  return n;
}

PulseSequence PulseSequence::from_time_order(std::vector<PulseElement> applied_first_to_last) {
  return {std::vector<PulseElement>(applied_first_to_last.rbegin(), applied_first_to_last.rend())};
}

std::vector<PulseElement> PulseSequence::time_order() const {
  return {elements.rbegin(), elements.rend()};
}

PulseSequence PulseSequence::then(const PulseSequence &later) const {
  PulseSequence out = later;
  out.elements.insert(out.elements.end(), elements.begin(), elements.end());
  return out;
}

void PulseSequence::validate(std::size_t ion_count) const {
  for (const auto &e : elements) {
    if (const auto *r = std::get_if<Rotation>(&e)) {
      if (r->ion >= ion_count) throw DomainError("pulse addresses an ion out of range");
    } else if (const auto *d = std::get_if<IsingDelay>(&e)) {
      if (!(d->duration >= 0.0)) throw DomainError("Ising delay must be >= 0");
    }
  }
}

std::string serialize(const PulseSequence &seq) {
  std::string out = "# one element per line, earliest first; ions numbered from 0\n";
  for (const auto &e : seq.time_order()) {
    if (const auto *r = std::get_if<Rotation>(&e)) {
      out += "ROT " + std::to_string(r->ion) + ' ' + axis_name(r->axis) + ' ' + io::format_number(r->angle);
    } else if (const auto *d = std::get_if<IsingDelay>(&e)) {
      out += "ZZ " + io::format_number(d->duration);
    } else {
      out += "PHASE " + io::format_number(std::get<GlobalPhase>(e).angle);
    }
    out += '\n';
  }
  return out;
}

PulseSequence parse_sequence(std::string_view text) {
  PulseSequence seq;  // filled in time order, reversed at the end
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string &why) {
    throw DomainError("pulse sequence line " + std::to_string(lineno) + ": " + why);
  };
  auto number = [&](const std::string &tok) {
    double v = 0.0;
    if (!io::parse_number(tok, v)) fail("bad number '" + tok + "'");
    return v;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty() || tok[0][0] == '#') continue;
    if (tok[0] == "ROT") {
      if (tok.size() != 4) fail("ROT takes <ion> <axis> <angle>");
      double ion = number(tok[1]);
      if (ion < 0 || ion != std::floor(ion)) fail("ion index must be a non-negative integer");
      Axis axis;
      if (tok[2] == "x") axis = Axis::x;
      else if (tok[2] == "y") axis = Axis::y;
      else if (tok[2] == "z") axis = Axis::z;
      else fail("axis must be x, y or z");
      seq.elements.emplace_back(Rotation{static_cast<std::size_t>(ion), axis, number(tok[3])});
    } else if (tok[0] == "ZZ") {
      if (tok.size() != 2) fail("ZZ takes <seconds>");
      const double d = number(tok[1]);
      if (!(d >= 0.0)) fail("ZZ duration must be >= 0");
      seq.elements.emplace_back(IsingDelay{d});
    } else if (tok[0] == "PHASE") {
      if (tok.size() != 2) fail("PHASE takes <angle>");
      seq.elements.emplace_back(GlobalPhase{number(tok[1])});
    } else {
      fail("unknown element '" + tok[0] + "'");
    }
  }
  return PulseSequence::from_time_order(std::move(seq.elements));
}

void apply_sequence(SpinPhotonState &state, const PulseSequence &seq, const crystal::CouplingMatrix &J) {
  seq.validate(state.ion_count());
  check_couplings(J, state.ion_count());
  for (auto it = seq.elements.rbegin(); it != seq.elements.rend(); ++it) {
    if (const auto *r = std::get_if<Rotation>(&*it)) {
      apply_rotation(state, r->ion, r->axis, r->angle);
    } else if (const auto *d = std::get_if<IsingDelay>(&*it)) {
      ising_evolve(state, J, d->duration);
    } else {
      const cplx ph = std::polar(1.0, std::get<GlobalPhase>(*it).angle);
      for (cplx &a : state.amplitudes()) a *= ph;
    }
  }
}

GateMatrix identity_gate(std::size_t ion_count) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << ion_count);
  return GateMatrix::Identity(dim, dim);
}

GateMatrix single_qubit_gate(std::size_t ion_count, std::size_t ion, const Eigen::Matrix2cd &m) {
  if (ion >= ion_count) throw DomainError("ion index out of range");
  const std::size_t dim = std::size_t{1} << ion_count;
  const std::size_t bit = std::size_t{1} << (ion_count - 1 - ion);
  GateMatrix u = GateMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    const std::size_t b = (col & bit) ? 1 : 0;
    const std::size_t base = col & ~bit;
    u(static_cast<Eigen::Index>(base), static_cast<Eigen::Index>(col)) = m(0, static_cast<Eigen::Index>(b));
    u(static_cast<Eigen::Index>(base | bit), static_cast<Eigen::Index>(col)) = m(1, static_cast<Eigen::Index>(b));
  }
  return u;
}

GateMatrix rotation_gate(std::size_t ion_count, std::size_t ion, Axis axis, double angle) {
  return single_qubit_gate(ion_count, ion, rotation_2x2(axis, angle));
}

GateMatrix hadamard_gate(std::size_t ion_count, std::size_t ion) {
  return single_qubit_gate(ion_count, ion, hadamard_2x2());
}

GateMatrix zz_gate(std::size_t ion_count, std::size_t i, std::size_t j, double angle) {
  if (i >= ion_count || j >= ion_count || i == j) throw DomainError("bad ZZ pair");
  GateMatrix u = identity_gate(ion_count);
  for (Eigen::Index k = 0; k < u.rows(); ++k) {
    const auto s = static_cast<std::size_t>(k);
    const double zi = ((s >> (ion_count - 1 - i)) & 1u) ? -1.0 : 1.0;
    const double zj = ((s >> (ion_count - 1 - j)) & 1u) ? -1.0 : 1.0;
    u(k, k) = std::polar(1.0, -angle * zi * zj);
  }
  return u;
}

GateMatrix controlled_x(std::size_t ion_count, std::size_t control, std::size_t target,
                        ControlLevel active) {
  if (control >= ion_count || target >= ion_count || control == target)
    throw DomainError("bad control/target pair");
  const std::size_t dim = std::size_t{1} << ion_count;
  const std::size_t cbit = std::size_t{1} << (ion_count - 1 - control);
  const std::size_t tbit = std::size_t{1} << (ion_count - 1 - target);
  const bool on_g = active == ControlLevel::g;
  GateMatrix u = GateMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t col = 0; col < dim; ++col) {
    const bool control_is_g = (col & cbit) != 0;
    const std::size_t row = control_is_g == on_g ? (col ^ tbit) : col;
    u(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = 1.0;
  }
  return u;
}

GateMatrix sequence_unitary(const PulseSequence &seq, const crystal::CouplingMatrix &J) {
  const std::size_t n = J.size();
  if (n == 0 || n > kMaxIons) throw DomainError("coupling matrix must cover 1..6 ions");
  seq.validate(n);
  const std::size_t dim = std::size_t{1} << n;
  GateMatrix u = identity_gate(n);
  for (auto it = seq.elements.rbegin(); it != seq.elements.rend(); ++it) {
    if (const auto *r = std::get_if<Rotation>(&*it)) {
      u = rotation_gate(n, r->ion, r->axis, r->angle) * u;
    } else if (const auto *d = std::get_if<IsingDelay>(&*it)) {
      for (std::size_t s = 0; s < dim; ++s)
        u.row(static_cast<Eigen::Index>(s)) *= std::polar(1.0, d->duration * ising_phase(J, n, s));
    } else {
      u *= std::polar(1.0, std::get<GlobalPhase>(*it).angle);
    }
  }
  return u;
}

double gate_fidelity(const GateMatrix &u, const GateMatrix &v) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols())
    throw DomainError("gate dimensions differ");
  return std::abs((u.adjoint() * v).trace()) / static_cast<double>(u.rows());
}

ControlLevel active_level(Polarity p) { return p == Polarity::eq8 ? ControlLevel::e : ControlLevel::g; }

std::string_view polarity_name(Polarity p) { return p == Polarity::eq8 ? "eq8" : "verbatim"; }

Polarity parse_polarity(std::string_view name) {
  if (name == "eq8" || name == "eq8-convention" || name == "on") return Polarity::eq8;
  if (name == "verbatim" || name == "off") return Polarity::verbatim;
  throw DomainError("unknown CNOT convention '" + std::string(name) + "'");
}

std::vector<GateMatrix> cnot_factors(Polarity polarity) {
  const double p = polarity == Polarity::eq8 ? -1.0 : 1.0;
  const double q = kPi / 4.0;
  return {
      identity_gate(2) * std::polar(1.0, -q),
      rotation_gate(2, 1, Axis::y, 2.0 * q),     // e^{-i(pi/4) Y_t}
      rotation_gate(2, 0, Axis::z, -2.0 * p * q),  // e^{+i(pi/4) p Z_c}
      rotation_gate(2, 1, Axis::z, -2.0 * q),    // e^{+i(pi/4) Z_t}
      zz_gate(2, 0, 1, p * q),                   // e^{-i(pi/4) p Z_c Z_t}
      rotation_gate(2, 1, Axis::y, -2.0 * q),    // e^{+i(pi/4) Y_t}
  };
}

GateMatrix cnot_product(Polarity polarity) {
  GateMatrix u = identity_gate(2);
  for (const GateMatrix &f : cnot_factors(polarity)) u = u * f;
  return u;
}

PulseSequence compile_refocused_zz(const crystal::CouplingMatrix &J, std::size_t i, std::size_t j,
                                   double angle) {
  const std::size_t n = J.size();
  if (n < 2 || n > kMaxIons) throw DomainError("refocusing supports 2..6 ions");
  if (i >= n || j >= n || i == j) throw DomainError("bad ZZ pair");
  const double jij = J(i, j);
  if (jij == 0.0 || !std::isfinite(jij))
    throw UncompilableError("coupling J_" + std::to_string(i) + std::to_string(j) + " is zero");
  if (angle == 0.0) return {};

  const double duration = 2.0 * std::abs(angle) / std::abs(jij);
  const double sign = -(angle > 0.0 ? 1.0 : -1.0) * (jij > 0.0 ? 1.0 : -1.0);

  std::size_t slices = 1;
  while (slices < n - 1) slices <<= 1;

  // Walsh row per ion: i and j share row 0, the rest get 1, 2, ...
  std::vector<std::size_t> row(n, 0);
  std::size_t next = 1;
  for (std::size_t k = 0; k < n; ++k)
    if (k != i && k != j) row[k] = next++;
  auto walsh = [](std::size_t r, std::size_t s) {
    return (__builtin_popcountll(r & s) & 1) ? -1.0 : 1.0;
  };

  std::vector<PulseElement> timeline;
  std::vector<double> frame(n, 1.0);
  std::size_t pulses = 0;
  auto flip_to = [&](std::size_t k, double want) {
    if (frame[k] != want) {
      timeline.emplace_back(Rotation{k, Axis::x, kPi});
      frame[k] = want;
      ++pulses;
    }
  };
  const double slice = duration / static_cast<double>(slices);
  for (std::size_t s = 0; s < slices; ++s) {
    for (std::size_t k = 0; k < n; ++k) flip_to(k, walsh(row[k], s) * (k == j ? sign : 1.0));
    if (!timeline.empty() && std::holds_alternative<IsingDelay>(timeline.back()))
      std::get<IsingDelay>(timeline.back()).duration += slice;
    else
      timeline.emplace_back(IsingDelay{slice});
  }
  for (std::size_t k = 0; k < n; ++k) flip_to(k, 1.0);

  // Each R_x(pi) is -iX; pulses come in pairs per ion, so the product is +-1.
  if ((pulses / 2) % 2 == 1) timeline.emplace_back(GlobalPhase{kPi});
  return PulseSequence::from_time_order(std::move(timeline));
}

PulseSequence cnot_sequence(const crystal::CouplingMatrix &J, std::size_t control, std::size_t target,
                            Polarity polarity) {
  const std::size_t n = J.size();
  if (control == target) throw DomainError("CNOT control and target must differ");
  if (control >= n || target >= n) throw DomainError("CNOT index out of range");
  const double p = polarity == Polarity::eq8 ? -1.0 : 1.0;
  const double q = kPi / 4.0;

  std::vector<PulseElement> timeline;
  timeline.emplace_back(Rotation{target, Axis::y, -2.0 * q});
  for (const PulseElement &e : compile_refocused_zz(J, control, target, p * q).time_order())
    timeline.push_back(e);
  timeline.emplace_back(Rotation{target, Axis::z, -2.0 * q});
  timeline.emplace_back(Rotation{control, Axis::z, -2.0 * p * q});
  timeline.emplace_back(Rotation{target, Axis::y, 2.0 * q});
  timeline.emplace_back(GlobalPhase{-q});
  return PulseSequence::from_time_order(std::move(timeline));
}

SequenceTiming sequence_timing(const PulseSequence &seq, double pulse_time) {
  SequenceTiming t;
  t.free_evolution = seq.total_duration();
  t.pulses = seq.rotation_count();
  t.total = t.free_evolution + static_cast<double>(t.pulses) * pulse_time;
  t.overhead_factor = t.free_evolution > 0.0 ? t.total / t.free_evolution : 1.0;
  return t;
}

}  // namespace ionphoton::gates
