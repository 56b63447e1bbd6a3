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

#include "ionphoton/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ionphoton/constants.hpp"
#include "ionphoton/error.hpp"
#include "ionphoton/gates.hpp"
#include "ionphoton/io.hpp"
#include "ionphoton/protocol.hpp"

namespace ionphoton::cli {

using nlohmann::ordered_json;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string cell_text(const Cell &c) {
  struct V {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double d) const { return io::format_number(d); }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(const std::string &s) const { return s; }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
  };
  return std::visit(V{}, c);
}

ordered_json cell_json(const Cell &c) {
  struct V {
    ordered_json operator()(std::monostate) const { return nullptr; }
    ordered_json operator()(double d) const { return std::isfinite(d) ? ordered_json(d) : ordered_json(io::format_number(d)); }
    ordered_json operator()(std::int64_t i) const { return i; }
    ordered_json operator()(const std::string &s) const { return s; }
    ordered_json operator()(bool b) const { return b; }
  };
  return std::visit(V{}, c);
}

Cell opt(const std::optional<double> &v) { return v ? Cell(*v) : Cell(); }

Cell rel_dev(double value, const std::optional<double> &ref) {
  if (!ref || *ref == 0.0) return {};
  return (value - *ref) / *ref;
}

std::int64_t i64(std::size_t v) { return static_cast<std::int64_t>(v); }

std::string pct(double x) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(2);
  s << 100.0 * x << "%";
  return s.str();
}

std::string sci(double x, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << x;
  return s.str();
}

}  // namespace

std::string Table::to_csv() const {
  std::string out = io::csv_line(columns);
  for (const auto &row : rows) {
    std::vector<std::string> f;
    f.reserve(row.size());
    for (const auto &c : row) f.push_back(cell_text(c));
    out += io::csv_line(f);
  }
  return out;
}

std::string Table::to_json() const {
  ordered_json arr = ordered_json::array();
  for (const auto &row : rows) {
    ordered_json obj = ordered_json::object();
    for (std::size_t k = 0; k < columns.size(); ++k) obj[columns[k]] = k < row.size() ? cell_json(row[k]) : nullptr;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

void ReportBundle::add(const std::string &stem, const Table &table, Format format) {
  if (format == Format::csv) files[stem + ".csv"] = table.to_csv();
  else files[stem + ".json"] = table.to_json();
}

std::string ReportBundle::manifest() const {
  ordered_json m = ordered_json::object();
  ordered_json list = ordered_json::array();
  for (const auto &[name, bytes] : files) {
    ordered_json e = ordered_json::object();
    e["name"] = name;
    e["bytes"] = bytes.size();
    e["sha256"] = io::sha256_hex(bytes);
    list.push_back(std::move(e));
  }
  m["files"] = std::move(list);
  return m.dump(2) + "\n";
}

void ReportBundle::write(const std::filesystem::path &dir) const {
  std::filesystem::create_directories(dir);
  auto put = [&](const std::string &name, const std::string &bytes) {
    std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + (dir / name).string());
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  };
  for (const auto &[name, bytes] : files) put(name, bytes);
  put("manifest.json", manifest());
}

std::vector<config::ConfigFile> load_cases(const std::optional<std::string> &preset,
                                           const std::optional<std::string> &config_path) {
  if (preset && config_path) throw ConfigError("cli", "--preset", "use either --preset or --config, not both");
  std::vector<config::ConfigFile> cases;
  if (preset) {
    for (const auto &text : config::find_preset(*preset).cases) cases.push_back(config::ConfigFile::parse(text));
  } else if (config_path) {
    std::ifstream f(*config_path, std::ios::binary);
    if (!f) throw ConfigError("cli", "--config", "cannot read '" + *config_path + "'");
    std::stringstream buf;
    buf << f.rdbuf();
    cases.push_back(config::ConfigFile::parse(buf.str()));
  } else {
    throw ConfigError("cli", "--config", "give --config <path> or --preset <name>");
  }
  return cases;
}

// ---------------------------------------------------------------------------
// couplings

ReportBundle cmd_couplings(const Inputs &in) {
  ReportBundle b;
  Table summary{{"case", "ion_count", "spacing_m", "nu_1_rad_s", "nu_2_rad_s", "dBdz_T_per_m", "deviation_1_m",
                 "deviation_2_m", "gap_m", "eps_max", "eps_over_cutoff", "lamb_dicke_eff", "J_12_rad_s", "J_13_rad_s",
                 "J_23_rad_s", "ref_deviation_m", "rel_dev_deviation", "ref_gap_m", "rel_dev_gap", "ref_eps_max",
                 "rel_dev_eps_max", "ref_J_12_rad_s", "rel_dev_J_12", "ref_J_13_rad_s", "rel_dev_J_13"},
                {}};
  Table eq_table{{"case", "ion", "center_m", "position_m", "deviation_m", "residual_N"}, {}};
  Table mode_table{{"case", "mode", "frequency_rad_s", "spread_m"}, {}};
  Table matrix_table{{"case", "mode", "ion", "S"}, {}};
  Table eps_table{{"case", "mode", "ion", "eps"}, {}};
  Table j_table{{"case", "ion_i", "ion_j", "J_rad_s"}, {}};

  std::ostringstream con;
  for (std::size_t c = 0; c < in.cases.size(); ++c) {
    const auto &cfg = in.cases[c];
    const auto species = config::read_species(cfg);
    const auto traps = config::read_traps(cfg);
    const auto grad = config::read_gradient(cfg);
    const auto ref = config::read_reference(cfg);
    const auto eta = config::laser_lamb_dicke(cfg);
    const auto sol = crystal::solve_crystal(traps, species, grad);
    const std::size_t n = traps.size();
    const auto &J = sol.couplings;
    const auto caseno = i64(c + 1);

    const double dev1 = sol.equilibrium.deviations[0];
    const Cell dev2 = n > 1 ? Cell(sol.equilibrium.deviations[1]) : Cell();
    const Cell gap = n > 1 ? Cell(sol.equilibrium.gaps[0]) : Cell();
    const Cell j12 = n > 1 ? Cell(J(0, 1)) : Cell();
    const Cell j13 = n > 2 ? Cell(J(0, 2)) : Cell();
    const Cell j23 = n > 2 ? Cell(J(1, 2)) : Cell();
    const Cell ld = eta ? Cell(crystal::effective_lamb_dicke(*eta, sol.epsilon.eps_max).value) : Cell();

    summary.rows.push_back({caseno, i64(n), n > 1 ? Cell(traps.centers[1] - traps.centers[0]) : Cell(),
                            traps.frequencies[0], n > 1 ? Cell(traps.frequencies[1]) : Cell(), grad.dBdz, dev1, dev2, gap,
                            sol.epsilon.eps_max, sol.epsilon.exceeds_cutoff(), ld, j12, j13, j23, opt(ref.deviation),
                            rel_dev(dev1, ref.deviation), opt(ref.gap),
                            n > 1 ? rel_dev(sol.equilibrium.gaps[0], ref.gap) : Cell(), opt(ref.eps_max),
                            rel_dev(sol.epsilon.eps_max, ref.eps_max), opt(ref.j12),
                            n > 1 ? rel_dev(J(0, 1), ref.j12) : Cell(), opt(ref.j13),
                            n > 2 ? rel_dev(J(0, 2), ref.j13) : Cell()});

    for (std::size_t m = 0; m < n; ++m)
      eq_table.rows.push_back({caseno, i64(m + 1), traps.centers[m], sol.equilibrium.positions[m],
                               sol.equilibrium.deviations[m], sol.equilibrium.residual});
    for (std::size_t k = 0; k < n; ++k) {
      mode_table.rows.push_back({caseno, i64(k + 1), sol.modes.frequencies[k], sol.modes.spreads[k]});
      for (std::size_t m = 0; m < n; ++m) {
        const auto r = static_cast<Eigen::Index>(k);
        const auto col = static_cast<Eigen::Index>(m);
        matrix_table.rows.push_back({caseno, i64(k + 1), i64(m + 1), sol.modes.mode_matrix(r, col)});
        eps_table.rows.push_back({caseno, i64(k + 1), i64(m + 1), sol.epsilon.eps(r, col)});
      }
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) j_table.rows.push_back({caseno, i64(i + 1), i64(j + 1), J(i, j)});

    con << "case " << c + 1 << ": N=" << n << "  Delta_1=" << sci(dev1 / constants::micrometre, 5) << " um";
    if (n > 1) con << "  h=" << sci(sol.equilibrium.gaps[0] / constants::micrometre, 6) << " um";
    con << "  eps_max=" << sci(sol.epsilon.eps_max, 5);
    if (n > 1) con << "  J_12=" << sci(J(0, 1) / constants::kilo_rad_s, 5) << " krad/s";
    if (n > 2) con << "  J_13=" << sci(J(0, 2) / constants::kilo_rad_s, 5) << " krad/s";
    if (ref.j12 && n > 1) con << "  (J_12 vs reference " << pct((J(0, 1) - *ref.j12) / *ref.j12) << ")";
    if (sol.epsilon.exceeds_cutoff()) con << "  [eps above " << crystal::kEpsilonCutoff << "]";
    con << "\n";
  }
  b.add("summary", summary, in.format);
  b.add("equilibrium", eq_table, in.format);
  b.add("modes", mode_table, in.format);
  b.add("mode_matrix", matrix_table, in.format);
  b.add("epsilon", eps_table, in.format);
  b.add("couplings", j_table, in.format);
  b.console = con.str();
  return b;
}

// ---------------------------------------------------------------------------
// emission

ReportBundle cmd_emission(const Inputs &in) {
  if (in.cases.size() != 1) throw ConfigError("cli", "--config", "emission takes exactly one configuration");
  const auto grid = config::read_sweep(in.cases.front());
  const auto rows = cavity::fig2_sweep(grid.omega_laser, grid.g_cav, grid.kappas, grid.deltas);

  Table sweep{{"kappa_rad_s", "delta_rad_s", "tau_star_s", "p_single", "p_pair"}, {}};
  for (const auto &r : rows) sweep.rows.push_back({r.kappa, r.delta, r.tau_star, r.p_single, r.p_pair});

  const double kappa_summary =
      grid.summary_kappa.value_or(*std::max_element(grid.kappas.begin(), grid.kappas.end()));
  Table summary{{"delta_rad_s", "omega_eff_rad_s", "kappa_rad_s", "tau_star_s", "p_single", "p_pair",
                 "min_p_pair_on_grid"},
                {}};
  std::ostringstream con;
  for (double delta : grid.deltas) {
    const double w = cavity::effective_rabi({grid.omega_laser, grid.g_cav, delta});
    const double tau = cavity::optimal_emission_time(w, kappa_summary);
    const double p = cavity::success_probability(w, kappa_summary, tau);
    double pmin = 1.0;
    for (const auto &r : rows)
      if (r.delta == delta) pmin = std::min(pmin, r.p_pair);
    summary.rows.push_back({delta, w, kappa_summary, tau, p, p * p, pmin});
    con << "delta=" << sci(delta) << " rad/s  omega_eff=" << sci(w) << " rad/s  at kappa=" << sci(kappa_summary)
        << ": tau*=" << sci(tau) << " s  P_pair=" << sci(p * p) << "  min P_pair on grid=" << sci(pmin) << "\n";
  }
  ReportBundle b;
  b.add("sweep", sweep, in.format);
  b.add("summary", summary, in.format);
  b.console = con.str();
  return b;
}

// ---------------------------------------------------------------------------
// gates

namespace {

crystal::CouplingMatrix gate_couplings(const config::ConfigFile &cfg, std::string &source) {
  if (cfg.has_section("traps")) {
    source = "configured crystal";
    const auto sol =
        crystal::solve_crystal(config::read_traps(cfg), config::read_species(cfg), config::read_gradient(cfg));
    return sol.couplings;
  }
  source = "default two-ion crystal (d = 6 um, nu = 5.55e6 rad/s, dB/dz = 550 T/m)";
  const auto sol = crystal::solve_crystal(crystal::TrapArray::uniform({5.55e6, 5.55e6}, 6e-6),
                                          crystal::IonSpecies::ytterbium171(), {550.0, 0.0});
  return sol.couplings;
}

}  // namespace

ReportBundle cmd_gates(const Inputs &in) {
  if (in.cases.size() != 1) throw ConfigError("cli", "--config", "gates takes exactly one configuration");
  const auto &cfg = in.cases.front();
  gates::Polarity polarity = gates::Polarity::eq8;
  if (const auto conv = cfg.string("protocol", "convention")) {
    try {
      polarity = gates::parse_polarity(*conv);
    } catch (const DomainError &) {
      throw ConfigError("protocol", "convention", "expected eq8 or verbatim");
    }
  }
  std::string source;
  const crystal::CouplingMatrix J = gate_couplings(cfg, source);
  const std::size_t n = J.size();
  if (n < 2 || n > gates::kMaxIons) throw ConfigError("traps", "count", "gate checks need 2..6 ions");

  ReportBundle b;
  Table checks{{"check", "fidelity", "deficit", "threshold", "pass"}, {}};
  auto check = [&](const std::string &name, double f, double threshold) {
    checks.rows.push_back({name, f, 1.0 - f, threshold, (1.0 - f) <= threshold});
  };

  const auto verbatim = gates::cnot_product(gates::Polarity::verbatim);
  const auto eq8 = gates::cnot_product(gates::Polarity::eq8);
  const auto cx_g = gates::controlled_x(2, 0, 1, gates::ControlLevel::g);
  const auto cx_e = gates::controlled_x(2, 0, 1, gates::ControlLevel::e);
  check("verbatim_product_vs_cx_active_g", gates::gate_fidelity(verbatim, cx_g), 1e-12);
  check("eq8_product_vs_cx_active_e", gates::gate_fidelity(eq8, cx_e), 1e-12);

  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t t = 0; t < n; ++t) {
      if (c == t) continue;
      const auto seq = gates::cnot_sequence(J, c, t, polarity);
      const auto u = gates::sequence_unitary(seq, J);
      const auto ideal = gates::controlled_x(n, c, t, gates::active_level(polarity));
      check("compiled_cnot_" + std::to_string(c + 1) + "_" + std::to_string(t + 1), gates::gate_fidelity(u, ideal),
            1e-9);
      if (c == 0) b.files["cnot_" + std::to_string(c + 1) + "_" + std::to_string(t + 1) + ".seq"] = gates::serialize(seq);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto seq = gates::compile_refocused_zz(J, i, j, kPi / 4.0);
      const auto u = gates::sequence_unitary(seq, J);
      check("refocused_zz_" + std::to_string(i + 1) + "_" + std::to_string(j + 1),
            gates::gate_fidelity(u, gates::zz_gate(n, i, j, kPi / 4.0)), 1e-9);
    }
  }

  Table matrix{{"row", "col", "re", "im"}, {}};
  for (Eigen::Index r = 0; r < 4; ++r)
    for (Eigen::Index c = 0; c < 4; ++c)
      matrix.rows.push_back({static_cast<std::int64_t>(r), static_cast<std::int64_t>(c),
                             verbatim(r, c).real() == 0.0 ? 0.0 : verbatim(r, c).real(),
                             verbatim(r, c).imag() == 0.0 ? 0.0 : verbatim(r, c).imag()});

  std::ostringstream rep;
  rep << kPolarityNote << "\n";
  rep << "basis: |e> = 0, |g> = 1, ion 1 most significant\n";
  rep << "couplings: " << source << "\n";
  rep << "convention: " << gates::polarity_name(polarity) << "\n";
  rep << "verbatim product (rows ee, eg, ge, gg; entries rounded to 1e-12):\n";
  for (Eigen::Index r = 0; r < 4; ++r) {
    rep << " ";
    for (Eigen::Index c = 0; c < 4; ++c) {
      const auto z = verbatim(r, c);
      const double re = std::abs(z.real()) < 1e-12 ? 0.0 : z.real();
      const double im = std::abs(z.imag()) < 1e-12 ? 0.0 : z.imag();
      rep << " (" << sci(re, 12) << (im < 0 ? "" : "+") << sci(im, 12) << "i)";
    }
    rep << "\n";
  }
  bool all = true;
  for (const auto &row : checks.rows) {
    const bool pass = std::get<bool>(row[4]);
    all = all && pass;
    rep << (pass ? "PASS " : "FAIL ") << std::get<std::string>(row[0]) << " fidelity=" << sci(std::get<double>(row[1]), 17)
        << " deficit=" << sci(std::get<double>(row[2]), 3) << "\n";
  }
  rep << (all ? "all gate checks passed\n" : "some gate checks FAILED\n");

  b.add("checks", checks, in.format);
  b.add("verbatim_product", matrix, in.format);
  b.files["gates_report.txt"] = rep.str();
  b.console = rep.str();
  return b;
}

// ---------------------------------------------------------------------------
// run

ReportBundle cmd_run(const Inputs &in) {
  if (in.cases.size() != 1) throw ConfigError("cli", "--config", "run takes exactly one configuration");
  const auto &cfg = in.cases.front();
  protocol::ExperimentConfig exp = config::read_experiment(cfg);
  if (in.seed) exp.seed = *in.seed;
  const auto trials = cfg.unsigned_integer("run", "trials").value_or(100000);
  if (trials < 1) throw ConfigError("run", "trials", "must be >= 1");
  unsigned threads = static_cast<unsigned>(cfg.unsigned_integer("run", "threads").value_or(1));
  if (in.threads) threads = *in.threads;
  if (threads < 1) throw ConfigError("run", "threads", "must be >= 1");

  const auto result = protocol::run_pipeline(exp);
  const auto report = protocol::sample_run(exp, result.table, result.emission, result.timing, trials, threads);

  ReportBundle b;
  Table table{{"ions", "photon_state", "probability"}, {}};
  for (const auto &row : result.table.rows) table.rows.push_back({row.ions, row.expression(), row.probability});

  Table counts{{"ions", "count", "frequency", "expected", "within_3sigma"}, {}};
  for (const auto &row : result.table.rows) {
    const bool outside = std::find(report.outside_3sigma.begin(), report.outside_3sigma.end(), row.ions) !=
                         report.outside_3sigma.end();
    counts.rows.push_back({row.ions, static_cast<std::int64_t>(report.counts.at(row.ions)),
                           report.frequencies.at(row.ions), row.probability, !outside});
  }

  if (in.format == Format::csv) {
    b.add("outcome_table", table, Format::csv);
    b.add("counts", counts, Format::csv);
    Table kv{{"key", "value"}, {}};
    kv.rows.push_back({std::string("ion_count"), static_cast<std::int64_t>(report.ion_count)});
    kv.rows.push_back({std::string("seed"), std::to_string(report.seed)});
    kv.rows.push_back({std::string("trials"), static_cast<std::int64_t>(report.trials)});
    for (std::size_t m = 0; m < report.emission_probabilities.size(); ++m)
      kv.rows.push_back({"p_emit_" + std::to_string(m + 1), report.emission_probabilities[m]});
    kv.rows.push_back({std::string("p_emit_total"), report.total_emission_probability});
    kv.rows.push_back({std::string("p_accept"), report.acceptance_probability});
    kv.rows.push_back({std::string("successes"), static_cast<std::int64_t>(report.successes)});
    kv.rows.push_back({std::string("rate_any_state"), report.rate.any_state});
    kv.rows.push_back({std::string("rate_specific_state"), report.rate.specific_state});
    kv.rows.push_back({std::string("chi_square"), report.chi_square});
    kv.rows.push_back({std::string("chi_square_critical_0.999"), report.chi_square_critical});
    kv.rows.push_back({std::string("chi_square_pass"), report.chi_square_pass});
    kv.rows.push_back({std::string("t0_s"), report.timing.t0});
    kv.rows.push_back({std::string("t0_bare_s"), report.timing.bare_cnot});
    kv.rows.push_back({std::string("echo_overhead_factor"), report.timing.overhead_factor});
    kv.rows.push_back({std::string("t1_s"), report.timing.t1});
    kv.rows.push_back({std::string("total_time_s"), report.timing.total});
    for (const auto &note : report.notes) kv.rows.push_back({std::string("note"), note});
    b.add("run_report", kv, Format::csv);
  } else {
    b.add("outcome_table", table, Format::json);
    ordered_json j = ordered_json::object();
    j["ion_count"] = report.ion_count;
    j["seed"] = report.seed;
    j["trials"] = report.trials;
    j["emission_probabilities"] = report.emission_probabilities;
    j["total_emission_probability"] = report.total_emission_probability;
    j["acceptance_probability"] = report.acceptance_probability;
    j["successes"] = report.successes;
    ordered_json cj = ordered_json::object();
    for (const auto &row : result.table.rows) cj[row.ions] = report.counts.at(row.ions);
    j["counts"] = cj;
    ordered_json fj = ordered_json::object();
    for (const auto &row : result.table.rows) fj[row.ions] = report.frequencies.at(row.ions);
    j["frequencies"] = fj;
    j["outside_3sigma"] = report.outside_3sigma;
    j["chi_square"] = report.chi_square;
    j["chi_square_critical_0999"] = report.chi_square_critical;
    j["chi_square_pass"] = report.chi_square_pass;
    j["rate"] = {{"any_state", report.rate.any_state}, {"specific_state", report.rate.specific_state}};
    j["timing"] = {{"t0_s", report.timing.t0},
                   {"t0_bare_s", report.timing.bare_cnot},
                   {"echo_overhead_factor", report.timing.overhead_factor},
                   {"t0_derived", report.timing.t0_derived},
                   {"t1_s", report.timing.t1},
                   {"total_s", report.timing.total}};
    j["notes"] = report.notes;
    b.files["run_report.json"] = j.dump(2) + "\n";
  }

  std::ostringstream con;
  con << "N=" << exp.ion_count << " convention=" << gates::polarity_name(exp.polarity) << " seed=" << exp.seed
      << " trials=" << trials << "\n";
  for (std::size_t m = 0; m < report.emission_probabilities.size(); ++m)
    con << "  P_" << m + 1 << " = " << sci(report.emission_probabilities[m], 8) << "\n";
  con << "  successes " << report.successes << " / " << trials << "\n";
  for (const auto &row : result.table.rows)
    con << "  |" << row.ions << ">  " << row.expression() << "  p=" << sci(row.probability, 8)
        << "  count=" << report.counts.at(row.ions) << "\n";
  con << "  chi2=" << sci(report.chi_square) << " (critical " << sci(report.chi_square_critical) << ") "
      << (report.chi_square_pass ? "pass" : "FAIL") << "\n";
  con << "  time estimate " << sci(report.timing.total) << " s (t0=" << sci(report.timing.t0)
      << " s, t1=" << sci(report.timing.t1) << " s)\n";
  b.console = con.str();
  return b;
}

// ---------------------------------------------------------------------------

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"ionphoton: trapped-ion entangled photon source simulator"};
  app.set_version_flag("--version", "ionphoton 1.0.0");
  bool explain = false;
  app.add_flag("--explain-units", explain, "Describe the unit conventions and exit");

  struct Opts {
    std::optional<std::string> config, preset, out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::string format = "csv";
  };
  Opts o;
  std::vector<std::pair<std::string, CLI::App *>> subs;
  for (const char *name : {"couplings", "emission", "gates", "run"}) {
    CLI::App *s = app.add_subcommand(name);
    s->add_option("--config", o.config, "Configuration file");
    s->add_option("--preset", o.preset, "Built-in configuration");
    s->add_option("--out", o.out, "Output directory");
    s->add_option("--seed", o.seed, "Override the RNG seed");
    s->add_option("--threads", o.threads, "Worker threads for sampling");
    s->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    subs.emplace_back(name, s);
  }
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion &e) {
    out << "ionphoton 1.0.0\n";
    return kOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  if (explain) {
    out << config::explain_units();
    return kOk;
  }
  std::string which;
  for (const auto &[name, s] : subs)
    if (s->parsed()) which = name;
  if (which.empty()) {
    out << app.help();
    out << "\npresets:\n";
    for (const auto &p : config::presets()) out << "  " << p.name << "  " << p.description << "\n";
    return kOk;
  }

  try {
    Inputs in;
    in.cases = load_cases(o.preset, o.config);
    in.seed = o.seed;
    in.threads = o.threads;
    in.format = o.format == "json" ? Format::json : Format::csv;
    ReportBundle b;
    if (which == "couplings") b = cmd_couplings(in);
    else if (which == "emission") b = cmd_emission(in);
    else if (which == "gates") b = cmd_gates(in);
    else b = cmd_run(in);
    out << b.console;
    if (o.out) {
      b.write(*o.out);
      out << "wrote " << b.files.size() + 1 << " files to " << *o.out << "\n";
    }
    return kOk;
  } catch (const ConfigError &e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError &e) {
    err << "invalid input: " << e.what() << "\n";
    return kConfigError;
  } catch (const SolverError &e) {
    err << "solver failure: " << e.what() << "\n";
    return kNumericError;
  } catch (const NumericError &e) {
    err << "numeric failure: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return kNumericError;
  }
}

}  // namespace ionphoton::cli
