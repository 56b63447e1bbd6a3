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

#include <doctest.h>

#include <array>
#include <cmath>
#include <complex>

#include "ionphoton/cavity.hpp"
#include "ionphoton/error.hpp"
#include "testing.hpp"

using namespace ionphoton;
using cavity::cplx;
using testing::approx;

namespace {

// Classic RK4 on one decay sector: a' = -i W b, b' = -i W a - kappa b.
std::array<cplx, 2> rk4_sector(double w, double kappa, std::array<cplx, 2> y, double t, int steps) {
  const cplx I(0.0, 1.0);
  auto rhs = [&](const std::array<cplx, 2> &v) {
    return std::array<cplx, 2>{-I * w * v[1], -I * w * v[0] - kappa * v[1]};
  };
  const double h = t / steps;
  for (int s = 0; s < steps; ++s) {
    const auto k1 = rhs(y);
    const auto k2 = rhs({y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]});
    const auto k3 = rhs({y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]});
    const auto k4 = rhs({y[0] + h * k3[0], y[1] + h * k3[1]});
    for (int c = 0; c < 2; ++c) y[c] += h / 6.0 * (k1[c] + 2.0 * k2[c] + 2.0 * k3[c] + k4[c]);
  }
  return y;
}

int steps_for(double w, double kappa, double t) {
  const double rate = std::max(w, kappa);
  return std::max(2000, static_cast<int>(std::ceil(t * rate * 400.0)));
}

}  // namespace

TEST_CASE("effective Rabi rate and validation") {
  CHECK(cavity::effective_rabi({10e6, 138e6, 0.1e6}) == approx(1.38e10, 1e-15));
  CHECK_THROWS_AS(cavity::effective_rabi({10e6, 138e6, 0.0}), DomainError);
  CHECK_THROWS_AS(cavity::effective_rabi({-1.0, 138e6, 1.0}), DomainError);
  cavity::CavitySetup bad{{1, 1, 1}, {1, 1, 1}, -1.0, std::nullopt};
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(cavity::optimal_emission_time(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(cavity::success_probability(1.0, 1.0, -1.0), DomainError);
}

TEST_CASE("mismatched channels fall back to the mean and flag it") {
  cavity::CavitySetup s{{10e6, 138e6, 0.1e6}, {10e6, 140e6, 0.1e6}, 1e8, std::nullopt};
  const auto r = cavity::resolve_rabi(s);
  CHECK(r.mismatch);
  CHECK(r.omega_eff == approx(0.5 * (1.38e10 + 1.40e10), 1e-15));
  CHECK(cavity::emit(s).rabi_mismatch);
  s.channel_e = s.channel_g;
  CHECK_FALSE(cavity::resolve_rabi(s).mismatch);
}

TEST_CASE("closed-form propagation matches RK4 integration") {
  const double w = 1.0e9;
  for (double ratio : {0.0, 0.1, 1.0, 2.0, 3.0}) {
    const double kappa = ratio * w;
    for (double t : {1e-10, 7e-10, 2.3e-9, 6e-9}) {
      const auto ref = rk4_sector(w, kappa, {cplx(1.0), cplx(0.0)}, t, steps_for(w, kappa, t));
      const auto out = cavity::evolve_conditional(w, kappa, cavity::FourLevelAmplitudes::initial(), t);
      using F = cavity::FourLevelAmplitudes;
      const double s = std::sqrt(2.0);
      CHECK(std::abs(out.amp[F::kAuxG] * s - ref[0]) < 1e-8 * std::max(1.0, std::abs(ref[0])));
      CHECK(std::abs(out.amp[F::kPhotonG] * s - ref[1]) < 1e-8 * std::max(1e-3, std::abs(ref[1])));
      CHECK(out.amp[F::kAuxE] == out.amp[F::kAuxG]);
      CHECK(out.amp[F::kPhotonE] == out.amp[F::kPhotonG]);
      const double p_ref = std::norm(ref[1]);
      if (p_ref > 1e-6) CHECK(cavity::success_probability(w, kappa, t) == approx(p_ref, 1e-8));
    }
  }
}

TEST_CASE("critical damping is continuous with its neighbours") {
  const double w = 1e9, t = 1.7e-9;
  const double pc = cavity::success_probability(w, 2.0 * w, t);
  CHECK(cavity::success_probability(w, 2.0 * w * (1 + 1e-7), t) == approx(pc, 1e-6));
  CHECK(cavity::success_probability(w, 2.0 * w * (1 - 1e-7), t) == approx(pc, 1e-6));
  CHECK(cavity::optimal_emission_time(w, 2.0 * w) == approx(1e-9, 1e-15));
  CHECK(cavity::optimal_emission_time(w, 2.0 * w * (1 + 1e-9)) == approx(1e-9, 1e-6));
}

TEST_CASE("optimal emission time is the argmax of a dense scan") {
  const double w = 1.0e9;
  for (double ratio : {0.0, 0.1, 1.0, 3.0}) {
    const double kappa = ratio * w;
    const double tau = cavity::optimal_emission_time(w, kappa);
    // coarse scan over [0, 2 tau] (the lossless curve peaks again at 3 tau), then ternary refinement
    const int n = 100000;
    double best_t = 0.0, best_p = -1.0;
    for (int k = 1; k <= n; ++k) {
      const double t = 2.0 * tau * k / n;
      const double p = cavity::success_probability(w, kappa, t);
      if (p > best_p) best_p = p, best_t = t;
    }
    double lo = best_t - 2.0 * tau / n, hi = best_t + 2.0 * tau / n;
    for (int it = 0; it < 200; ++it) {
      const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      (cavity::success_probability(w, kappa, m1) < cavity::success_probability(w, kappa, m2) ? lo : hi) =
          (cavity::success_probability(w, kappa, m1) < cavity::success_probability(w, kappa, m2) ? m1 : m2);
    }
    CHECK(0.5 * (lo + hi) == approx(tau, 1e-6));
  }
}

TEST_CASE("lossless cavity gives certain emission") {
  for (double w : {1e6, 1.38e10, 3.3e12}) {
    const double tau = cavity::optimal_emission_time(w, 0.0);
    CHECK(tau == approx(M_PI / (2.0 * w), 1e-15));
    CHECK(cavity::success_probability(w, 0.0, tau) == 1.0);
  }
}

TEST_CASE("norm never grows and is conserved without loss") {
  const double w = 2e9;
  for (double kappa : {0.0, 1e8, 1e9, 1e10}) {
    double last = 1.0;
    for (int k = 1; k <= 200; ++k) {
      const auto s = cavity::evolve_conditional(w, kappa, cavity::FourLevelAmplitudes::initial(), k * 1e-11);
      const double n2 = s.norm2();
      if (kappa == 0.0) CHECK(n2 == approx(1.0, 1e-13));
      else CHECK(n2 <= last + 1e-15);
      last = n2;
    }
  }
}

TEST_CASE("sectors evolve independently") {
  cavity::FourLevelAmplitudes s{};
  using F = cavity::FourLevelAmplitudes;
  s.amp[F::kAuxG] = 1.0;
  const auto out = cavity::evolve_conditional(1e9, 3e8, s, 1.3e-9);
  CHECK(out.amp[F::kAuxE] == cplx(0.0));
  CHECK(out.amp[F::kPhotonE] == cplx(0.0));
  CHECK(std::abs(out.amp[F::kPhotonG]) > 0.1);
}

TEST_CASE("10 um cavity reference point") {
  const double w = cavity::effective_rabi({10e6, 138e6, 0.1e6});
  const double tau = cavity::optimal_emission_time(w, 960e6);
  const double p = cavity::success_probability(w, 960e6, tau);
  CHECK(tau == approx(1.113722245e-10, 1e-9));
  CHECK(p == approx(0.898599952218, 1e-11));
}

TEST_CASE("emit returns the conditional photon state") {
  cavity::CavitySetup s{{10e6, 138e6, 0.1e6}, {10e6, 138e6, 0.1e6}, 960e6, std::nullopt};
  const auto r = cavity::emit(s);
  CHECK(r.p_success == approx(cavity::success_probability(1.38e10, 960e6, r.tau_star), 1e-12));
  CHECK(std::abs(r.conditional_state[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(r.conditional_state[1] - 1.0 / std::sqrt(2.0)) < 1e-15);
  const auto z = cavity::emit(s, 0.0);
  CHECK(z.p_success == 0.0);
  CHECK(std::abs(z.conditional_state[0] - 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("cavity scaling from the 10 um anchor") {
  const auto a = cavity::scale_cavity(10e-6);
  CHECK(a.g_cav == approx(138.4e6, 1e-15));
  CHECK(a.kappa == approx(960e6, 1e-15));
  const auto b = cavity::scale_cavity(20e-6);
  CHECK(b.g_cav == approx(138.4e6 * std::pow(2.0, -0.75), 1e-14));
  CHECK(b.kappa == approx(480e6, 1e-14));
  CHECK_THROWS_AS(cavity::scale_cavity(0.0), DomainError);
}

TEST_CASE("sweep is ordered in detuning and sorted in kappa") {
  std::vector<double> kappas;
  for (int k = 100; k >= 0; --k) kappas.push_back(1e7 * k);
  const std::vector<double> deltas = {0.1e6, 0.25e6, 0.5e6, 1.0e6};
  const auto rows = cavity::fig2_sweep(10e6, 138e6, kappas, deltas);
  REQUIRE(rows.size() == 404);
  for (std::size_t d = 0; d < 4; ++d)
    for (std::size_t k = 0; k < 101; ++k) {
      const auto &r = rows[d * 101 + k];
      CHECK(r.delta == deltas[d]);
      CHECK(r.kappa == 1e7 * static_cast<double>(k));
      CHECK(r.p_pair == approx(r.p_single * r.p_single, 1e-15));
      if (k > 0) CHECK(r.p_single < rows[d * 101 + k - 1].p_single);
      if (k > 0 && d > 0) CHECK(r.p_pair < rows[(d - 1) * 101 + k].p_pair);
      if (k == 0) CHECK(r.p_pair == 1.0);
    }
  const auto csv = cavity::sweep_csv(rows);
  CHECK(csv.rfind("kappa_rad_s,delta_rad_s,tau_star_s,p_single,p_pair\n", 0) == 0);
}
