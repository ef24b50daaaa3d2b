// Copyright 2026 The dlmg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dlmg/entanglement.hpp"
#include "dlmg/fluctuations.hpp"

using namespace dlmg;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

DensityMatrix bell_state() {
  CVector psi = CVector::Zero(3);
  psi[0] = psi[2] = 1.0 / std::sqrt(2.0);
  return DensityMatrix::from_pure(PureState{psi, 2});
}

DensityMatrix random_state(int n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  CMatrix a(n + 1, n + 1);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) a(i, j) = Complex(g(rng), g(rng));
  CMatrix rho = a * a.adjoint();
  return DensityMatrix{rho / rho.trace(), n};
}

// Maximum of C_phi by a uniform scan followed by golden-section refinement
// of the best bracket.
double scanned_max(const MomentSet& m, int points) {
  double best = -1e300;
  int best_i = 0;
  for (int i = 0; i < points; ++i) {
    const double v = c_phi(m, kPi * i / points);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  const double step = kPi / points;
  double lo = kPi * best_i / points - step, hi = lo + 2.0 * step;
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
  double f1 = c_phi(m, x1), f2 = c_phi(m, x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + r * (hi - lo);
      f2 = c_phi(m, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - r * (hi - lo);
      f1 = c_phi(m, x1);
    }
  }
  return std::max({best, f1, f2});
}

}  // namespace

TEST_CASE("polarized state is separable") {
  for (int n : {2, 7, 40}) {
    const auto ops = build_spin_operators(n);
    const auto m = expectations(DensityMatrix::from_pure(dicke_state(0, n)), ops);
    for (double phi : {0.0, 0.4, 1.9}) CHECK(std::abs(c_phi(m, phi)) < 1e-12);
    const auto r = c_r(m);
    CHECK(r.c_r == 0.0);
  }
}

TEST_CASE("coherent spin states give zero for every angle") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n : {2, 10, 20, 50}) {
    const auto ops = build_spin_operators(n);
    for (int t = 0; t < 100; ++t) {
      const double theta = std::acos(2.0 * u(rng) - 1.0), phi = 2.0 * kPi * u(rng);
      const auto m = expectations(DensityMatrix::from_pure(coherent_spin_state(theta, phi, n)), ops);
      const auto r = c_r(m);
      CHECK(std::abs(r.c_r_raw) <= 1e-10);
      CHECK(std::abs(c_phi(m, kPi * u(rng))) <= 1e-10);
    }
  }
}

TEST_CASE("two-spin Bell state") {
  const auto ops = build_spin_operators(2);
  const auto m = expectations(bell_state(), ops);
  CHECK(c_phi(m, 0.0) == Approx(1.0).epsilon(1e-12));
  const auto r = c_r(m);
  CHECK(r.c_r == Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(std::sin(r.phi_star)) < 1e-8);
  CHECK(concurrence_oracle(bell_state(), 2) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("closed-form maximum equals a dense angle scan") {
  std::mt19937 rng(23);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 9;
    const auto ops = build_spin_operators(n);
    const auto m = expectations(random_state(n, rng), ops);
    const auto r = c_r(m);
    CHECK(std::abs(scanned_max(m, 10000) - r.c_r_raw) <= 1e-10);
    CHECK(std::abs(c_phi(m, r.phi_star) - r.c_r_raw) <= 1e-12);
    CHECK(r.phi_star >= 0.0);
    CHECK(r.phi_star < kPi);
    CHECK(r.c_r == std::max(r.c_r_raw, 0.0));
  }
}

TEST_CASE("concurrence oracle basics") {
  CHECK(concurrence_oracle(DensityMatrix::from_pure(dicke_state(0, 2)), 2) < 1e-12);
  CHECK(concurrence_oracle(DensityMatrix::maximally_mixed(4), 4) < 1e-12);
  // W state of three spins: pairwise concurrence 2/3.
  CHECK(concurrence_oracle(DensityMatrix::from_pure(dicke_state(2, 3)), 3) == Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(concurrence_oracle(DensityMatrix::maximally_mixed(7), 7), DomainError);
  CHECK_THROWS_AS(concurrence_oracle(DensityMatrix::maximally_mixed(3), 4), DomainError);
}

TEST_CASE("criterion soundness on model steady states") {
  for (int n : {2, 3, 4}) {
    const auto ops = build_spin_operators(n);
    for (double h : uniform_grid(-0.6, 1.4, 41)) {
      const auto ss = steady_state(build_liouvillian(make_effective(h, 1.0, 0.01, 0.2, n), n));
      const auto r = c_r(expectations(ss.rho, ops));
      const double conc = concurrence_oracle(ss.rho, n);
      if (r.c_r > 1e-6) CHECK(conc > 0.0);
      CHECK((n - 1) * conc >= r.c_r - 1e-8);
    }
  }
}

TEST_CASE("four spins near the upper critical field") {
  const auto ops = build_spin_operators(4);
  const auto ss = steady_state(build_liouvillian(make_effective(0.98, 1.0, 0.01, 0.2, 4), 4));
  const auto r = c_r(expectations(ss.rho, ops));
  CHECK(r.c_r > 0.0);
  CHECK(3.0 * concurrence_oracle(ss.rho, 4) >= r.c_r - 1e-8);
}

TEST_CASE("deep broken phase is not detected as entangled") {
  const int n = 100;
  const auto liou = build_liouvillian(make_effective(0.5, 1.0, 0.01, 0.2, n), n);
  const auto r = c_r(expectations(steady_state(liou).rho, liou.ops));
  CHECK(r.c_r == 0.0);
  CHECK(r.c_r_raw < 0.0);
}

TEST_CASE("linearized entanglement peaks at the critical fields") {
  const auto cf = critical_fields(1.0, 0.2);
  auto lin_cr = [](double h) {
    const auto model = linearize(make_effective(h, 1.0, 0.01, 0.2, 1), stable_branch(h, 1.0, 0.2));
    return c_r(linearized_moments(steady_covariance(model), 1000000000)).c_r_raw;
  };
  for (double hc : {cf.h_minus, cf.h_plus}) {
    const double at = lin_cr(hc - 1e-4);
    CHECK(at > lin_cr(hc - 0.02));
    CHECK(at > lin_cr(hc + 0.02));
  }
}
