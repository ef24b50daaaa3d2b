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

#include "dlmg/spin_algebra.hpp"

using namespace dlmg;
using doctest::Approx;

namespace {

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

Complex expect(const PureState& psi, const SparseC& op) {
  return psi.amplitudes.dot(op * psi.amplitudes);
}

}  // namespace

TEST_CASE("commutation relations and Casimir") {
  for (int n : {1, 2, 5, 12, 31}) {
    const auto ops = build_spin_operators(n);
    const CMatrix x = ops.jx, y = ops.jy, z = ops.jz;
    CHECK(max_abs(x * y - y * x - kI * z) < 1e-12);
    CHECK(max_abs(y * z - z * y - kI * x) < 1e-12);
    CHECK(max_abs(z * x - x * z - kI * y) < 1e-12);
    const CMatrix casimir = x * x + y * y + z * z;
    const double j = n / 2.0;
    CHECK(max_abs(casimir - j * (j + 1) * CMatrix::Identity(n + 1, n + 1)) < 1e-10);
    CHECK(max_abs(CMatrix(ops.jplus).adjoint() - CMatrix(ops.jminus)) < 1e-14);
  }
}

TEST_CASE("single spin raising operator") {
  const auto ops = build_spin_operators(1);
  CMatrix expected(2, 2);
  expected << 0.0, 1.0, 0.0, 0.0;
  CHECK(max_abs(CMatrix(ops.jplus) - expected) < 1e-15);
  CHECK(ops.m_of(0) == 0.5);
  CHECK(std::abs(CMatrix(ops.jz)(0, 0) - 0.5) < 1e-15);
}

TEST_CASE("Dicke basis ladder elements") {
  const int n = 8;
  const auto ops = build_spin_operators(n);
  const CMatrix jp = ops.jplus;
  for (int k = 1; k <= n; ++k) {
    const double m = ops.m_of(k);
    CHECK(std::abs(jp(k - 1, k) - std::sqrt(ops.j * (ops.j + 1) - m * (m + 1))) < 1e-13);
  }
}

TEST_CASE("coherent spin states") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int n : {1, 4, 20, 101}) {
    const auto ops = build_spin_operators(n);
    for (int trial = 0; trial < 5; ++trial) {
      const double theta = std::acos(2.0 * uni(rng) - 1.0);
      const double phi = 2.0 * std::numbers::pi * uni(rng);
      const auto psi = coherent_spin_state(theta, phi, n);
      CHECK(psi.amplitudes.norm() == Approx(1.0).epsilon(1e-12));
      const double j = n / 2.0;
      CHECK(expect(psi, ops.jx).real() == Approx(j * std::sin(theta) * std::cos(phi)).epsilon(1e-9));
      CHECK(expect(psi, ops.jy).real() == Approx(j * std::sin(theta) * std::sin(phi)).epsilon(1e-9));
      CHECK(expect(psi, ops.jz).real() == Approx(j * std::cos(theta)).epsilon(1e-9));
    }
  }
  const auto pole = coherent_spin_state(0.0, 0.3, 6);
  CHECK(std::abs(pole.amplitudes[0]) == Approx(1.0));
}

TEST_CASE("Dicke states") {
  const auto ops = build_spin_operators(6);
  for (int k = 0; k <= 6; ++k) {
    const auto psi = dicke_state(k, 6);
    CHECK(expect(psi, ops.jz).real() == Approx(3.0 - k));
  }
  CHECK_THROWS_AS(dicke_state(7, 6), DomainError);
}

TEST_CASE("LMG Hamiltonian") {
  const auto ops = build_spin_operators(10);
  const CMatrix h = build_lmg_hamiltonian(ops, 0.3, 1.0, 0.0);
  CHECK(max_abs(h - h.adjoint()) < 1e-14);
  const CMatrix expected = -0.6 * CMatrix(ops.jz) - 0.2 * CMatrix(ops.jx) * CMatrix(ops.jx);
  CHECK(max_abs(h - expected) < 1e-12);
  CHECK_THROWS_AS(build_lmg_hamiltonian(ops, 0.3, 1.0, 1.5), DomainError);
}

TEST_CASE("size limits") {
  CHECK_THROWS_AS(build_spin_operators(0), DomainError);
  CHECK_THROWS_AS(build_spin_operators(5000), DomainError);
  CHECK_NOTHROW(build_spin_operators(30, 30));
}
