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
#include <random>

#include "dlmg/params.hpp"
#include "dlmg/semiclassical.hpp"

using namespace dlmg;
using doctest::Approx;

namespace {

const SteadyStateBranch* find(const std::vector<SteadyStateBranch>& v, BranchId id) {
  for (const auto& b : v)
    if (b.branch_id == id) return &b;
  return nullptr;
}

}  // namespace

TEST_CASE("broken branch values") {
  const auto fps = fixed_points(0.5, 1.0, 0.2);
  const auto* plus = find(fps, BranchId::kBrokenPlus);
  const auto* minus = find(fps, BranchId::kBrokenMinus);
  REQUIRE(plus);
  REQUIRE(minus);
  // Root of rhs = 0 on the sphere from a 30-digit Newton solve.
  const double x = 0.8586889206648273, y = 0.0867451965040312, z = 0.5051025721682190;
  CHECK(plus->state.x == Approx(x).epsilon(1e-12));
  CHECK(plus->state.y == Approx(y).epsilon(1e-12));
  CHECK(plus->state.z == Approx(z).epsilon(1e-12));
  CHECK(minus->state.x == Approx(-x).epsilon(1e-12));
  CHECK(minus->state.y == Approx(-y).epsilon(1e-12));
  CHECK(minus->state.z == Approx(z).epsilon(1e-12));
  for (const auto* b : {plus, minus}) {
    CHECK(rhs(b->state, 0.5, 1.0, 0.2).norm() <= 1e-10);
    CHECK(std::abs(b->state.norm() - 1.0) <= 1e-12);
    CHECK(b->stable);
  }
  // Z = 2h/(lambda + r), r = sqrt(lambda^2 - Gb^2), computed by hand.
  const double r = std::sqrt(1.0 - 0.04);
  CHECK(plus->state.z == Approx(1.0 / (1.0 + r)).epsilon(1e-13));
  CHECK(plus->state.y / plus->state.x == Approx(0.2 / (1.0 + r)).epsilon(1e-13));
}

TEST_CASE("pole eigenvalues match the closed form") {
  // At the pole the tangent Jacobian gives (mu + Gb)^2 = 4 h (lambda - h).
  for (double h : {-0.6, -0.1, 0.005, 1.1, 1.4}) {
    const auto fps = fixed_points(h, 1.0, 0.2);
    const auto* pole = find(fps, BranchId::kPole);
    REQUIRE(pole);
    const Complex disc = std::sqrt(Complex(4.0 * h * (1.0 - h), 0.0));
    const Complex mu1 = -0.2 + disc, mu2 = -0.2 - disc;
    const auto& ev = pole->jacobian_eigenvalues;
    const bool same = std::abs(ev[0] - mu1) + std::abs(ev[1] - mu2) < 1e-12 ||
                      std::abs(ev[0] - mu2) + std::abs(ev[1] - mu1) < 1e-12;
    CHECK(same);
    CHECK(pole->stable == (h < 0.0101021 || h > 0.9898979));
  }
}

TEST_CASE("stability changes at the critical fields") {
  const auto cf = critical_fields(1.0, 0.2);
  const auto bif = find_bifurcations(-0.6, 1.4, 201, 1.0, 0.2);
  REQUIRE(bif.size() == 2);
  CHECK(std::abs(bif[0].h - cf.h_minus) < 1e-9);
  CHECK(std::abs(bif[1].h - cf.h_plus) < 1e-9);
  CHECK(stable_branch(0.5, 1.0, 0.2).branch_id == BranchId::kBrokenPlus);
  CHECK(stable_branch(1.2, 1.0, 0.2).branch_id == BranchId::kPole);
  CHECK(stable_branch(-0.3, 1.0, 0.2).branch_id == BranchId::kPole);
}

TEST_CASE("equilibria across h are fixed points on the sphere") {
  for (double h = -0.6; h <= 1.4; h += 0.013) {
    for (const auto& b : all_equilibria(h, 1.0, 0.2)) {
      CHECK(rhs(b.state, h, 1.0, 0.2).norm() < 1e-10);
      CHECK(std::abs(b.state.norm() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("coexistence below the lower critical field") {
  const double h = 0.005;
  const auto all = all_equilibria(h, 1.0, 0.2);
  const auto* pole = find(all, BranchId::kPole);
  const auto* broken = find(all, BranchId::kBrokenPlus);
  const auto* saddle = find(all, BranchId::kSaddlePlus);
  REQUIRE(pole);
  REQUIRE(broken);
  REQUIRE(saddle);
  CHECK(pole->stable);
  CHECK(broken->stable);
  CHECK_FALSE(saddle->stable);
  CHECK(find(fixed_points(h, 1.0, 0.2), BranchId::kBrokenPlus) == nullptr);
}

TEST_CASE("dissipation-dominated regime has only the poles") {
  const auto fps = fixed_points(0.5, 1.0, 1.2);
  CHECK(fps.size() == 2);
  CHECK(count_stable(0.5, 1.0, 1.2) == 1);
}

TEST_CASE("tangent basis is right-handed and orthonormal") {
  std::mt19937 rng(1);
  std::normal_distribution<double> g;
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d n = Eigen::Vector3d(g(rng), g(rng), g(rng)).normalized();
    const auto [e1, e2] = tangent_basis(n);
    CHECK(std::abs(e1.norm() - 1.0) < 1e-14);
    CHECK(std::abs(e1.dot(n)) < 1e-14);
    CHECK((e1.cross(e2) - n).norm() < 1e-14);
  }
}

TEST_CASE("Jacobian agrees with finite differences") {
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const BlochState s{u(rng), u(rng), u(rng)};
    const double h = u(rng), gb = 0.3;
    const Eigen::Matrix3d j = jacobian(s, h, 1.0, gb);
    for (int k = 0; k < 3; ++k) {
      Eigen::Vector3d p = s.vec(), m = s.vec();
      p[k] += 1e-6;
      m[k] -= 1e-6;
      const Eigen::Vector3d fd =
          (rhs(BlochState::from(p), h, 1.0, gb) - rhs(BlochState::from(m), h, 1.0, gb)) / 2e-6;
      CHECK((fd - j.col(k)).norm() < 1e-8);
    }
  }
}

TEST_CASE("flow preserves the sphere and reaches the broken branch") {
  const BlochState s0 = BlochState::from(Eigen::Vector3d(0.05, 0.0, 1.0).normalized());
  const auto traj = integrate(s0, 0.5, 1.0, 0.2, 400.0, 1e-11, 1.0);
  CHECK(traj.max_sphere_drift < 1e-9);
  const auto& end = traj.states.back();
  CHECK(std::abs(end.x - 0.85870) < 1e-4);
  CHECK(std::abs(end.z - 0.50510) < 1e-4);
  CHECK(traj.times.back() == Approx(400.0));
}

TEST_CASE("stability rejects non-equilibria") {
  SteadyStateBranch b;
  b.state = BlochState::from(Eigen::Vector3d(1.0, 0.0, 1.0).normalized());
  CHECK_THROWS_AS(stability(b, 0.5, 1.0, 0.2), DomainError);
  CHECK_THROWS_AS(fixed_points(0.5, -1.0, 0.2), DomainError);
  CHECK_THROWS_AS(integrate(BlochState{}, 0.5, 1.0, 0.2, 1.0, 0.0), DomainError);
}

TEST_CASE("marginal classification at the critical fields") {
  const auto cf = critical_fields(1.0, 0.2);
  for (double h : {cf.h_minus, cf.h_plus}) {
    const auto b = stable_branch(h, 1.0, 0.2);
    CHECK(b.marginal);
    CHECK_FALSE(b.stable);
  }
}
