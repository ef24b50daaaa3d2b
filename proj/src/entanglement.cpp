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

#include "dlmg/entanglement.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <bit>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

namespace dlmg {

namespace {

Eigen::Matrix2d q_matrix(const MomentSet& m) {
  const double n = m.n_atoms;
  Eigen::Matrix2d s;
  s << m.jx2, m.jxjy_sym, m.jxjy_sym, m.jy2;
  const Eigen::Vector2d mean(m.jx_mean, m.jy_mean);
  return (4.0 / n) * s - (4.0 / n - 4.0 / (n * n)) * mean * mean.transpose();
}

}  // namespace

double c_phi(const MomentSet& m, double phi) {
  const Eigen::Vector2d u(std::sin(phi), std::cos(phi));
  return 1.0 - u.dot(q_matrix(m) * u);
}

EntanglementResult c_r(const MomentSet& m) {
  if (m.n_atoms < 1) throw DomainError("c_r: n_atoms must be positive");
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(q_matrix(m));
  const Eigen::Vector2d v = es.eigenvectors().col(0);
  EntanglementResult r;
  r.n_atoms = m.n_atoms;
  r.c_r_raw = 1.0 - es.eigenvalues()[0];
  r.c_r = std::max(r.c_r_raw, 0.0);
  double phi = std::atan2(v[0], v[1]);
  phi = std::fmod(phi, std::numbers::pi);
  if (phi < 0.0) phi += std::numbers::pi;
  if (phi >= std::numbers::pi) phi = 0.0;
  r.phi_star = phi;
  return r;
}

double concurrence_oracle(const DensityMatrix& rho, int n_atoms) {
  if (n_atoms < 2 || n_atoms > 6)
    throw DomainError("concurrence_oracle: supported for 2 <= N <= 6");
  if (rho.dim() != n_atoms + 1)
    throw DomainError("concurrence_oracle: rho is not a symmetric-subspace state of N spins");
  if (hermiticity_error(rho) > 1e-10)
    throw DomainError("concurrence_oracle: rho is not Hermitian");

  // Dicke index k (m = j - k) is the uniform superposition of bit strings
  // with k zeros; bit 1 is spin up.
  const int full = 1 << n_atoms;
  CMatrix embed = CMatrix::Zero(full, n_atoms + 1);
  for (int s = 0; s < full; ++s) embed(s, n_atoms - std::popcount(static_cast<unsigned>(s))) = 1.0;
  for (int k = 0; k <= n_atoms; ++k) embed.col(k).normalize();
  const CMatrix big = embed * rho.matrix * embed.adjoint();

  // Keep the two highest bits.
  const int rest = full / 4;
  Eigen::Matrix4cd pair = Eigen::Matrix4cd::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int r = 0; r < rest; ++r) pair(a, b) += big(a * rest + r, b * rest + r);

  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;
  const Eigen::Matrix4cd flipped = yy * pair.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(pair * flipped, false);
  std::array<double, 4> l;
  for (int i = 0; i < 4; ++i) l[i] = std::sqrt(std::max(es.eigenvalues()[i].real(), 0.0));
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

}  // namespace dlmg
