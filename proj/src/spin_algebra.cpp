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

#include "dlmg/spin_algebra.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace dlmg {

SpinOperatorSet build_spin_operators(int n_atoms, int max_atoms) {
  if (n_atoms < 1 || n_atoms > max_atoms)
    throw DomainError("build_spin_operators: n_atoms must lie in [1, " +
                      std::to_string(max_atoms) + "], got " + std::to_string(n_atoms));
  SpinOperatorSet ops;
  ops.n_atoms = n_atoms;
  ops.j = 0.5 * n_atoms;
  const int dim = n_atoms + 1;

  std::vector<Eigen::Triplet<Complex>> zt, pt;
  zt.reserve(dim);
  pt.reserve(dim);
  for (int k = 0; k < dim; ++k) {
    const double m = ops.j - k;
    zt.emplace_back(k, k, m);
    if (k > 0) {
      // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, and |m+1> has index k-1.
      pt.emplace_back(k - 1, k, std::sqrt(ops.j * (ops.j + 1.0) - m * (m + 1.0)));
    }
  }
  ops.jz.resize(dim, dim);
  ops.jz.setFromTriplets(zt.begin(), zt.end());
  ops.jplus.resize(dim, dim);
  ops.jplus.setFromTriplets(pt.begin(), pt.end());
  ops.jminus = SparseC(ops.jplus.adjoint());
  ops.jx = 0.5 * (ops.jplus + ops.jminus);
  ops.jy = Complex(0.0, -0.5) * (ops.jplus - ops.jminus);
  ops.jx.makeCompressed();
  ops.jy.makeCompressed();
  return ops;
}

SparseC build_lmg_hamiltonian(const SpinOperatorSet& ops, double h, double lambda,
                              double gamma_aniso) {
  if (std::abs(gamma_aniso) > 1.0)
    throw DomainError("build_lmg_hamiltonian: anisotropy must lie in [-1, 1]");
  const double n = ops.n_atoms;
  SparseC jx2 = ops.jx * ops.jx;
  SparseC h_mat = (-2.0 * h) * ops.jz - (2.0 * lambda / n) * jx2;
  if (gamma_aniso != 0.0) {
    SparseC jy2 = ops.jy * ops.jy;
    h_mat -= (2.0 * lambda * gamma_aniso / n) * jy2;
  }
  h_mat.prune(Complex(0.0));
  h_mat.makeCompressed();
  return h_mat;
}

PureState coherent_spin_state(double theta, double phi, int n_atoms) {
  if (n_atoms < 1) throw DomainError("coherent_spin_state: n_atoms must be positive");
  PureState psi;
  psi.n_atoms = n_atoms;
  psi.amplitudes = CVector::Zero(n_atoms + 1);
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  // Amplitude of index k (k atoms down):
  //   sqrt(C(N, k)) c^(N-k) s^k exp(i k phi),
  // evaluated in logs so large N does not overflow.
  const double log_c = std::log(std::abs(c));
  const double log_s = std::log(std::abs(s));
  for (int k = 0; k <= n_atoms; ++k) {
    const int up = n_atoms - k;
    if ((c == 0.0 && up > 0) || (s == 0.0 && k > 0)) continue;
    double log_mag = 0.5 * (std::lgamma(n_atoms + 1.0) - std::lgamma(k + 1.0) -
                            std::lgamma(up + 1.0));
    if (up > 0) log_mag += up * log_c;
    if (k > 0) log_mag += k * log_s;
    double sign = 1.0;
    if (c < 0.0 && (up % 2) == 1) sign = -sign;
    if (s < 0.0 && (k % 2) == 1) sign = -sign;
    psi.amplitudes[k] = sign * std::exp(log_mag) * std::polar(1.0, k * phi);
  }
  psi.amplitudes.normalize();
  return psi;
}

PureState dicke_state(int k, int n_atoms) {
  if (n_atoms < 1 || k < 0 || k > n_atoms) throw DomainError("dicke_state: index out of range");
  PureState psi;
  psi.n_atoms = n_atoms;
  psi.amplitudes = CVector::Zero(n_atoms + 1);
  psi.amplitudes[k] = 1.0;
  return psi;
}

}  // namespace dlmg
