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

#pragma once

#include "dlmg/master_equation.hpp"

namespace dlmg {

struct EntanglementResult {
  double c_r = 0.0;      ///< max(c_r_raw, 0)
  double c_r_raw = 0.0;
  double phi_star = 0.0; ///< in [0, pi)
  int n_atoms = 0;
};

/// C_phi = 1 - (4/N) Var(J_phi) - (4/N^2) <J_phi>^2,
/// J_phi = sin(phi) Jx + cos(phi) Jy.
double c_phi(const MomentSet& m, double phi);

/// Closed-form maximum of C_phi over phi. With u = (sin phi, cos phi),
/// C_phi = 1 - u^T Q u, so the maximum is 1 - lambda_min(Q).
EntanglementResult c_r(const MomentSet& m);

/// Two-qubit concurrence of any pair of spins in a permutation-symmetric
/// N-qubit state given in the Dicke basis (N <= 6).
double concurrence_oracle(const DensityMatrix& rho, int n_atoms);

}  // namespace dlmg
