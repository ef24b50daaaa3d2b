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

#include "dlmg/common.hpp"

namespace dlmg {

inline constexpr int kDefaultMaxAtoms = 2000;

/// Collective spin operators on the symmetric subspace j = N/2.
///
/// Basis ordering: index k = 0..N holds |j, m = j - k>, so index 0 is the
/// fully polarized state along +z. J+ therefore lives on the first
/// superdiagonal.
struct SpinOperatorSet {
  int n_atoms = 0;
  double j = 0.0;
  SparseC jx, jy, jz, jplus, jminus;

  int dim() const { return n_atoms + 1; }
  /// Magnetic quantum number of basis index k.
  double m_of(int k) const { return j - k; }
};

SpinOperatorSet build_spin_operators(int n_atoms, int max_atoms = kDefaultMaxAtoms);

/// -2 h Jz - (2 lambda / N) (Jx^2 + gamma Jy^2), gamma in [-1, 1].
SparseC build_lmg_hamiltonian(const SpinOperatorSet& ops, double h, double lambda,
                              double gamma_aniso = 0.0);

/// Normalized state vector in the Dicke basis.
struct PureState {
  CVector amplitudes;
  int n_atoms = 0;
};

/// |j,+j> rotated by theta about (-sin phi, cos phi, 0); the mean Bloch
/// vector is (sin theta cos phi, sin theta sin phi, cos theta).
PureState coherent_spin_state(double theta, double phi, int n_atoms);

/// Dicke basis state |j, m> with m = j - k.
PureState dicke_state(int k, int n_atoms);

}  // namespace dlmg
