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

#include <string>
#include <vector>

#include "dlmg/common.hpp"
#include "dlmg/params.hpp"
#include "dlmg/spin_algebra.hpp"

namespace dlmg {

struct DensityMatrix {
  CMatrix matrix;
  int n_atoms = 0;

  int dim() const { return static_cast<int>(matrix.rows()); }
  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int n_atoms);
};

/// Generator of the collective-spin master equation
///
///   d rho/dt = -i[H, rho] + (Gamma_a/N) D[2 Jx] rho + (Gamma_b/N) D[J+] rho,
///   H = -2 h Jz - (2 lambda/N) Jx^2,   D[A] rho = 2 A rho A+ - A+A rho - rho A+A,
///
/// acting on row-major vectorized density matrices: vec(rho)[i*d + j] =
/// rho(i, j), so vec(A rho B) = (A (x) B^T) vec(rho).
struct Liouvillian {
  SparseC superop;
  SparseC hamiltonian;
  EffectiveParams params;
  int n_atoms = 0;
  SpinOperatorSet ops;

  int dim() const { return n_atoms + 1; }
};

Liouvillian build_liouvillian(const EffectiveParams& params, int n_atoms);

/// Row-major vectorization helpers.
CVector vectorize(const CMatrix& rho);
CMatrix unvectorize(const CVector& v, int dim);

/// L(rho) as a matrix.
CMatrix apply_liouvillian(const Liouvillian& liou, const CMatrix& rho);

/// Max absolute row sum of a sparse matrix.
double norm_inf(const SparseC& a);

struct SteadyStateOptions {
  /// Accept when |L rho|_inf <= residual_tol * |L|_inf * |rho|_inf.
  double residual_tol = 1e-10;
  /// A Ritz value mu of L counts as a zero mode when |mu| <= null_tol * |L|_inf.
  double null_tol = 1e-9;
  /// Skip the zero-mode probe (the linear solve still runs).
  bool probe_null_space = true;
  int refinement_steps = 3;
};

struct SteadyStateResult {
  DensityMatrix rho;
  double residual = 0.0;
  /// Number of probed Ritz values of L (parity-even sector) below null_tol;
  /// -1 when the probe was skipped.
  int null_dimension = -1;
  /// Smallest-magnitude Ritz values found by the probe.
  std::vector<Complex> smallest_eigenvalues;
  std::vector<std::string> log;
};

/// Solves L(rho) = 0 with tr(rho) = 1 by replacing the first (diagonal)
/// row of the generator with the trace functional. Throws
/// DegenerateSteadyStateError when the zero-mode probe finds more than one
/// zero mode and SolverError(kSingular) when no ordering/refinement
/// combination meets the residual tolerance.
SteadyStateResult steady_state(const Liouvillian& liou, const SteadyStateOptions& opts = {});

struct EvolveResult {
  DensityMatrix rho;
  std::vector<double> times;
  std::vector<DensityMatrix> samples;
  /// |tr(rho) - 1| just before the final renormalization.
  double trace_drift = 0.0;
  bool renormalized = false;
  long steps = 0;
  std::vector<std::string> log;
};

/// Adaptive Dormand-Prince 4(5) integration of the master equation with
/// absolute and relative tolerance `tol`; rho is re-symmetrized after every
/// accepted step. `sample_times` (ascending, within [0, t_final]) selects
/// snapshots to return.
EvolveResult evolve(const Liouvillian& liou, const DensityMatrix& rho0, double t_final,
                    double tol, const std::vector<double>& sample_times = {});

struct MomentSet {
  double jx_mean = 0.0, jy_mean = 0.0, jz_mean = 0.0;
  double jx2 = 0.0, jy2 = 0.0, jz2 = 0.0;
  /// <Jx Jy + Jy Jx>/2 and the analogous z cross moments.
  double jxjy_sym = 0.0, jxjz_sym = 0.0, jyjz_sym = 0.0;
  int n_atoms = 0;
};

MomentSet expectations(const DensityMatrix& rho, const SpinOperatorSet& ops);

/// tr(rho A) for sparse A.
Complex expectation(const CMatrix& rho, const SparseC& op);

double purity(const DensityMatrix& rho);
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);
double min_eigenvalue(const DensityMatrix& rho);
double hermiticity_error(const DensityMatrix& rho);

/// Parity (pi rotation about z) eigenvalue of the vectorized index i*d + j:
/// +1 when i - j is even.
inline int z2_parity(int i, int j) { return ((i - j) % 2 == 0) ? 1 : -1; }

}  // namespace dlmg
