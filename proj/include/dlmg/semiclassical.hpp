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

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dlmg/common.hpp"

namespace dlmg {

/// Mean-field Bloch vector (<Jx>, <Jy>, <Jz>)/j.
struct BlochState {
  double x = 0.0, y = 0.0, z = 1.0;

  Eigen::Vector3d vec() const { return {x, y, z}; }
  static BlochState from(const Eigen::Vector3d& v) { return {v[0], v[1], v[2]}; }
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

enum class BranchId { kPole, kSouthPole, kBrokenPlus, kBrokenMinus, kSaddlePlus, kSaddleMinus };

std::string branch_name(BranchId id);

struct SteadyStateBranch {
  BlochState state;
  BranchId branch_id = BranchId::kPole;
  bool stable = false;
  /// Largest eigenvalue real part lies within 1e-9 of zero.
  bool marginal = false;
  /// Eigenvalues of the flow's Jacobian restricted to the tangent plane,
  /// sorted by decreasing real part.
  std::array<Complex, 2> jacobian_eigenvalues{};
};

/// Mean-field flow of the reduced model. Gamma_a does not enter at this
/// level; it contributes only at O(1/N).
///   dX = 2hY - Gb Z X
///   dY = -2hX + 2 lambda Z X - Gb Z Y
///   dZ = -2 lambda X Y + Gb (X^2 + Y^2)
Eigen::Vector3d rhs(const BlochState& s, double h, double lambda, double gamma_b);

/// 3x3 Jacobian of rhs.
Eigen::Matrix3d jacobian(const BlochState& s, double h, double lambda, double gamma_b);

/// Orthonormal (e1, e2) with e1 x e2 = n for unit n.
std::pair<Eigen::Vector3d, Eigen::Vector3d> tangent_basis(const Eigen::Vector3d& n);

/// Classifies a fixed point by the tangent-plane Jacobian eigenvalues.
/// Throws DomainError when |rhs| exceeds 1e-8.
SteadyStateBranch stability(const SteadyStateBranch& branch, double h, double lambda,
                            double gamma_b);

/// Equilibria on the physical sweep: both poles always, plus the
/// symmetry-broken pair strictly inside (h_-, h_+). Each entry is classified.
std::vector<SteadyStateBranch> fixed_points(double h, double lambda, double gamma_b);

/// Every equilibrium of the flow, classified. Beyond fixed_points this adds
/// the closed-form broken family for |h| < h_+ outside (h_-, h_+) (it is
/// stable for 0 < h < h_-, where it coexists with the stable pole) and the
/// second family Z = 2h/(lambda - sqrt(lambda^2 - Gb^2)) that exists for
/// |h| < h_- (saddles).
std::vector<SteadyStateBranch> all_equilibria(double h, double lambda, double gamma_b);

/// The stable equilibrium physically selected at h: the pole outside the
/// window, broken_plus inside. At the critical fields this is the (marginal)
/// pole.
SteadyStateBranch stable_branch(double h, double lambda, double gamma_b);

struct Trajectory {
  std::vector<double> times;
  std::vector<BlochState> states;
  double max_sphere_drift = 0.0;
  bool renormalized = false;
  std::vector<std::string> log;
};

/// Adaptive integration of the flow. Samples are recorded at every
/// `sample_dt` (all accepted steps when sample_dt <= 0). The state is
/// projected back onto the sphere, with a log entry, if |s| drifts from 1
/// by more than 10*tol.
Trajectory integrate(const BlochState& s0, double h, double lambda, double gamma_b,
                     double t_final, double tol, double sample_dt = 0.0);

struct BifurcationPoint {
  double h = 0.0;
  int stable_before = 0;
  int stable_after = 0;
};

/// Counts stable equilibria on a uniform h grid and refines every change by
/// bisection to `h_tol`.
std::vector<BifurcationPoint> find_bifurcations(double h_start, double h_stop, int count,
                                                double lambda, double gamma_b,
                                                double h_tol = 1e-12);

int count_stable(double h, double lambda, double gamma_b);

}  // namespace dlmg
