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
#include "dlmg/master_equation.hpp"
#include "dlmg/params.hpp"
#include "dlmg/semiclassical.hpp"

namespace dlmg {

/// Normal-ordered polynomial of degree <= 2 in a single boson mode:
///   one + c_*c + cd*c^dag + cc*c^2 + cdcd*c^dag^2 + cdc*c^dag c.
struct BosonPoly {
  Complex one{0.0}, c{0.0}, cd{0.0}, cc{0.0}, cdcd{0.0}, cdc{0.0};

  BosonPoly adjoint() const;
  bool is_linear() const { return cc == 0.0 && cdcd == 0.0 && cdc == 0.0; }
  double max_abs() const;
};

BosonPoly operator+(const BosonPoly& a, const BosonPoly& b);
BosonPoly operator-(const BosonPoly& a, const BosonPoly& b);
BosonPoly operator*(Complex s, const BosonPoly& a);
/// Product of two polynomials of degree <= 1, normal ordered
/// (c c^dag = c^dag c + 1).
BosonPoly multiply_linear(const BosonPoly& a, const BosonPoly& b);

/// Linear jump operator u c + v c^dag entering with rate `rate` * D[.].
struct LinearJump {
  double rate = 0.0;
  Complex u{0.0}, v{0.0};
};

/// Quadratic (Gaussian) fluctuation model obtained by expanding the reduced
/// master equation about a mean-field equilibrium in Holstein-Primakoff
/// variables, J'_z = N/2 - c^dag c, J'_+ = sqrt(N) c, in the frame whose z
/// axis is the mean Bloch vector. The result has the form
///
///   d rho/dt = -i[H_HP, rho] + G+ D[c^dag] rho + G- D[c] rho
///              + { Y (2 c rho c - c^2 rho - rho c^2) + h.c. },
///   H_HP = omega c^dag c + squeeze c^2 + conj(squeeze) c^dag^2.
struct LinearizedModel {
  SteadyStateBranch branch;
  EffectiveParams params;
  /// Rows e1, e2, n: maps lab vectors to the frame with n along +z.
  Eigen::Matrix3d rotation;
  /// d/dt (<c>, <c^dag>) = drift (<c>, <c^dag>).
  Eigen::Matrix2cd drift;
  /// d C/dt = drift C + C drift^T + noise for C = <(c, c^dag)^T (c, c^dag)>.
  Eigen::Matrix2cd noise;
  double gamma_plus = 0.0;
  double gamma_minus = 0.0;
  Complex upsilon{0.0};
  double omega = 0.0;
  Complex squeeze{0.0};
  /// Coefficient of c in the O(sqrt(N)) part of the expanded generator,
  /// which vanishes at an equilibrium.
  Complex linear_residual{0.0};
  std::vector<LinearJump> jumps;
  BosonPoly hamiltonian;

  std::array<Complex, 2> drift_eigenvalues() const;
};

/// Throws DomainError for an unstable expansion point or when the linear
/// terms do not cancel (the point is not an equilibrium).
LinearizedModel linearize(const EffectiveParams& params, const SteadyStateBranch& branch);

struct CovarianceSet {
  double n_c = 0.0;   ///< <c^dag c>
  Complex m_c{0.0};   ///< <c c>
  /// Lab-frame fluctuation tensor <L_a L_b> (symmetrized, real) where
  /// J_a = (N/2) n_a + sqrt(N) L_a - n_a c^dag c + O(N^-1/2).
  Eigen::Matrix3d lab_fluctuations;
  Eigen::Vector3d mean_direction;
};

/// Stationary solution of the Lyapunov equation drift C + C drift^T + noise
/// = 0. Throws SolverError(kDiverged) unless the drift is strictly stable.
CovarianceSet steady_covariance(const LinearizedModel& model);

/// Lab-frame moments at large N implied by the Gaussian state, keeping
/// terms through O(N) in second moments and O(1) in means.
MomentSet linearized_moments(const CovarianceSet& cov, int n_atoms);

struct EigenvalueRow {
  double h = 0.0;
  std::array<Complex, 2> eigenvalues{};
  BranchId branch_id = BranchId::kPole;
  SolverStatus status = SolverStatus::kOk;
};

/// Drift eigenvalues along the physically selected branch for each h.
std::vector<EigenvalueRow> fluctuation_eigenvalues(const EffectiveParams& params,
                                                   const std::vector<double>& h_grid);

/// Mean-field equilibrium and 6x6 linear drift of the two-mode atom-cavity
/// model. Variables are (Re a, Im a, Re b, Im b, t1, t2) with a, b the cavity
/// amplitudes divided by sqrt(N) and (t1, t2) tangent coordinates of the
/// Bloch vector in the basis of `tangent_basis(mean)`.
///
/// The mode-a coupling is (2|lambda_a|/sqrt(N)) Jx (a + a^dag) and the mode-b
/// coupling (|lambda_b|/sqrt(N)) (J- b + J+ b^dag), so adiabatic elimination
/// reproduces lambda, Gamma_a and Gamma_b exactly as derived from the
/// microscopic parameters. N appears only through these sqrt(N)-scaled rates
/// and through the products N delta_{a,b}^-.
struct TwoModeModel {
  Eigen::Vector3d mean;
  Complex alpha{0.0};
  Complex beta{0.0};
  Eigen::Matrix<double, 6, 6> drift;
  Eigen::Matrix<double, 7, 7> full_jacobian;
  double kappa_b = 0.0;
  double delta_b = 0.0;
  bool include_dispersive_shifts = false;
  std::vector<Complex> eigenvalues;
  std::vector<std::string> log;
};

struct TwoModeOptions {
  /// Keep the N delta_{a,b}^- Jz a^dag a terms (off by default).
  bool include_dispersive_shifts = false;
  /// A drift eigenvalue with real part above this (times the largest rate)
  /// makes the expansion point unstable.
  double stability_tol = 1e-9;
};

/// Mean-field flow of the two-mode model in the variables
/// (Re a, Im a, Re b, Im b, X, Y, Z).
Eigen::Matrix<double, 7, 1> two_mode_flow(const MicroParams& micro,
                                          const Eigen::Matrix<double, 7, 1>& v,
                                          const TwoModeOptions& opts = {});

TwoModeModel build_two_mode_model(const MicroParams& micro, const SteadyStateBranch& branch,
                                  const TwoModeOptions& opts = {});

struct SpectrumResult {
  std::vector<double> probe_frequencies;
  std::vector<double> transmission;  ///< +inf marks a singular point
  double h = 0.0;
  double lambda = 0.0;
  double gamma_a = 0.0;
  double gamma_b = 0.0;
  Eigen::Vector3d mean;
  std::vector<Complex> eigenvalues;
};

/// Coherent transmission of a weak probe on mode b at rotating-frame
/// frequency nu, normalized to the peak empty-cavity transmission 1/kappa_b^2
/// (which the grid attains when it contains nu = delta_b).
SpectrumResult transmission_spectrum(const MicroParams& micro, const SteadyStateBranch& branch,
                                     double probe_amplitude, const std::vector<double>& nu_grid,
                                     const TwoModeOptions& opts = {});

/// Same model, but the grid is refined `levels` times by bisecting the
/// intervals next to every local extremum.
SpectrumResult transmission_spectrum_refined(const MicroParams& micro,
                                             const SteadyStateBranch& branch,
                                             double probe_amplitude,
                                             const std::vector<double>& nu_grid, int levels,
                                             const TwoModeOptions& opts = {});

/// Probe response at a single frequency (mode-b amplitude at the probe
/// frequency divided by probe amplitude).
Complex probe_response(const TwoModeModel& model, double nu);

std::vector<double> uniform_grid(double start, double stop, int count);

}  // namespace dlmg
