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

#include "dlmg/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "dlmg/ode.hpp"
#include "dlmg/params.hpp"

namespace dlmg {

namespace {

constexpr double kMarginalTol = 1e-9;

SteadyStateBranch make_branch(const Eigen::Vector3d& v, BranchId id) {
  SteadyStateBranch b;
  b.state = BlochState::from(v);
  b.branch_id = id;
  return b;
}

// Closed-form family Z = 2h/L, Y = (Gb/L) X, X^2 = (L^2 - 4h^2)/(2 lambda L),
// where L is a root of L^2 - 2 lambda L + Gb^2 = 0. Returns false when the
// family does not exist at h (|Z| >= 1).
bool branch_family(double h, double lambda, double gamma_b, double big_l, double half_l,
                   Eigen::Vector3d& out) {
  if (!(big_l > 0.0)) return false;
  // half_l = L/2 is the critical field where the family meets the pole;
  // writing L^2 - 4h^2 = 4 (L/2 - h)(L/2 + h) keeps precision near it.
  const double num = 4.0 * (half_l - std::abs(h)) * (half_l + std::abs(h));
  if (!(num > 0.0)) return false;
  const double x = std::sqrt(num / (2.0 * lambda * big_l));
  out = {x, gamma_b / big_l * x, 2.0 * h / big_l};
  out.normalize();
  return true;
}

}  // namespace

std::string branch_name(BranchId id) {
  switch (id) {
    case BranchId::kPole: return "pole";
    case BranchId::kSouthPole: return "south_pole";
    case BranchId::kBrokenPlus: return "broken_plus";
    case BranchId::kBrokenMinus: return "broken_minus";
    case BranchId::kSaddlePlus: return "saddle_plus";
    case BranchId::kSaddleMinus: return "saddle_minus";
  }
  return "unknown";
}

Eigen::Vector3d rhs(const BlochState& s, double h, double lambda, double gamma_b) {
  const double x = s.x, y = s.y, z = s.z;
  return {2.0 * h * y - gamma_b * z * x,
          -2.0 * h * x + 2.0 * lambda * z * x - gamma_b * z * y,
          -2.0 * lambda * x * y + gamma_b * (x * x + y * y)};
}

Eigen::Matrix3d jacobian(const BlochState& s, double h, double lambda, double gamma_b) {
  const double x = s.x, y = s.y, z = s.z;
  Eigen::Matrix3d j;
  j << -gamma_b * z, 2.0 * h, -gamma_b * x,
       -2.0 * h + 2.0 * lambda * z, -gamma_b * z, 2.0 * lambda * x - gamma_b * y,
       -2.0 * lambda * y + 2.0 * gamma_b * x, -2.0 * lambda * x + 2.0 * gamma_b * y, 0.0;
  return j;
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> tangent_basis(const Eigen::Vector3d& n_in) {
  const Eigen::Vector3d n = n_in.normalized();
  // Seed with the coordinate axis least aligned with n.
  Eigen::Index axis = 0;
  n.cwiseAbs().minCoeff(&axis);
  const Eigen::Vector3d seed = Eigen::Vector3d::Unit(axis);
  Eigen::Vector3d e1 = (seed - seed.dot(n) * n).normalized();
  Eigen::Vector3d e2 = n.cross(e1);
  return {e1, e2};
}

SteadyStateBranch stability(const SteadyStateBranch& branch, double h, double lambda,
                            double gamma_b) {
  const Eigen::Vector3d f = rhs(branch.state, h, lambda, gamma_b);
  if (f.norm() > 1e-8) {
    std::ostringstream os;
    os << "stability: state is not a fixed point (|rhs| = " << f.norm() << ")";
    throw DomainError(os.str());
  }
  const Eigen::Vector3d n = branch.state.vec().normalized();
  const auto [e1, e2] = tangent_basis(n);
  Eigen::Matrix<double, 3, 2> basis;
  basis.col(0) = e1;
  basis.col(1) = e2;
  const Eigen::Matrix2d t = basis.transpose() * jacobian(branch.state, h, lambda, gamma_b) * basis;
  Eigen::EigenSolver<Eigen::Matrix2d> es(t, false);
  std::array<Complex, 2> ev{es.eigenvalues()[0], es.eigenvalues()[1]};
  std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() > b.imag();
  });
  SteadyStateBranch out = branch;
  out.jacobian_eigenvalues = ev;
  const double max_re = ev[0].real();
  out.marginal = std::abs(max_re) <= kMarginalTol;
  out.stable = max_re < 0.0 && !out.marginal;
  return out;
}

std::vector<SteadyStateBranch> fixed_points(double h, double lambda, double gamma_b) {
  if (!(lambda > 0.0)) throw DomainError("fixed_points: lambda must be positive");
  if (gamma_b < 0.0) throw DomainError("fixed_points: gamma_b must be non-negative");
  std::vector<SteadyStateBranch> out;
  out.push_back(stability(make_branch({0.0, 0.0, 1.0}, BranchId::kPole), h, lambda, gamma_b));
  out.push_back(stability(make_branch({0.0, 0.0, -1.0}, BranchId::kSouthPole), h, lambda, gamma_b));
  const CriticalFields cf = critical_fields(lambda, gamma_b);
  if (cf.exists && h > cf.h_minus && h < cf.h_plus) {
    const double big_l = 2.0 * cf.h_plus;
    Eigen::Vector3d v;
    if (branch_family(h, lambda, gamma_b, big_l, cf.h_plus, v)) {
      out.push_back(stability(make_branch(v, BranchId::kBrokenPlus), h, lambda, gamma_b));
      out.push_back(stability(make_branch({-v[0], -v[1], v[2]}, BranchId::kBrokenMinus), h,
                              lambda, gamma_b));
    }
  }
  return out;
}

std::vector<SteadyStateBranch> all_equilibria(double h, double lambda, double gamma_b) {
  if (!(lambda > 0.0)) throw DomainError("all_equilibria: lambda must be positive");
  if (gamma_b < 0.0) throw DomainError("all_equilibria: gamma_b must be non-negative");
  std::vector<SteadyStateBranch> out;
  out.push_back(stability(make_branch({0.0, 0.0, 1.0}, BranchId::kPole), h, lambda, gamma_b));
  out.push_back(stability(make_branch({0.0, 0.0, -1.0}, BranchId::kSouthPole), h, lambda, gamma_b));
  const CriticalFields cf = critical_fields(lambda, gamma_b);
  if (!cf.exists) return out;
  Eigen::Vector3d v;
  if (branch_family(h, lambda, gamma_b, 2.0 * cf.h_plus, cf.h_plus, v)) {
    out.push_back(stability(make_branch(v, BranchId::kBrokenPlus), h, lambda, gamma_b));
    out.push_back(stability(make_branch({-v[0], -v[1], v[2]}, BranchId::kBrokenMinus), h,
                            lambda, gamma_b));
  }
  if (branch_family(h, lambda, gamma_b, 2.0 * cf.h_minus, cf.h_minus, v)) {
    out.push_back(stability(make_branch(v, BranchId::kSaddlePlus), h, lambda, gamma_b));
    out.push_back(stability(make_branch({-v[0], -v[1], v[2]}, BranchId::kSaddleMinus), h,
                            lambda, gamma_b));
  }
  return out;
}

SteadyStateBranch stable_branch(double h, double lambda, double gamma_b) {
  const auto branches = fixed_points(h, lambda, gamma_b);
  for (const auto& b : branches)
    if (b.branch_id == BranchId::kBrokenPlus) return b;
  return branches.front();
}

int count_stable(double h, double lambda, double gamma_b) {
  const auto branches = fixed_points(h, lambda, gamma_b);
  return static_cast<int>(std::count_if(branches.begin(), branches.end(),
                                        [](const auto& b) { return b.stable; }));
}

Trajectory integrate(const BlochState& s0, double h, double lambda, double gamma_b,
                     double t_final, double tol, double sample_dt) {
  if (!(tol > 0.0)) throw DomainError("integrate: tol must be positive");
  if (t_final < 0.0) throw DomainError("integrate: t_final must be non-negative");
  Trajectory traj;
  Eigen::Vector3d y = s0.vec();
  if (std::abs(y.norm() - 1.0) > 1e-9) {
    std::ostringstream os;
    os << "initial state normalized (|s0| = " << y.norm() << ")";
    traj.log.push_back(os.str());
    y.normalize();
  }
  traj.times.push_back(0.0);
  traj.states.push_back(BlochState::from(y));

  DormandPrince<Eigen::Vector3d> stepper(
      [&](double, const Eigen::Vector3d& s, Eigen::Vector3d& ds) {
        ds = rhs(BlochState::from(s), h, lambda, gamma_b);
      },
      tol, tol);
  const bool every_step = !(sample_dt > 0.0);
  auto on_accept = [&](double t, Eigen::Vector3d& s) {
    const double drift = std::abs(s.norm() - 1.0);
    traj.max_sphere_drift = std::max(traj.max_sphere_drift, drift);
    if (drift > 10.0 * tol) {
      if (!traj.renormalized) {
        std::ostringstream os;
        os << "sphere drift " << drift << " at t = " << t << "; projecting back";
        traj.log.push_back(os.str());
      }
      traj.renormalized = true;
      s.normalize();
    }
    if (every_step) {
      traj.times.push_back(t);
      traj.states.push_back(BlochState::from(s));
    }
  };

  if (every_step) {
    stepper.integrate(y, 0.0, t_final, on_accept);
  } else {
    double t = 0.0;
    for (long k = 1; t < t_final; ++k) {
      const double next = std::min(t_final, k * sample_dt);
      stepper.integrate(y, t, next, on_accept);
      t = next;
      traj.times.push_back(t);
      traj.states.push_back(BlochState::from(y));
    }
  }
  return traj;
}

std::vector<BifurcationPoint> find_bifurcations(double h_start, double h_stop, int count,
                                                double lambda, double gamma_b, double h_tol) {
  if (count < 2) throw DomainError("find_bifurcations: need at least two grid points");
  std::vector<BifurcationPoint> out;
  const double step = (h_stop - h_start) / (count - 1);
  double prev_h = h_start;
  int prev_n = count_stable(prev_h, lambda, gamma_b);
  for (int i = 1; i < count; ++i) {
    const double cur_h = h_start + i * step;
    const int cur_n = count_stable(cur_h, lambda, gamma_b);
    if (cur_n != prev_n) {
      double lo = prev_h, hi = cur_h;
      while (hi - lo > h_tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (count_stable(mid, lambda, gamma_b) == prev_n)
          lo = mid;
        else
          hi = mid;
      }
      out.push_back({0.5 * (lo + hi), prev_n, cur_n});
    }
    prev_h = cur_h;
    prev_n = cur_n;
  }
  return out;
}

}  // namespace dlmg
