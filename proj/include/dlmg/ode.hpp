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

#include <algorithm>
#include <cmath>
#include <functional>

#include "dlmg/common.hpp"

namespace dlmg {

struct OdeStats {
  long accepted = 0;
  long rejected = 0;
};

/// Adaptive Dormand-Prince 4(5) integrator for dy/dt = f(t, y) with an
/// Eigen vector state. The error norm is the RMS of the local error scaled
/// by atol + rtol*|y|. `on_accept(t, y)` runs after each accepted step and
/// may modify y in place (projection, re-symmetrization).
template <typename Vec>
class DormandPrince {
 public:
  using Rhs = std::function<void(double, const Vec&, Vec&)>;
  using Observer = std::function<void(double, Vec&)>;

  DormandPrince(Rhs rhs, double atol, double rtol) : rhs_(std::move(rhs)), atol_(atol), rtol_(rtol) {}

  double min_step = 1e-14;

  /// Integrates from t0 to t1 in place. Throws SolverError on step-size
  /// underflow.
  OdeStats integrate(Vec& y, double t0, double t1, const Observer& on_accept = {}) {
    OdeStats stats;
    if (t1 <= t0) return stats;
    double t = t0;
    double h = initial_step(y, t0, t1 - t0);
    Vec k1, k2, k3, k4, k5, k6, k7, tmp, y5, err;
    rhs_(t, y, k1);
    while (t < t1) {
      if (t + h > t1) h = t1 - t;
      tmp = y + h * (a21 * k1);
      rhs_(t + c2 * h, tmp, k2);
      tmp = y + h * (a31 * k1 + a32 * k2);
      rhs_(t + c3 * h, tmp, k3);
      tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
      rhs_(t + c4 * h, tmp, k4);
      tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      rhs_(t + c5 * h, tmp, k5);
      tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      rhs_(t + h, tmp, k6);
      y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      rhs_(t + h, y5, k7);
      err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double acc = 0.0;
      for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double sc = atol_ + rtol_ * std::max(std::abs(y[i]), std::abs(y5[i]));
        const double r = std::abs(err[i]) / sc;
        acc += r * r;
      }
      const double enorm = std::sqrt(acc / std::max<Eigen::Index>(1, y.size()));

      if (enorm <= 1.0) {
        t += h;
        y = y5;
        if (on_accept) on_accept(t, y);
        rhs_(t, y, k1);  // FSAL would reuse k7, but on_accept may change y.
        ++stats.accepted;
        const double fac = enorm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(enorm, -0.2), 0.2, 5.0);
        h *= fac;
      } else {
        ++stats.rejected;
        h *= std::clamp(0.9 * std::pow(enorm, -0.2), 0.1, 1.0);
      }
      if (h < min_step * std::max(1.0, std::abs(t)) && t < t1)
        throw SolverError(SolverStatus::kDiverged, "ODE step size underflow");
    }
    return stats;
  }

 private:
  double initial_step(const Vec& y, double t0, double span) {
    Vec f0;
    rhs_(t0, y, f0);
    const double ny = y.norm();
    const double nf = f0.norm();
    double h = (nf > 0.0) ? 0.01 * std::max(ny, atol_) / nf : 1e-3 * span;
    return std::clamp(h, 1e-10 * span, span);
  }

  Rhs rhs_;
  double atol_;
  double rtol_;

  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b(5th) - b(4th)
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
};

}  // namespace dlmg
