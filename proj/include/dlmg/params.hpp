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

#include <json.hpp>

#include "dlmg/common.hpp"

namespace dlmg {

/// Unit system for rates read from or written to files. Internally every rate
/// is an angular frequency; `kTwoPiKHz` means a stored value v stands for
/// 2*pi*v kHz, i.e. 2*pi*1e3*v rad/s.
enum class Units { kDimensionless, kTwoPiKHz };

double to_internal(double value, Units units);
double from_internal(double value, Units units);
Units parse_units(const std::string& name);
std::string units_name(Units units);

/// Microscopic atom-cavity parameters. Rabi frequencies and couplings may be
/// complex; all entries are angular frequencies.
struct MicroParams {
  Complex rabi_r0{0.0}, rabi_s0{0.0}, rabi_r1{0.0};
  Complex g_r0{0.0}, g_s1{0.0}, g_s0{0.0}, g_r1{0.0};
  double delta_r = 0.0;
  double delta_s = 0.0;
  double kappa_a = 0.0;
  double kappa_b = 0.0;
  double delta_a = 0.0;
  double delta_b = 0.0;
  double omega_1 = 0.0;
  double omega_1p = 0.0;
  int n_atoms = 1;
  double gamma_at = 0.0;

  /// Throws DomainError when an invariant is violated.
  void validate() const;
};

/// Parameters of the reduced collective-spin master equation plus the
/// intermediate quantities they were derived from.
struct EffectiveParams {
  double h = 0.0;
  double lambda = 1.0;
  double gamma_a = 0.0;
  double gamma_b = 0.0;
  int n_atoms = 1;

  double omega_0 = 0.0;
  Complex lambda_a{0.0};
  Complex lambda_b{0.0};
  double delta_a_plus = 0.0;
  double delta_a_minus = 0.0;
  double delta_b_plus = 0.0;
  double delta_b_minus = 0.0;

  /// Relative mismatch between the two expressions for the mode-a Raman rate.
  double lambda_a_mismatch = 0.0;
  std::vector<std::string> warnings;
};

/// Effective parameters given directly in units where lambda is the scale.
EffectiveParams make_effective(double h, double lambda, double gamma_a,
                               double gamma_b, int n_atoms);

/// Maps microscopic parameters to the effective model. Both expressions for
/// the mode-a Raman rate are evaluated; the first one is used and a warning
/// is attached when they disagree by more than `mismatch_tolerance`
/// (relative).
EffectiveParams derive_effective(const MicroParams& micro,
                                 double mismatch_tolerance = 1e-6);

struct CriticalFields {
  double h_minus = 0.0;
  double h_plus = 0.0;
  bool exists = false;
};

/// Roots of h^2 - lambda*h + gamma_b^2/4 = 0.
CriticalFields critical_fields(double lambda, double gamma_b);

struct ValidityCheck {
  std::string name;
  double ratio = 0.0;
  double threshold = 10.0;
  bool passed = false;
};

struct ValidityReport {
  std::vector<ValidityCheck> checks;
  double spontaneous_emission_rate = 0.0;
  bool all_passed() const;
};

ValidityReport validity_report(const MicroParams& micro,
                               double threshold = 10.0);

// JSON mapping. Complex entries are accepted either as a number or as a
// two-element [re, im] array. Rates are converted with `units`.
MicroParams micro_from_json(const nlohmann::json& doc, Units units);
nlohmann::json micro_to_json(const MicroParams& micro, Units units);
nlohmann::json effective_to_json(const EffectiveParams& eff, Units units);
nlohmann::json critical_to_json(const CriticalFields& cf, Units units);
nlohmann::json validity_to_json(const ValidityReport& report, Units units);

/// Microscopic ratios of the probe-transmission example set, scaled so that
/// delta_a = 1 and lambda_a/delta_a = `lambda_a_over_delta_a`. The detuning
/// offset omega_0 is chosen so that h/lambda = `h_over_lambda`.
MicroParams transmission_example_micro(double h_over_lambda,
                                       double lambda_a_over_delta_a = 0.1);

}  // namespace dlmg
