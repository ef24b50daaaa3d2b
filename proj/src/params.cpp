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

#include "dlmg/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace dlmg {

namespace {

constexpr double kTwoPiKHz = 2.0 * std::numbers::pi * 1e3;

double safe_ratio(double num, double den) {
  if (den == 0.0) return num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  return num / den;
}

}  // namespace

double to_internal(double value, Units units) {
  return units == Units::kTwoPiKHz ? value * kTwoPiKHz : value;
}

double from_internal(double value, Units units) {
  return units == Units::kTwoPiKHz ? value / kTwoPiKHz : value;
}

Units parse_units(const std::string& name) {
  if (name == "dimensionless" || name == "lambda") return Units::kDimensionless;
  if (name == "2pi_kHz" || name == "2pi-khz" || name == "2pi_khz") return Units::kTwoPiKHz;
  throw DomainError("unknown unit system '" + name + "' (expected dimensionless or 2pi_kHz)");
}

std::string units_name(Units units) {
  return units == Units::kTwoPiKHz ? "2pi_kHz" : "dimensionless";
}

void MicroParams::validate() const {
  if (!(kappa_a > 0.0) || !(kappa_b > 0.0))
    throw DomainError("cavity decay rates kappa_a, kappa_b must be positive");
  if (n_atoms < 1) throw DomainError("n_atoms must be at least 1");
  if (delta_r == 0.0 || delta_s == 0.0)
    throw DomainError("atom-light detunings delta_r, delta_s must be nonzero");
}

EffectiveParams make_effective(double h, double lambda, double gamma_a,
                               double gamma_b, int n_atoms) {
  if (!(lambda > 0.0)) throw DomainError("lambda must be positive");
  if (gamma_a < 0.0 || gamma_b < 0.0) throw DomainError("decay rates must be non-negative");
  if (n_atoms < 1) throw DomainError("n_atoms must be at least 1");
  EffectiveParams p;
  p.h = h;
  p.lambda = lambda;
  p.gamma_a = gamma_a;
  p.gamma_b = gamma_b;
  p.n_atoms = n_atoms;
  p.omega_0 = -2.0 * h;
  return p;
}

EffectiveParams derive_effective(const MicroParams& m, double mismatch_tolerance) {
  m.validate();
  EffectiveParams p;
  p.n_atoms = m.n_atoms;
  const double sqrt_n = std::sqrt(static_cast<double>(m.n_atoms));

  p.omega_0 = std::norm(m.rabi_r1) / (4.0 * m.delta_r) -
              std::norm(m.rabi_r0) / (4.0 * m.delta_r) -
              std::norm(m.rabi_s0) / (4.0 * m.delta_s) + m.omega_1 - m.omega_1p;

  p.delta_a_plus = std::norm(m.g_s1) / (2.0 * m.delta_s) + std::norm(m.g_r0) / (2.0 * m.delta_r);
  p.delta_a_minus = std::norm(m.g_s1) / (2.0 * m.delta_s) - std::norm(m.g_r0) / (2.0 * m.delta_r);
  p.delta_b_plus = std::norm(m.g_r1) / (2.0 * m.delta_r) + std::norm(m.g_s0) / (2.0 * m.delta_s);
  p.delta_b_minus = std::norm(m.g_r1) / (2.0 * m.delta_r) - std::norm(m.g_s0) / (2.0 * m.delta_s);

  p.lambda_a = sqrt_n * std::conj(m.rabi_r1) * m.g_r0 / m.delta_r;
  const Complex lambda_a_alt = sqrt_n * std::conj(m.rabi_s0) * m.g_s1 / m.delta_s;
  p.lambda_b = sqrt_n * std::conj(m.rabi_r0) * m.g_r1 / (2.0 * m.delta_r);

  const double scale = std::max(std::abs(p.lambda_a), std::abs(lambda_a_alt));
  p.lambda_a_mismatch = scale > 0.0 ? std::abs(p.lambda_a - lambda_a_alt) / scale : 0.0;
  if (p.lambda_a_mismatch > mismatch_tolerance) {
    std::ostringstream os;
    os << "mode-a Raman rates disagree: relative mismatch " << p.lambda_a_mismatch
       << "; using sqrt(N) conj(rabi_r1) g_r0 / delta_r";
    p.warnings.push_back(os.str());
  }

  // Only |lambda_i|^2 enters the rates; the phases can be absorbed into the
  // mode operators.
  const double la2 = std::norm(p.lambda_a);
  const double lb2 = std::norm(p.lambda_b);
  const double den_a = m.kappa_a * m.kappa_a + m.delta_a * m.delta_a;
  const double den_b = m.kappa_b * m.kappa_b + m.delta_b * m.delta_b;

  p.h = -p.omega_0 / 2.0;
  p.lambda = 2.0 * la2 * m.delta_a / den_a;
  p.gamma_a = la2 * m.kappa_a / den_a;
  p.gamma_b = lb2 * m.kappa_b / den_b;

  if (!(p.lambda > 0.0))
    p.warnings.push_back("derived lambda is not positive; the effective model assumes lambda > 0");
  return p;
}

CriticalFields critical_fields(double lambda, double gamma_b) {
  if (!(lambda > 0.0)) throw DomainError("critical_fields: lambda must be positive");
  if (gamma_b < 0.0) throw DomainError("critical_fields: gamma_b must be non-negative");
  CriticalFields cf;
  cf.exists = gamma_b <= lambda;
  if (!cf.exists) return cf;
  const double root = std::sqrt((lambda - gamma_b) * (lambda + gamma_b));
  cf.h_plus = 0.5 * (lambda + root);
  // Product form avoids cancellation in lambda - root for small gamma_b.
  cf.h_minus = cf.h_plus > 0.0 ? gamma_b * gamma_b / (4.0 * cf.h_plus) : 0.0;
  return cf;
}

bool ValidityReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

ValidityReport validity_report(const MicroParams& m, double threshold) {
  ValidityReport report;
  const EffectiveParams eff = derive_effective(m);
  auto add = [&](std::string name, double ratio) {
    report.checks.push_back({std::move(name), ratio, threshold, ratio >= threshold});
  };

  const double max_coupling = std::max({std::abs(m.rabi_r0), std::abs(m.rabi_s0),
                                        std::abs(m.rabi_r1), std::abs(m.g_r0),
                                        std::abs(m.g_s1), std::abs(m.g_s0),
                                        std::abs(m.g_r1), m.kappa_a, m.kappa_b,
                                        m.gamma_at});
  add("detuning_vs_couplings",
      safe_ratio(std::min(std::abs(m.delta_r), std::abs(m.delta_s)), max_coupling));

  const double slow = std::max({std::abs(eff.lambda_a), std::abs(eff.lambda_b),
                                std::abs(eff.omega_0)});
  add("cavity_a_vs_spin_rates", safe_ratio(std::hypot(m.kappa_a, m.delta_a), slow));
  add("cavity_b_vs_spin_rates", safe_ratio(std::hypot(m.kappa_b, m.delta_b), slow));
  add("kappa_b_vs_delta_b", safe_ratio(m.kappa_b, std::abs(m.delta_b)));
  add("delta_a_vs_kappa_a", safe_ratio(std::abs(m.delta_a), m.kappa_a));
  add("gamma_b_vs_gamma_a", safe_ratio(eff.gamma_b, eff.gamma_a));

  const double rabi_ratio = std::max({std::abs(m.rabi_r0) / std::abs(m.delta_r),
                                      std::abs(m.rabi_r1) / std::abs(m.delta_r),
                                      std::abs(m.rabi_s0) / std::abs(m.delta_s)});
  report.spontaneous_emission_rate = m.gamma_at * rabi_ratio * rabi_ratio / 4.0;
  add("lambda_vs_spontaneous_emission",
      safe_ratio(eff.lambda, report.spontaneous_emission_rate));
  add("gamma_b_vs_spontaneous_emission",
      safe_ratio(eff.gamma_b, report.spontaneous_emission_rate));
  return report;
}

namespace {

Complex complex_field(const nlohmann::json& doc, const char* key, Units units) {
  if (!doc.contains(key)) throw DomainError(std::string("missing field '") + key + "'");
  const auto& v = doc.at(key);
  if (v.is_number()) return {to_internal(v.get<double>(), units), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {to_internal(v[0].get<double>(), units), to_internal(v[1].get<double>(), units)};
  throw DomainError(std::string("field '") + key + "' must be a number or [re, im]");
}

double real_field(const nlohmann::json& doc, const char* key, Units units,
                  bool required = true, double fallback = 0.0) {
  if (!doc.contains(key)) {
    if (required) throw DomainError(std::string("missing field '") + key + "'");
    return fallback;
  }
  const auto& v = doc.at(key);
  if (!v.is_number()) throw DomainError(std::string("field '") + key + "' must be a number");
  return to_internal(v.get<double>(), units);
}

nlohmann::json complex_json(Complex z, Units units) {
  if (z.imag() == 0.0) return from_internal(z.real(), units);
  return nlohmann::json::array({from_internal(z.real(), units), from_internal(z.imag(), units)});
}

}  // namespace

MicroParams micro_from_json(const nlohmann::json& doc, Units units) {
  if (!doc.is_object()) throw DomainError("parameter document must be a JSON object");
  MicroParams m;
  m.rabi_r0 = complex_field(doc, "rabi_r0", units);
  m.rabi_s0 = complex_field(doc, "rabi_s0", units);
  m.rabi_r1 = complex_field(doc, "rabi_r1", units);
  m.g_r0 = complex_field(doc, "g_r0", units);
  m.g_s1 = complex_field(doc, "g_s1", units);
  m.g_s0 = complex_field(doc, "g_s0", units);
  m.g_r1 = complex_field(doc, "g_r1", units);
  m.delta_r = real_field(doc, "delta_r", units);
  m.delta_s = real_field(doc, "delta_s", units);
  m.kappa_a = real_field(doc, "kappa_a", units);
  m.kappa_b = real_field(doc, "kappa_b", units);
  m.delta_a = real_field(doc, "delta_a", units);
  m.delta_b = real_field(doc, "delta_b", units);
  m.omega_1 = real_field(doc, "omega_1", units, false);
  m.omega_1p = real_field(doc, "omega_1p", units, false);
  m.gamma_at = real_field(doc, "gamma_at", units, false);
  if (!doc.contains("n_atoms")) throw DomainError("missing field 'n_atoms'");
  if (!doc.at("n_atoms").is_number()) throw DomainError("field 'n_atoms' must be a number");
  const double n = doc.at("n_atoms").get<double>();
  if (n < 1.0 || n > 2.0e9 || std::floor(n) != n)
    throw DomainError("field 'n_atoms' must be a positive integer");
  m.n_atoms = static_cast<int>(n);
  m.validate();
  return m;
}

nlohmann::json micro_to_json(const MicroParams& m, Units units) {
  nlohmann::json j;
  j["units"] = units_name(units);
  j["rabi_r0"] = complex_json(m.rabi_r0, units);
  j["rabi_s0"] = complex_json(m.rabi_s0, units);
  j["rabi_r1"] = complex_json(m.rabi_r1, units);
  j["g_r0"] = complex_json(m.g_r0, units);
  j["g_s1"] = complex_json(m.g_s1, units);
  j["g_s0"] = complex_json(m.g_s0, units);
  j["g_r1"] = complex_json(m.g_r1, units);
  j["delta_r"] = from_internal(m.delta_r, units);
  j["delta_s"] = from_internal(m.delta_s, units);
  j["kappa_a"] = from_internal(m.kappa_a, units);
  j["kappa_b"] = from_internal(m.kappa_b, units);
  j["delta_a"] = from_internal(m.delta_a, units);
  j["delta_b"] = from_internal(m.delta_b, units);
  j["omega_1"] = from_internal(m.omega_1, units);
  j["omega_1p"] = from_internal(m.omega_1p, units);
  j["gamma_at"] = from_internal(m.gamma_at, units);
  j["n_atoms"] = m.n_atoms;
  return j;
}

nlohmann::json effective_to_json(const EffectiveParams& e, Units units) {
  nlohmann::json j;
  j["units"] = units_name(units);
  j["h"] = from_internal(e.h, units);
  j["lambda"] = from_internal(e.lambda, units);
  j["gamma_a"] = from_internal(e.gamma_a, units);
  j["gamma_b"] = from_internal(e.gamma_b, units);
  j["n_atoms"] = e.n_atoms;
  j["omega_0"] = from_internal(e.omega_0, units);
  j["lambda_a"] = complex_json(e.lambda_a, units);
  j["lambda_b"] = complex_json(e.lambda_b, units);
  j["delta_a_plus"] = from_internal(e.delta_a_plus, units);
  j["delta_a_minus"] = from_internal(e.delta_a_minus, units);
  j["delta_b_plus"] = from_internal(e.delta_b_plus, units);
  j["delta_b_minus"] = from_internal(e.delta_b_minus, units);
  j["lambda_a_mismatch"] = e.lambda_a_mismatch;
  j["warnings"] = e.warnings;
  return j;
}

nlohmann::json critical_to_json(const CriticalFields& cf, Units units) {
  nlohmann::json j;
  j["exists"] = cf.exists;
  if (cf.exists) {
    j["h_minus"] = from_internal(cf.h_minus, units);
    j["h_plus"] = from_internal(cf.h_plus, units);
  } else {
    j["h_minus"] = nullptr;
    j["h_plus"] = nullptr;
  }
  return j;
}

nlohmann::json validity_to_json(const ValidityReport& r, Units units) {
  nlohmann::json j;
  j["spontaneous_emission_rate"] = from_internal(r.spontaneous_emission_rate, units);
  j["all_passed"] = r.all_passed();
  auto& checks = j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) {
    nlohmann::json item;
    item["name"] = c.name;
    // JSON has no infinity; an unbounded ratio is written as null.
    if (std::isfinite(c.ratio))
      item["ratio"] = c.ratio;
    else
      item["ratio"] = nullptr;
    item["threshold"] = c.threshold;
    item["passed"] = c.passed;
    checks.push_back(item);
  }
  return j;
}

MicroParams transmission_example_micro(double h_over_lambda, double lambda_a_over_delta_a) {
  // delta_a = 1; kappa_a/delta_a = 0.02, lambda_b/lambda_a = 0.32,
  // kappa_b/delta_a = 1, delta_b = 0. Equal couplings and detunings on both
  // excited states make delta_{a,b}^- vanish.
  MicroParams m;
  m.n_atoms = 10000;
  const double sqrt_n = 100.0;
  const double detuning = 1000.0;
  const double g = 1.0;
  const double rabi_a = lambda_a_over_delta_a * detuning / (sqrt_n * g);
  const double rabi_b = 0.32 * lambda_a_over_delta_a * 2.0 * detuning / (sqrt_n * g);
  m.rabi_r1 = rabi_a;
  m.rabi_s0 = rabi_a;
  m.rabi_r0 = rabi_b;
  m.g_r0 = m.g_s1 = m.g_s0 = m.g_r1 = g;
  m.delta_r = m.delta_s = detuning;
  m.delta_a = 1.0;
  m.kappa_a = 0.02;
  m.kappa_b = 1.0;
  m.delta_b = 0.0;
  m.gamma_at = 0.0;

  const double la2 = lambda_a_over_delta_a * lambda_a_over_delta_a;
  const double lambda = 2.0 * la2 * m.delta_a / (m.kappa_a * m.kappa_a + m.delta_a * m.delta_a);
  const double light_shift = (rabi_a * rabi_a - rabi_b * rabi_b) / (4.0 * detuning) -
                             rabi_a * rabi_a / (4.0 * detuning);
  m.omega_1p = 0.0;
  m.omega_1 = -2.0 * h_over_lambda * lambda - light_shift;
  return m;
}

}  // namespace dlmg
