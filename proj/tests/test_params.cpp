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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>

#include "dlmg/params.hpp"

using namespace dlmg;
using doctest::Approx;

namespace {

// Roots of h^2 - lambda h + gb^2/4 by the plain quadratic formula.
std::pair<double, double> quadratic_roots(double lambda, double gb) {
  const double disc = std::sqrt(lambda * lambda - gb * gb);
  return {(lambda - disc) / 2.0, (lambda + disc) / 2.0};
}

}  // namespace

TEST_CASE("critical fields") {
  SUBCASE("gamma_b = 0.2") {
    const auto cf = critical_fields(1.0, 0.2);
    CHECK(cf.exists);
    CHECK(std::abs(cf.h_minus - 0.0101021) < 1e-7);
    CHECK(std::abs(cf.h_plus - 0.9898979) < 1e-7);
    const auto [lo, hi] = quadratic_roots(1.0, 0.2);
    CHECK(std::abs(cf.h_minus - lo) < 1e-14);
    CHECK(std::abs(cf.h_plus - hi) < 1e-14);
  }
  SUBCASE("gamma_b = 0.05") {
    const auto cf = critical_fields(1.0, 0.05);
    CHECK(std::abs(cf.h_minus - 0.0006254) < 1e-7);
    CHECK(std::abs(cf.h_plus - 0.9993746) < 1e-7);
  }
  SUBCASE("gamma_b = 0") {
    const auto cf = critical_fields(1.0, 0.0);
    CHECK(cf.exists);
    CHECK(cf.h_minus == 0.0);
    CHECK(cf.h_plus == 1.0);
  }
  SUBCASE("gamma_b = lambda merges the roots") {
    const auto cf = critical_fields(1.0, 1.0);
    CHECK(cf.exists);
    CHECK(cf.h_minus == Approx(0.5));
    CHECK(cf.h_plus == Approx(0.5));
  }
  SUBCASE("dissipation dominated") {
    CHECK_FALSE(critical_fields(1.0, 1.5).exists);
  }
  SUBCASE("invalid input") {
    CHECK_THROWS_AS(critical_fields(0.0, 0.1), DomainError);
    CHECK_THROWS_AS(critical_fields(1.0, -0.1), DomainError);
  }
}

TEST_CASE("critical field sum and product") {
  for (double gb : {1e-6, 1e-3, 0.1, 0.5, 0.99}) {
    for (double lambda : {0.3, 1.0, 7.0}) {
      const auto cf = critical_fields(lambda, gb * lambda);
      CHECK(cf.h_minus + cf.h_plus == Approx(lambda).epsilon(1e-13));
      CHECK(cf.h_minus * cf.h_plus == Approx(gb * gb * lambda * lambda / 4.0).epsilon(1e-13));
      CHECK(cf.h_minus <= cf.h_plus);
    }
  }
}

TEST_CASE("unit conversion round trip") {
  for (double v : {-3.5, 0.0, 1.0, 2500.0}) {
    CHECK(from_internal(to_internal(v, Units::kTwoPiKHz), Units::kTwoPiKHz) == Approx(v));
    CHECK(to_internal(v, Units::kDimensionless) == v);
  }
  CHECK(to_internal(1.0, Units::kTwoPiKHz) == Approx(2.0 * std::numbers::pi * 1e3));
  CHECK(parse_units("2pi_kHz") == Units::kTwoPiKHz);
  CHECK(parse_units("dimensionless") == Units::kDimensionless);
  CHECK_THROWS_AS(parse_units("furlongs"), DomainError);
}

TEST_CASE("derived rates follow the adiabatic-elimination formulas") {
  MicroParams m;
  m.n_atoms = 400;
  m.rabi_r1 = Complex(3.0, 1.0);
  m.rabi_s0 = Complex(3.0, 1.0);
  m.rabi_r0 = 2.0;
  m.g_r0 = m.g_s1 = 0.5;
  m.g_s0 = m.g_r1 = 0.7;
  m.delta_r = m.delta_s = 300.0;
  m.kappa_a = 0.3;
  m.kappa_b = 2.0;
  m.delta_a = 4.0;
  m.delta_b = 0.5;
  m.omega_1 = 0.8;
  m.omega_1p = 0.1;
  const auto eff = derive_effective(m);

  const double sqrt_n = 20.0;
  const double la = sqrt_n * std::abs(m.rabi_r1) * 0.5 / 300.0;
  const double lb = sqrt_n * 2.0 * 0.7 / 600.0;
  CHECK(std::abs(eff.lambda_a) == Approx(la));
  CHECK(std::abs(eff.lambda_b) == Approx(lb));
  CHECK(eff.lambda == Approx(2.0 * la * la * 4.0 / (0.09 + 16.0)));
  CHECK(eff.gamma_a == Approx(la * la * 0.3 / (0.09 + 16.0)));
  CHECK(eff.gamma_b == Approx(lb * lb * 2.0 / (4.0 + 0.25)));
  const double omega0 = std::norm(m.rabi_r1) / 1200.0 - 4.0 / 1200.0 - std::norm(m.rabi_s0) / 1200.0 +
                        0.8 - 0.1;
  CHECK(eff.omega_0 == Approx(omega0));
  CHECK(eff.h == Approx(-omega0 / 2.0));
  CHECK(eff.delta_a_minus == Approx(0.25 / 600.0 - 0.25 / 600.0));
  CHECK(eff.delta_b_plus == Approx(0.49 / 600.0 + 0.49 / 600.0));
  CHECK(eff.warnings.empty());
}

TEST_CASE("mismatched mode-a rates raise a warning") {
  MicroParams m = transmission_example_micro(0.5);
  m.rabi_s0 *= 1.1;
  const auto eff = derive_effective(m);
  CHECK(eff.lambda_a_mismatch > 1e-6);
  CHECK_FALSE(eff.warnings.empty());
}

TEST_CASE("probe-transmission example ratios") {
  for (double h : {-0.6, 0.05, 0.5, 1.3}) {
    const auto eff = derive_effective(transmission_example_micro(h));
    CHECK(eff.h / eff.lambda == Approx(h).epsilon(1e-12));
    CHECK(std::abs(eff.gamma_a / eff.lambda - 0.0100) <= 1e-6);
    CHECK(std::abs(eff.gamma_b / eff.lambda - 0.0512) <= 1e-4);
    // kappa_a/(2 delta_a) and 0.1024 (1 + (kappa_a/delta_a)^2)/2 by hand.
    CHECK(eff.gamma_a / eff.lambda == Approx(0.01).epsilon(1e-12));
    CHECK(eff.gamma_b / eff.lambda == Approx(0.1024 * 1.0004 / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("validation") {
  MicroParams m = transmission_example_micro(0.5);
  CHECK_NOTHROW(m.validate());
  MicroParams bad = m;
  bad.kappa_a = -1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = m;
  bad.delta_r = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad = m;
  bad.n_atoms = 0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS(make_effective(0.5, 0.0, 0.0, 0.0, 10), DomainError);
  CHECK_THROWS_AS(make_effective(0.5, 1.0, -0.1, 0.0, 10), DomainError);
}

TEST_CASE("validity report") {
  const auto report = validity_report(transmission_example_micro(0.5));
  CHECK(report.checks.size() >= 6);
  for (const auto& c : report.checks) CHECK(c.threshold == 10.0);
  MicroParams m = transmission_example_micro(0.5);
  m.delta_r = m.delta_s = 5.0;
  const auto poor = validity_report(m);
  CHECK_FALSE(poor.all_passed());
}

TEST_CASE("bundled experimental parameter file") {
  std::ifstream in(DLMG_DATA_DIR "/li6_ring_cavity.json");
  REQUIRE(in.good());
  const auto doc = nlohmann::json::parse(in);
  const Units units = parse_units(doc.at("units").get<std::string>());
  const auto eff = derive_effective(micro_from_json(doc, units));
  const double ga = from_internal(eff.gamma_a, units);
  const double gb = from_internal(eff.gamma_b, units);
  CHECK(std::abs(ga - 0.25) / 0.25 < 0.02);
  CHECK(std::abs(gb - 2.5) / 2.5 < 0.02);
  CHECK(eff.gamma_b < eff.lambda);
}

TEST_CASE("JSON mapping") {
  const MicroParams m = transmission_example_micro(0.3);
  const auto doc = micro_to_json(m, Units::kTwoPiKHz);
  const MicroParams back = micro_from_json(doc, Units::kTwoPiKHz);
  CHECK(back.delta_r == Approx(m.delta_r));
  CHECK(std::abs(back.rabi_r1 - m.rabi_r1) < 1e-12);
  CHECK(back.n_atoms == m.n_atoms);

  auto missing = doc;
  missing.erase("rabi_r1");
  try {
    micro_from_json(missing, Units::kTwoPiKHz);
    FAIL("expected an error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("rabi_r1") != std::string::npos);
  }

  auto complex_entry = doc;
  complex_entry["g_r0"] = {1.0, 2.0};
  CHECK(micro_from_json(complex_entry, Units::kDimensionless).g_r0 == Complex(1.0, 2.0));
  complex_entry["g_r0"] = "one";
  CHECK_THROWS_AS(micro_from_json(complex_entry, Units::kDimensionless), DomainError);

  const auto cf = critical_to_json(critical_fields(1.0, 2.0), Units::kDimensionless);
  CHECK(cf.at("exists") == false);
}
