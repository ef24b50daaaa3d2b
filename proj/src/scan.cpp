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

#include "dlmg/scan.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "dlmg/entanglement.hpp"
#include "dlmg/fluctuations.hpp"
#include "dlmg/master_equation.hpp"
#include "dlmg/semiclassical.hpp"

namespace dlmg {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string h_tag(double h) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", h);
  return buf;
}

}  // namespace

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw DomainError("unknown format '" + name + "' (expected csv or json)");
}

std::string to_csv(const Table& table) {
  std::ostringstream os;
  for (size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << '\n';
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>)
              os << format_double(v);
            else
              os << v;
          },
          row[i]);
    }
    os << '\n';
  }
  return os.str();
}

nlohmann::json to_json(const Table& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& cell : row) {
      std::visit(
          [&](const auto& v) {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, double>)
              r.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr));
            else
              r.push_back(v);
          },
          cell);
    }
    rows.push_back(std::move(r));
  }
  return {{"columns", table.columns}, {"rows", rows}};
}

std::string write_table(const Table& table, const std::string& dir, const std::string& stem,
                        OutputFormat format) {
  const std::string name = stem + (format == OutputFormat::kCsv ? ".csv" : ".json");
  const fs::path path = fs::path(dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  if (format == OutputFormat::kCsv)
    out << to_csv(table);
  else
    out << to_json(table).dump(1) << '\n';
  if (!out) throw IoError("write failed for '" + path.string() + "'");
  return name;
}

ScanOutputs parse_outputs(const std::string& list) {
  ScanOutputs o;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "moments") o.moments = true;
    else if (item == "entanglement") o.entanglement = true;
    else if (item == "eigenvalues") o.eigenvalues = true;
    else if (item == "semiclassical") o.semiclassical = true;
    else if (item == "spectrum") o.spectrum = true;
    else throw DomainError("unknown output '" + item + "'");
  }
  return o;
}

void ScanConfig::validate() const {
  if (h_count < 2) throw DomainError("h range needs count >= 2");
  if (!std::isfinite(h_start) || !std::isfinite(h_stop)) throw DomainError("h range must be finite");
  if (nu_count < 2 || !std::isfinite(nu_start) || !std::isfinite(nu_stop))
    throw DomainError("probe frequency range must be finite with count >= 2");
  if (!(gamma_a >= 0.0) || !(gamma_b >= 0.0)) throw DomainError("rates must be non-negative");
  if (jobs < 1) throw DomainError("jobs must be at least 1");
  for (int n : n_atoms_list)
    if (n < 1) throw DomainError("atom numbers must be positive");
  if (outputs.spectrum && spectrum_h_values.empty())
    throw DomainError("spectrum output needs at least one h value");
}

std::vector<double> ScanConfig::h_grid() const { return uniform_grid(h_start, h_stop, h_count); }

Table moments_table(const std::vector<double>& h_grid, int n_atoms, double gamma_a,
                    double gamma_b, int jobs, bool probe_null_space, Table* entanglement,
                    std::vector<double>* seconds) {
  struct Point {
    MomentSet m;
    double purity = kNaN, residual = kNaN, seconds = 0.0;
    std::string status = "ok";
  };
  const int count = static_cast<int>(h_grid.size());
  SteadyStateOptions opts;
  opts.probe_null_space = probe_null_space;
  const auto points = parallel_map<Point>(count, jobs, [&](int i) {
    Point p;
    const auto start = std::chrono::steady_clock::now();
    try {
      const Liouvillian liou =
          build_liouvillian(make_effective(h_grid[i], 1.0, gamma_a, gamma_b, n_atoms), n_atoms);
      const SteadyStateResult ss = steady_state(liou, opts);
      p.m = expectations(ss.rho, liou.ops);
      p.purity = purity(ss.rho);
      p.residual = ss.residual;
    } catch (const DegenerateSteadyStateError&) {
      p.status = status_name(SolverStatus::kDegenerate);
    } catch (const SolverError& e) {
      p.status = status_name(e.status());
    }
    p.seconds = seconds_since(start);
    return p;
  });

  Table t;
  t.columns = {"h_over_lambda", "n_atoms", "jz_over_j", "jx2_over_j2", "jy2_over_j2",
               "jxjy_sym_over_j2", "purity", "residual", "status"};
  if (entanglement) {
    entanglement->columns = {"h_over_lambda", "n_atoms", "c_r", "c_r_raw", "phi_star"};
    entanglement->rows.clear();
  }
  const double j = 0.5 * n_atoms;
  for (int i = 0; i < count; ++i) {
    const Point& p = points[i];
    const bool ok = p.status == "ok";
    t.rows.push_back({h_grid[i], static_cast<long>(n_atoms), ok ? p.m.jz_mean / j : kNaN,
                      ok ? p.m.jx2 / (j * j) : kNaN, ok ? p.m.jy2 / (j * j) : kNaN,
                      ok ? p.m.jxjy_sym / (j * j) : kNaN, p.purity, p.residual, p.status});
    if (entanglement) {
      EntanglementResult e{kNaN, kNaN, kNaN, n_atoms};
      if (ok) e = c_r(p.m);
      entanglement->rows.push_back(
          {h_grid[i], static_cast<long>(n_atoms), e.c_r, e.c_r_raw, e.phi_star});
    }
    if (seconds) seconds->push_back(p.seconds);
  }
  return t;
}

Table eigenvalue_table(const std::vector<double>& h_grid, double gamma_a, double gamma_b) {
  Table t;
  t.columns = {"h_over_lambda", "re_eig1", "im_eig1", "re_eig2", "im_eig2", "branch_id", "status"};
  // N only enters the reduced model through 1/N prefactors that the
  // linearization absorbs, so any value works here.
  const auto rows = fluctuation_eigenvalues(make_effective(0.0, 1.0, gamma_a, gamma_b, 1), h_grid);
  for (const auto& r : rows) {
    t.rows.push_back({r.h, r.eigenvalues[0].real(), r.eigenvalues[0].imag(),
                      r.eigenvalues[1].real(), r.eigenvalues[1].imag(), branch_name(r.branch_id),
                      status_name(r.status)});
  }
  return t;
}

Table bifurcation_table(const std::vector<double>& h_grid, double gamma_b) {
  Table t;
  t.columns = {"h_over_lambda", "branch_id", "x", "y", "z", "stable",
               "re_eig1", "im_eig1", "re_eig2", "im_eig2"};
  for (double h : h_grid) {
    for (const auto& b : fixed_points(h, 1.0, gamma_b)) {
      const auto& ev = b.jacobian_eigenvalues;
      t.rows.push_back({h, branch_name(b.branch_id), b.state.x, b.state.y, b.state.z,
                        static_cast<long>(b.stable), ev[0].real(), ev[0].imag(), ev[1].real(),
                        ev[1].imag()});
    }
  }
  return t;
}

Table spectrum_table(double h_over_lambda, double lambda_a_over_delta_a, double nu_start,
                     double nu_stop, int nu_count, int refine_levels) {
  const MicroParams micro = transmission_example_micro(h_over_lambda, lambda_a_over_delta_a);
  const EffectiveParams eff = derive_effective(micro);
  const SteadyStateBranch branch = stable_branch(eff.h, eff.lambda, eff.gamma_b);
  std::vector<double> grid = uniform_grid(nu_start, nu_stop, nu_count);
  for (double& nu : grid) nu *= eff.lambda;
  const SpectrumResult res =
      transmission_spectrum_refined(micro, branch, 1e-3 * micro.kappa_b, grid, refine_levels);
  Table t;
  t.columns = {"nu_over_lambda", "transmission"};
  for (size_t i = 0; i < res.probe_frequencies.size(); ++i)
    t.rows.push_back({res.probe_frequencies[i] / eff.lambda, res.transmission[i]});
  return t;
}

ScanReport run_scan(const ScanConfig& config) {
  config.validate();
  std::error_code ec;
  fs::create_directories(config.output_path, ec);
  if (ec || !fs::is_directory(config.output_path))
    throw IoError("cannot create output directory '" + config.output_path + "'");

  ScanReport report;
  nlohmann::json& man = report.manifest;
  man["tool"] = "dlmg";
  man["version"] = kToolVersion;
  man["units"] = "lambda";
  man["effective_params"] = {{"lambda", 1.0},
                             {"gamma_a", config.gamma_a},
                             {"gamma_b", config.gamma_b},
                             {"n_atoms", config.n_atoms_list}};
  man["h_range"] = {{"start", config.h_start}, {"stop", config.h_stop}, {"count", config.h_count}};
  man["critical_fields"] = critical_to_json(critical_fields(1.0, config.gamma_b), Units::kDimensionless);
  man["format"] = config.format == OutputFormat::kCsv ? "csv" : "json";
  man["jobs"] = config.jobs;
  nlohmann::json timings = nlohmann::json::object();
  nlohmann::json failures = nlohmann::json::array();

  const std::vector<double> grid = config.h_grid();
  const auto& out = config.outputs;
  if (out.moments || out.entanglement) {
    for (int n : config.n_atoms_list) {
      Table ent;
      std::vector<double> secs;
      const Table mom = moments_table(grid, n, config.gamma_a, config.gamma_b, config.jobs,
                                      config.probe_null_space,
                                      out.entanglement ? &ent : nullptr, &secs);
      const std::string suffix = "_N" + std::to_string(n);
      if (out.moments) {
        report.files.push_back(write_table(mom, config.output_path, "moments" + suffix, config.format));
        timings[report.files.back()] = secs;
      }
      if (out.entanglement) {
        report.files.push_back(
            write_table(ent, config.output_path, "entanglement" + suffix, config.format));
        timings[report.files.back()] = secs;
      }
    }
  }
  if (out.semiclassical) {
    const auto start = std::chrono::steady_clock::now();
    const Table t = bifurcation_table(grid, config.gamma_b);
    report.files.push_back(write_table(t, config.output_path, "semiclassical", config.format));
    timings[report.files.back()] = seconds_since(start);
    nlohmann::json bif = nlohmann::json::array();
    for (const auto& b : find_bifurcations(config.h_start, config.h_stop, config.h_count, 1.0,
                                           config.gamma_b))
      bif.push_back({{"h_over_lambda", b.h},
                     {"stable_before", b.stable_before},
                     {"stable_after", b.stable_after}});
    man["bifurcations"] = bif;
  }
  if (out.eigenvalues) {
    const auto start = std::chrono::steady_clock::now();
    const Table t = eigenvalue_table(grid, config.gamma_a, config.gamma_b);
    report.files.push_back(write_table(t, config.output_path, "eigenvalues", config.format));
    timings[report.files.back()] = seconds_since(start);
  }
  if (out.spectrum) {
    const MicroParams ref = transmission_example_micro(0.0, config.lambda_a_over_delta_a);
    man["spectrum_params"] = {{"micro", micro_to_json(ref, Units::kDimensionless)},
                              {"effective", effective_to_json(derive_effective(ref), Units::kDimensionless)},
                              {"lambda_a_over_delta_a", config.lambda_a_over_delta_a}};
    const int count = static_cast<int>(config.spectrum_h_values.size());
    struct Spec {
      Table table;
      std::string error;
      double seconds = 0.0;
    };
    const auto specs = parallel_map<Spec>(count, config.jobs, [&](int i) {
      Spec s;
      const auto start = std::chrono::steady_clock::now();
      try {
        s.table = spectrum_table(config.spectrum_h_values[i], config.lambda_a_over_delta_a,
                                 config.nu_start, config.nu_stop, config.nu_count,
                                 config.refine_levels);
      } catch (const std::exception& e) {
        s.error = e.what();
      }
      s.seconds = seconds_since(start);
      return s;
    });
    for (int i = 0; i < count; ++i) {
      const std::string stem = "spectrum_h" + h_tag(config.spectrum_h_values[i]);
      if (!specs[i].error.empty()) {
        failures.push_back({{"output", stem}, {"error", specs[i].error}});
        continue;
      }
      report.files.push_back(write_table(specs[i].table, config.output_path, stem, config.format));
      timings[report.files.back()] = specs[i].seconds;
    }
  }

  man["files"] = report.files;
  man["wall_clock_seconds"] = timings;
  man["failures"] = failures;
  const fs::path path = fs::path(config.output_path) / "manifest.json";
  std::ofstream mf(path);
  if (!mf) throw IoError("cannot open '" + path.string() + "' for writing");
  mf << man.dump(2) << '\n';
  if (!mf) throw IoError("write failed for '" + path.string() + "'");
  return report;
}

nlohmann::json run_params(const std::string& path, const std::string& units_override) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open parameter file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DomainError("parse error in '" + path + "': " + e.what());
  }
  Units units = Units::kDimensionless;
  if (!units_override.empty()) {
    units = parse_units(units_override);
  } else if (doc.is_object() && doc.contains("units")) {
    if (!doc["units"].is_string()) throw DomainError("field 'units' must be a string");
    units = parse_units(doc["units"].get<std::string>());
  }
  const MicroParams micro = micro_from_json(doc, units);
  const EffectiveParams eff = derive_effective(micro);
  nlohmann::json report;
  report["units"] = units_name(units);
  report["effective"] = effective_to_json(eff, units);
  report["critical_fields"] = critical_to_json(critical_fields(eff.lambda, eff.gamma_b), units);
  report["validity"] = validity_to_json(validity_report(micro), units);
  report["warnings"] = eff.warnings;
  return report;
}

}  // namespace dlmg
