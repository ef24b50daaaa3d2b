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

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dlmg/fluctuations.hpp"
#include "dlmg/master_equation.hpp"
#include "dlmg/scan.hpp"
#include "dlmg/semiclassical.hpp"

namespace {

struct Range {
  double start = 0.0, stop = 0.0;
  int count = 0;
};

Range parse_range(const std::string& text, const std::string& flag) {
  std::stringstream ss(text);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c) )
    throw dlmg::DomainError(flag + " expects start:stop:count, got '" + text + "'");
  try {
    size_t pos = 0;
    Range r{std::stod(a), std::stod(b), std::stoi(c, &pos)};
    if (pos != c.size()) throw std::invalid_argument(c);
    if (r.count < 2) throw dlmg::DomainError(flag + ": count must be at least 2");
    return r;
  } catch (const std::logic_error&) {
    throw dlmg::DomainError(flag + " expects start:stop:count, got '" + text + "'");
  }
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw dlmg::IoError("cannot create output directory '" + dir + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dissipative LMG model: steady states, fluctuations and spectra"};
  app.require_subcommand(1);

  double gamma_a = 0.01, gamma_b = 0.2;
  std::vector<int> n_list{25};
  std::string h_range = "-0.6:1.4:201";
  std::string out_dir = "out";
  std::string format = "csv";
  int jobs = 1;

  auto common = [&](CLI::App* sub, bool with_n, bool with_h_range) {
    sub->add_option("--gamma-a", gamma_a, "Gamma_a / lambda")->capture_default_str();
    sub->add_option("--gamma-b", gamma_b, "Gamma_b / lambda")->capture_default_str();
    if (with_n) sub->add_option("--n", n_list, "Atom numbers")->capture_default_str();
    if (with_h_range)
      sub->add_option("--h-range", h_range, "h/lambda grid start:stop:count")->capture_default_str();
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--format", format, "csv or json")->capture_default_str();
    sub->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
  };

  auto* params = app.add_subcommand("params", "Derive effective parameters from a microscopic file");
  std::string param_file, units_override;
  params->add_option("file", param_file, "Parameter JSON file")->required();
  params->add_option("--units", units_override, "Override the file's units (dimensionless|2pi_kHz)");

  auto* scan = app.add_subcommand("scan", "Scan h/lambda and write the selected outputs");
  common(scan, true, true);
  std::string outputs = "moments,entanglement,semiclassical,eigenvalues";
  std::vector<double> spectrum_h;
  bool no_probe = false;
  scan->add_option("--outputs", outputs, "Comma list of moments,entanglement,eigenvalues,semiclassical,spectrum")
      ->capture_default_str();
  scan->add_option("--spectrum-h", spectrum_h, "h/lambda values for spectra");
  scan->add_flag("--no-null-probe", no_probe, "Skip the steady-state zero-mode probe");

  auto* spectrum = app.add_subcommand("spectrum", "Probe transmission of mode b");
  common(spectrum, false, false);
  std::vector<double> h_values;
  std::string nu_range = "-4:4:2001";
  double la_ratio = 0.1;
  int refine = 4;
  spectrum->add_option("--h-values", h_values, "h/lambda values")->required();
  spectrum->add_option("--nu-range", nu_range, "nu/lambda grid start:stop:count")->capture_default_str();
  spectrum->add_option("--lambda-a-over-delta-a", la_ratio, "|lambda_a|/delta_a")->capture_default_str();
  spectrum->add_option("--refine", refine, "Extremum refinement levels")->capture_default_str();

  auto* semi = app.add_subcommand("semiclassical", "Fixed points, stability and bifurcations");
  common(semi, false, true);

  auto* evolve = app.add_subcommand("evolve", "Time evolution of the master equation");
  common(evolve, true, false);
  double h_evolve = 0.5, t_final = 50.0, tol = 1e-9;
  int samples = 51;
  std::string initial = "pole";
  evolve->add_option("--h-value", h_evolve, "h/lambda")->capture_default_str();
  evolve->add_option("--t-final", t_final, "Final time in units of 1/lambda")->capture_default_str();
  evolve->add_option("--tol", tol, "Integrator tolerance")->capture_default_str();
  evolve->add_option("--samples", samples, "Number of output times")->capture_default_str();
  evolve->add_option("--initial", initial, "pole or mixed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const dlmg::OutputFormat fmt = dlmg::parse_format(format);
    if (jobs < 1) throw dlmg::DomainError("--jobs must be at least 1");

    if (*params) {
      const nlohmann::json report = dlmg::run_params(param_file, units_override);
      std::cout << report.dump(2) << '\n';
      return 0;
    }

    if (*scan) {
      dlmg::ScanConfig cfg;
      const Range r = parse_range(h_range, "--h-range");
      cfg.h_start = r.start;
      cfg.h_stop = r.stop;
      cfg.h_count = r.count;
      cfg.n_atoms_list = n_list;
      cfg.gamma_a = gamma_a;
      cfg.gamma_b = gamma_b;
      cfg.outputs = dlmg::parse_outputs(outputs);
      cfg.spectrum_h_values = spectrum_h;
      cfg.output_path = out_dir;
      cfg.format = fmt;
      cfg.jobs = jobs;
      cfg.probe_null_space = !no_probe;
      const auto report = dlmg::run_scan(cfg);
      for (const auto& f : report.files) std::cout << out_dir << '/' << f << '\n';
      std::cout << out_dir << "/manifest.json\n";
      return 0;
    }

    if (*spectrum) {
      const Range r = parse_range(nu_range, "--nu-range");
      ensure_dir(out_dir);
      for (double h : h_values) {
        const auto t = dlmg::spectrum_table(h, la_ratio, r.start, r.stop, r.count, refine);
        std::ostringstream stem;
        stem << "spectrum_h" << h;
        std::cout << out_dir << '/' << dlmg::write_table(t, out_dir, stem.str(), fmt) << '\n';
      }
      return 0;
    }

    if (*semi) {
      const Range r = parse_range(h_range, "--h-range");
      ensure_dir(out_dir);
      const auto grid = dlmg::uniform_grid(r.start, r.stop, r.count);
      std::cout << out_dir << '/'
                << dlmg::write_table(dlmg::bifurcation_table(grid, gamma_b), out_dir, "semiclassical", fmt)
                << '\n';
      for (const auto& b : dlmg::find_bifurcations(r.start, r.stop, r.count, 1.0, gamma_b))
        std::cout << "stability change at h/lambda = " << b.h << " (" << b.stable_before << " -> "
                  << b.stable_after << " stable)\n";
      return 0;
    }

    if (*evolve) {
      if (n_list.size() != 1) throw dlmg::DomainError("evolve takes a single --n");
      if (samples < 2) throw dlmg::DomainError("--samples must be at least 2");
      const int n = n_list.front();
      ensure_dir(out_dir);
      const auto liou = dlmg::build_liouvillian(dlmg::make_effective(h_evolve, 1.0, gamma_a, gamma_b, n), n);
      dlmg::DensityMatrix rho0;
      if (initial == "pole")
        rho0 = dlmg::DensityMatrix::from_pure(dlmg::dicke_state(0, n));
      else if (initial == "mixed")
        rho0 = dlmg::DensityMatrix::maximally_mixed(n);
      else
        throw dlmg::DomainError("--initial must be pole or mixed");
      const auto times = dlmg::uniform_grid(0.0, t_final, samples);
      const auto res = dlmg::evolve(liou, rho0, t_final, tol, times);
      dlmg::Table t;
      t.columns = {"t_lambda", "jz_over_j", "jx2_over_j2", "jy2_over_j2", "purity"};
      const double j = 0.5 * n;
      for (size_t i = 0; i < res.samples.size(); ++i) {
        const auto m = dlmg::expectations(res.samples[i], liou.ops);
        t.rows.push_back({res.times[i], m.jz_mean / j, m.jx2 / (j * j), m.jy2 / (j * j),
                          dlmg::purity(res.samples[i])});
      }
      std::cout << out_dir << '/' << dlmg::write_table(t, out_dir, "evolve_N" + std::to_string(n), fmt)
                << '\n';
      for (const auto& line : res.log) std::cerr << line << '\n';
      return 0;
    }
  } catch (const dlmg::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
