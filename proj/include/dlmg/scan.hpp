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

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dlmg/params.hpp"

namespace dlmg {

inline constexpr const char* kToolVersion = "1.0.0";

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { kCsv, kJson };

OutputFormat parse_format(const std::string& name);

/// A rectangular result table. Cells are numbers or short strings.
struct Table {
  using Cell = std::variant<double, long, std::string>;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Floats use %.12g; non-finite values are written as inf, -inf or nan.
std::string to_csv(const Table& table);
/// {"columns": [...], "rows": [[...], ...]}; non-finite values become null.
nlohmann::json to_json(const Table& table);
/// Writes `table` to dir/stem.csv or dir/stem.json; returns the file name.
std::string write_table(const Table& table, const std::string& dir, const std::string& stem,
                        OutputFormat format);

struct ScanOutputs {
  bool moments = false;
  bool entanglement = false;
  bool eigenvalues = false;
  bool semiclassical = false;
  bool spectrum = false;
};

/// Parses a comma-separated list of output names.
ScanOutputs parse_outputs(const std::string& list);

/// Scans are dimensionless with lambda = 1.
struct ScanConfig {
  double h_start = -0.6;
  double h_stop = 1.4;
  int h_count = 201;
  std::vector<int> n_atoms_list{25};
  double gamma_a = 0.01;
  double gamma_b = 0.2;
  ScanOutputs outputs;
  std::vector<double> spectrum_h_values;
  double lambda_a_over_delta_a = 0.1;
  double nu_start = -4.0;
  double nu_stop = 4.0;
  int nu_count = 2001;
  int refine_levels = 4;
  std::string output_path = ".";
  OutputFormat format = OutputFormat::kCsv;
  int jobs = 1;
  bool probe_null_space = true;

  /// Throws DomainError when the configuration is invalid.
  void validate() const;
  std::vector<double> h_grid() const;
};

struct ScanReport {
  std::vector<std::string> files;
  nlohmann::json manifest;
};

/// Runs every requested output and writes the tables plus manifest.json
/// into config.output_path. Solver failures are recorded per row.
ScanReport run_scan(const ScanConfig& config);

/// Derived parameters, critical fields and validity checks for a
/// microscopic parameter file. `units_override`, when non-empty, replaces
/// the file's "units" field.
nlohmann::json run_params(const std::string& path, const std::string& units_override = "");

/// Evaluates fn(i) for i in [0, count) on up to `jobs` threads. Results are
/// stored by index.
template <class T, class Fn>
std::vector<T> parallel_map(int count, int jobs, Fn fn);

// Table builders shared by run_scan and the CLI subcommands.
Table moments_table(const std::vector<double>& h_grid, int n_atoms, double gamma_a,
                    double gamma_b, int jobs, bool probe_null_space, Table* entanglement,
                    std::vector<double>* seconds);
Table eigenvalue_table(const std::vector<double>& h_grid, double gamma_a, double gamma_b);
Table bifurcation_table(const std::vector<double>& h_grid, double gamma_b);
Table spectrum_table(double h_over_lambda, double lambda_a_over_delta_a, double nu_start,
                     double nu_stop, int nu_count, int refine_levels);

}  // namespace dlmg

#include "dlmg/scan_impl.hpp"
