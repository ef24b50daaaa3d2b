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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace dlmg {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using SparseC = Eigen::SparseMatrix<Complex>;

inline constexpr Complex kI{0.0, 1.0};

/// Thrown when an input lies outside the domain an operation accepts.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Failure modes of the numerical solvers. The names double as the
/// per-row `status` strings written by scans.
enum class SolverStatus { kOk, kSingular, kDegenerate, kDiverged };

inline const char* status_name(SolverStatus s) {
  switch (s) {
    case SolverStatus::kOk: return "ok";
    case SolverStatus::kSingular: return "singular";
    case SolverStatus::kDegenerate: return "degenerate";
    case SolverStatus::kDiverged: return "diverged";
  }
  return "unknown";
}

class SolverError : public std::runtime_error {
 public:
  SolverError(SolverStatus status, const std::string& what)
      : std::runtime_error(what), status_(status) {}
  SolverStatus status() const noexcept { return status_; }

 private:
  SolverStatus status_;
};

/// Non-unique steady state; carries the number of (near-)zero modes found.
class DegenerateSteadyStateError : public SolverError {
 public:
  DegenerateSteadyStateError(int null_dimension, const std::string& what)
      : SolverError(SolverStatus::kDegenerate, what),
        null_dimension_(null_dimension) {}
  int null_dimension() const noexcept { return null_dimension_; }

 private:
  int null_dimension_;
};

}  // namespace dlmg
