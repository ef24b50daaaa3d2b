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

#include "dlmg/master_equation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/SparseLU>
#include <unsupported/Eigen/KroneckerProduct>

#include "dlmg/ode.hpp"

namespace dlmg {

namespace {

SparseC kron(const SparseC& a, const SparseC& b) {
  SparseC out;
  out = Eigen::kroneckerProduct(a, b).eval();
  return out;
}

SparseC identity(int d) {
  SparseC id(d, d);
  id.setIdentity();
  return id;
}

// rate * D[A] in row-major vectorized form.
SparseC dissipator(const SparseC& a, double rate, const SparseC& id) {
  const SparseC a_conj = a.conjugate();
  const SparseC ada = SparseC(a.adjoint()) * a;
  const SparseC ada_t = ada.transpose();
  SparseC d = 2.0 * kron(a, a_conj) - kron(ada, id) - kron(id, ada_t);
  return rate * d;
}

}  // namespace

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  DensityMatrix rho;
  rho.n_atoms = psi.n_atoms;
  rho.matrix = psi.amplitudes * psi.amplitudes.adjoint();
  return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(int n_atoms) {
  DensityMatrix rho;
  rho.n_atoms = n_atoms;
  rho.matrix = CMatrix::Identity(n_atoms + 1, n_atoms + 1) / double(n_atoms + 1);
  return rho;
}

Liouvillian build_liouvillian(const EffectiveParams& params, int n_atoms) {
  if (!(params.lambda > 0.0)) throw DomainError("build_liouvillian: lambda must be positive");
  if (params.gamma_a < 0.0 || params.gamma_b < 0.0)
    throw DomainError("build_liouvillian: decay rates must be non-negative");
  Liouvillian liou;
  liou.params = params;
  liou.params.n_atoms = n_atoms;
  liou.n_atoms = n_atoms;
  liou.ops = build_spin_operators(n_atoms);
  liou.hamiltonian = build_lmg_hamiltonian(liou.ops, params.h, params.lambda, 0.0);

  const int d = n_atoms + 1;
  const SparseC id = identity(d);
  const SparseC h_t = liou.hamiltonian.transpose();
  SparseC l = Complex(0.0, -1.0) * (kron(liou.hamiltonian, id) - kron(id, h_t));

  const double n = n_atoms;
  // D[2 Jx] = 4 D[Jx].
  if (params.gamma_a > 0.0) l += dissipator(liou.ops.jx, 4.0 * params.gamma_a / n, id);
  if (params.gamma_b > 0.0) l += dissipator(liou.ops.jplus, params.gamma_b / n, id);
  l.prune(Complex(0.0));
  l.makeCompressed();
  liou.superop = std::move(l);
  return liou;
}

CVector vectorize(const CMatrix& rho) {
  const auto d = rho.rows();
  CVector v(d * d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) v[i * d + j] = rho(i, j);
  return v;
}

CMatrix unvectorize(const CVector& v, int dim) {
  CMatrix rho(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) rho(i, j) = v[i * dim + j];
  return rho;
}

CMatrix apply_liouvillian(const Liouvillian& liou, const CMatrix& rho) {
  return unvectorize(liou.superop * vectorize(rho), liou.dim());
}

double norm_inf(const SparseC& a) {
  RVector rows = RVector::Zero(a.rows());
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseC::InnerIterator it(a, k); it; ++it) rows[it.row()] += std::abs(it.value());
  return rows.size() ? rows.maxCoeff() : 0.0;
}

namespace {

template <typename Ordering>
bool solve_with(const SparseC& a, const CVector& b, int refinement, CVector& x,
                std::string& message) {
  Eigen::SparseLU<SparseC, Ordering> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() != Eigen::Success) {
    message = "sparse LU factorization failed: " + lu.lastErrorMessage();
    return false;
  }
  x = lu.solve(b);
  for (int it = 0; it < refinement; ++it) {
    const CVector r = b - a * x;
    if (r.lpNorm<Eigen::Infinity>() <= 1e-15 * std::max(1.0, x.lpNorm<Eigen::Infinity>())) break;
    x += lu.solve(r);
  }
  return x.allFinite();
}

// Ritz values of L closest to zero on the parity-even sector, obtained by
// block inverse iteration with a small positive shift (the spectrum of L
// lies in the closed left half plane, so L - shift is invertible).
std::vector<Complex> smallest_ritz_values(const SparseC& l, int dim, int block, double lnorm) {
  std::vector<int> even;
  std::vector<int> map(l.rows(), -1);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      if (z2_parity(i, j) == 1) {
        map[i * dim + j] = static_cast<int>(even.size());
        even.push_back(i * dim + j);
      }
  const int ne = static_cast<int>(even.size());
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(l.nonZeros() / 2 + ne);
  for (int k = 0; k < l.outerSize(); ++k)
    for (SparseC::InnerIterator it(l, k); it; ++it) {
      const int r = map[it.row()];
      const int c = map[it.col()];
      if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
    }
  SparseC le(ne, ne);
  le.setFromTriplets(trip.begin(), trip.end());
  le.makeCompressed();

  const double shift = 1e-7 * std::max(lnorm, 1e-300);
  SparseC shifted = le;
  for (int i = 0; i < ne; ++i) shifted.coeffRef(i, i) -= shift;
  Eigen::SparseLU<SparseC> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success) return {Complex(0.0), Complex(0.0)};

  const int p = std::min(block, ne);
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> g;
  CMatrix q(ne, p);
  for (int i = 0; i < ne; ++i)
    for (int c = 0; c < p; ++c) q(i, c) = Complex(g(rng), g(rng));
  std::vector<Complex> ritz, previous;
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::HouseholderQR<CMatrix> qr(q);
    q = qr.householderQ() * CMatrix::Identity(ne, p);
    const CMatrix lq = le * q;
    const CMatrix small = q.adjoint() * lq;
    Eigen::ComplexEigenSolver<CMatrix> es(small, false);
    ritz.assign(es.eigenvalues().data(), es.eigenvalues().data() + p);
    std::sort(ritz.begin(), ritz.end(),
              [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
    if (iter > 3 && previous.size() == ritz.size()) {
      double change = 0.0;
      for (size_t k = 0; k < ritz.size(); ++k) change = std::max(change, std::abs(ritz[k] - previous[k]));
      if (change <= 1e-12 * lnorm) break;
    }
    previous = ritz;
    CMatrix next(ne, p);
    for (int c = 0; c < p; ++c) next.col(c) = lu.solve(q.col(c));
    q = next;
  }
  return ritz;
}

}  // namespace

SteadyStateResult steady_state(const Liouvillian& liou, const SteadyStateOptions& opts) {
  const int d = liou.dim();
  const SparseC& l = liou.superop;
  const double lnorm = norm_inf(l);
  SteadyStateResult result;

  if (opts.probe_null_space) {
    result.smallest_eigenvalues = smallest_ritz_values(l, d, 4, lnorm);
    int count = 0;
    for (const auto& mu : result.smallest_eigenvalues)
      if (std::abs(mu) <= opts.null_tol * lnorm) ++count;
    result.null_dimension = count;
    if (count > 1) {
      std::ostringstream os;
      os << "steady state is not unique: at least " << count
         << " zero modes of the Liouvillian (|mu| <= " << opts.null_tol * lnorm << ")";
      throw DegenerateSteadyStateError(count, os.str());
    }
  }

  // Row 0 is the equation for rho(0,0); the left zero vector of L (the trace)
  // has support there, so replacing it leaves a regular system.
  std::vector<Eigen::Triplet<Complex>> trip;
  trip.reserve(l.nonZeros() + d);
  for (int k = 0; k < l.outerSize(); ++k)
    for (SparseC::InnerIterator it(l, k); it; ++it)
      if (it.row() != 0) trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int i = 0; i < d; ++i) trip.emplace_back(0, i * d + i, 1.0);
  SparseC a(l.rows(), l.cols());
  a.setFromTriplets(trip.begin(), trip.end());
  a.makeCompressed();
  CVector b = CVector::Zero(l.rows());
  b[0] = 1.0;

  auto scaled_residual = [&](const CVector& x) {
    const double xn = x.lpNorm<Eigen::Infinity>();
    if (!(xn > 0.0) || !x.allFinite()) return std::numeric_limits<double>::infinity();
    return (l * x).lpNorm<Eigen::Infinity>() / (lnorm * xn);
  };

  CVector x;
  std::string message;
  bool ok = solve_with<Eigen::COLAMDOrdering<int>>(a, b, 0, x, message);
  double res = ok ? scaled_residual(x) : std::numeric_limits<double>::infinity();
  if (!ok || res > opts.residual_tol) {
    result.log.push_back("COLAMD solve residual " + std::to_string(res) +
                         "; retrying with refinement");
    ok = solve_with<Eigen::COLAMDOrdering<int>>(a, b, opts.refinement_steps, x, message);
    res = ok ? scaled_residual(x) : std::numeric_limits<double>::infinity();
  }
  if (!ok || res > opts.residual_tol) {
    result.log.push_back("retrying with AMD ordering");
    ok = solve_with<Eigen::AMDOrdering<int>>(a, b, opts.refinement_steps, x, message);
    res = ok ? scaled_residual(x) : std::numeric_limits<double>::infinity();
  }
  if (!ok || res > opts.residual_tol) {
    std::ostringstream os;
    os << "steady-state solve failed (scaled residual " << res << " > " << opts.residual_tol
       << ")";
    if (!message.empty()) os << ": " << message;
    os << "; near a critical point try a looser residual tolerance";
    throw SolverError(SolverStatus::kSingular, os.str());
  }

  CMatrix rho = unvectorize(x, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace();
  result.rho.matrix = std::move(rho);
  result.rho.n_atoms = liou.n_atoms;
  result.residual = scaled_residual(vectorize(result.rho.matrix));
  return result;
}

EvolveResult evolve(const Liouvillian& liou, const DensityMatrix& rho0, double t_final,
                    double tol, const std::vector<double>& sample_times) {
  if (t_final < 0.0) throw DomainError("evolve: t_final must be non-negative");
  if (!(tol > 0.0)) throw DomainError("evolve: tol must be positive");
  if (rho0.dim() != liou.dim()) throw DomainError("evolve: dimension mismatch");
  for (size_t k = 0; k < sample_times.size(); ++k)
    if (sample_times[k] < 0.0 || sample_times[k] > t_final ||
        (k > 0 && sample_times[k] < sample_times[k - 1]))
      throw DomainError("evolve: sample times must be ascending within [0, t_final]");

  EvolveResult out;
  out.rho = rho0;
  if (t_final == 0.0) {
    for (double ts : sample_times) {
      out.times.push_back(ts);
      out.samples.push_back(rho0);
    }
    return out;
  }

  const int d = liou.dim();
  const SparseC& l = liou.superop;
  DormandPrince<CVector> stepper(
      [&l](double, const CVector& y, CVector& dy) { dy = l * y; }, tol, tol);
  auto symmetrize = [d](double, CVector& y) {
    for (int i = 0; i < d; ++i) {
      y[i * d + i] = y[i * d + i].real();
      for (int j = i + 1; j < d; ++j) {
        const Complex avg = 0.5 * (y[i * d + j] + std::conj(y[j * d + i]));
        y[i * d + j] = avg;
        y[j * d + i] = std::conj(avg);
      }
    }
  };

  CVector y = vectorize(rho0.matrix);
  double t = 0.0;
  std::vector<double> stops = sample_times;
  stops.push_back(t_final);
  for (size_t k = 0; k < stops.size(); ++k) {
    const double target = stops[k];
    if (target > t) {
      const OdeStats st = stepper.integrate(y, t, target, symmetrize);
      out.steps += st.accepted;
      t = target;
    }
    if (k + 1 < stops.size()) {
      out.times.push_back(target);
      out.samples.push_back(DensityMatrix{unvectorize(y, d), liou.n_atoms});
    }
  }

  CMatrix rho = unvectorize(y, d);
  const Complex tr = rho.trace();
  out.trace_drift = std::abs(tr - 1.0);
  if (out.trace_drift > 0.0) {
    rho /= tr.real();
    out.renormalized = true;
    std::ostringstream os;
    os << "renormalized trace (drift " << out.trace_drift << ")";
    out.log.push_back(os.str());
  }
  out.rho = DensityMatrix{std::move(rho), liou.n_atoms};
  return out;
}

Complex expectation(const CMatrix& rho, const SparseC& op) {
  Complex acc = 0.0;
  for (int k = 0; k < op.outerSize(); ++k)
    for (SparseC::InnerIterator it(op, k); it; ++it) acc += rho(it.col(), it.row()) * it.value();
  return acc;
}

MomentSet expectations(const DensityMatrix& rho, const SpinOperatorSet& ops) {
  if (rho.dim() != ops.dim())
    throw DomainError("expectations: density matrix dimension does not match operators");
  MomentSet m;
  m.n_atoms = ops.n_atoms;
  const CMatrix& r = rho.matrix;
  m.jx_mean = expectation(r, ops.jx).real();
  m.jy_mean = expectation(r, ops.jy).real();
  m.jz_mean = expectation(r, ops.jz).real();
  const SparseC xx = ops.jx * ops.jx;
  const SparseC yy = ops.jy * ops.jy;
  const SparseC zz = ops.jz * ops.jz;
  const SparseC xy = ops.jx * ops.jy;
  const SparseC xz = ops.jx * ops.jz;
  const SparseC yz = ops.jy * ops.jz;
  m.jx2 = expectation(r, xx).real();
  m.jy2 = expectation(r, yy).real();
  m.jz2 = expectation(r, zz).real();
  // <(AB + BA)/2> = Re <AB> for Hermitian A, B and Hermitian rho.
  m.jxjy_sym = expectation(r, xy).real();
  m.jxjz_sym = expectation(r, xz).real();
  m.jyjz_sym = expectation(r, yz).real();
  return m;
}

double purity(const DensityMatrix& rho) {
  return (rho.matrix * rho.matrix).trace().real();
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw DomainError("trace_distance: dimension mismatch");
  CMatrix diff = a.matrix - b.matrix;
  diff = 0.5 * (diff + diff.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double min_eigenvalue(const DensityMatrix& rho) {
  CMatrix h = 0.5 * (rho.matrix + rho.matrix.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double hermiticity_error(const DensityMatrix& rho) {
  return (rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace dlmg
