// Copyright 2026 The liouvep Authors
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

#include "liouvep/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace liouvep {

namespace {

constexpr int kMaxRefinementSteps = 4;

double residual_of(const ComplexMatrix& m, Complex lambda, const ComplexVector& v) {
  return (m * v - lambda * v).norm();
}

// Shifted inverse iteration on a single pair. The shift is nudged off the
// eigenvalue so the LU solve stays finite on exactly singular systems.
ComplexVector refine(const ComplexMatrix& m, Complex lambda, ComplexVector v,
                     double scale) {
  const Eigen::Index n = m.rows();
  const Complex shift =
      lambda + Complex(scale * 1e-13 + std::numeric_limits<double>::min(), 0.0);
  Eigen::FullPivLU<ComplexMatrix> lu(m - shift * ComplexMatrix::Identity(n, n));
  ComplexVector y = lu.solve(v);
  const double ny = y.norm();
  if (!std::isfinite(ny) || ny == 0.0) return v;
  return y / ny;
}

}  // namespace

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexVector vec(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("vec: matrix must be square");
  // Eigen storage is column-major, so a flat copy is column stacking.
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index d) {
  if (d <= 0 || v.size() != d * d)
    throw std::invalid_argument("unvec: vector length " + std::to_string(v.size()) +
                                " is not " + std::to_string(d) + "^2");
  return Eigen::Map<const ComplexMatrix>(v.data(), d, d);
}

void fix_phase(ComplexVector& v) {
  if (v.size() == 0) return;
  const double vmax = v.cwiseAbs().maxCoeff();
  if (vmax == 0.0) return;
  Eigen::Index pivot = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= vmax * (1.0 - 1e-8)) {
      pivot = i;
      break;
    }
  }
  v *= std::conj(v(pivot)) / std::abs(v(pivot));
}

EigenResult eigendecompose(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigendecompose: matrix must be square");
  if (!all_finite(m)) throw std::invalid_argument("eigendecompose: non-finite entries");

  const double norm = m.norm();
  EigenResult out;
  const Eigen::Index n = m.rows();
  if (n == 0) return out;

  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success)
    throw NonConvergenceError("eigendecompose: QR iteration did not converge", norm,
                              static_cast<int>(solver.getMaxIterations() * n));

  const double bound = kEigenResidualTol * std::max(norm, std::numeric_limits<double>::min());
  out.eigenvalues.reserve(n);
  out.right_eigenvectors.reserve(n);
  out.residual_norms.reserve(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex lambda = solver.eigenvalues()(k);
    ComplexVector v = solver.eigenvectors().col(k);
    v.normalize();
    double res = residual_of(m, lambda, v);
    int steps = 0;
    while (res > bound && steps < kMaxRefinementSteps) {
      v = refine(m, lambda, v, norm);
      res = residual_of(m, lambda, v);
      ++steps;
    }
    if (res > bound)
      throw NonConvergenceError("eigendecompose: eigenpair residual " + std::to_string(res) +
                                    " above bound after refinement",
                                norm, steps);
    fix_phase(v);
    out.eigenvalues.push_back(lambda);
    out.right_eigenvectors.push_back(std::move(v));
    out.residual_norms.push_back(res);
  }
  return out;
}

std::vector<Complex> eigenvalues_extended(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues_extended: matrix must be square");
  using LComplex = std::complex<long double>;
  using LMatrix = Eigen::Matrix<LComplex, Eigen::Dynamic, Eigen::Dynamic>;
  const LMatrix lm = m.cast<LComplex>();
  Eigen::ComplexEigenSolver<LMatrix> solver(lm, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw NonConvergenceError("eigenvalues_extended: QR iteration did not converge", m.norm(),
                              static_cast<int>(solver.getMaxIterations() * m.rows()));
  std::vector<Complex> out;
  out.reserve(m.rows());
  for (Eigen::Index k = 0; k < m.rows(); ++k) {
    const LComplex z = solver.eigenvalues()(k);
    out.emplace_back(static_cast<double>(z.real()), static_cast<double>(z.imag()));
  }
  return out;
}

ComplexMatrix expm(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("expm: matrix must be square");
  if (!all_finite(m)) throw std::invalid_argument("expm: non-finite entries");
  if (m.size() == 0) return m;
  return m.exp();
}

SolveResult min_norm_solve(const ComplexMatrix& a, const ComplexVector& b, double tol) {
  if (a.rows() != b.size())
    throw std::invalid_argument("min_norm_solve: row count does not match right-hand side");
  SolveResult out;
  out.x = ComplexVector::Zero(a.cols());

  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  const double smax = sigma.size() > 0 ? sigma(0) : 0.0;
  if (smax > 0.0) {
    const double cutoff = tol * smax;
    for (Eigen::Index k = 0; k < sigma.size(); ++k) {
      if (sigma(k) <= cutoff) break;
      const Complex coeff = svd.matrixU().col(k).dot(b) / sigma(k);
      out.x += coeff * svd.matrixV().col(k);
      ++out.rank;
    }
  }
  out.residual = (a * out.x - b).norm();
  out.consistent = out.residual <= 1e-6 * b.norm();
  return out;
}

Eigen::Index numerical_rank(const ComplexMatrix& m, double rel_tol, double scale) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const auto& sigma = svd.singularValues();
  if (sigma.size() == 0 || sigma(0) == 0.0) return 0;
  const double ref = scale > 0.0 ? scale : sigma(0);
  Eigen::Index r = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k)
    if (sigma(k) > rel_tol * ref) ++r;
  return r;
}

}  // namespace liouvep
