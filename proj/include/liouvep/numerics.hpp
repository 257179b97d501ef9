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

#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace liouvep {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Relative singular-value cutoff used by min_norm_solve when none is given.
inline constexpr double kDefaultRankTol = 1e-9;

/// Residual bound (relative to the matrix norm) every eigenpair must meet.
inline constexpr double kEigenResidualTol = 1e-10;

class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double matrix_norm, int iterations)
      : std::runtime_error(what), matrix_norm_(matrix_norm), iterations_(iterations) {}

  double matrix_norm() const { return matrix_norm_; }
  int iterations() const { return iterations_; }

 private:
  double matrix_norm_;
  int iterations_;
};

struct EigenResult {
  std::vector<Complex> eigenvalues;
  std::vector<ComplexVector> right_eigenvectors;
  std::vector<double> residual_norms;
};

struct SolveResult {
  ComplexVector x;
  double residual = 0.0;
  Eigen::Index rank = 0;
  // false when the least-squares residual exceeds 1e-6 * |b|
  bool consistent = true;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Column-stacking vectorization, so that vec(A X B) = kron(B^T, A) vec(X).
ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, Eigen::Index d);

/// Rotates v so its largest-magnitude component is real and positive. Ties on
/// magnitude (to 1e-8 relative) go to the lowest index.
void fix_phase(ComplexVector& v);

/// Full eigendecomposition of a general (non-normal) complex matrix.
///
/// Eigenvectors are unit norm and phase-fixed. Each pair is checked against
/// |M v - lambda v| <= 1e-10 |M|; pairs that miss the bound get a few steps of
/// shifted inverse iteration, and NonConvergenceError is thrown if that also
/// fails. Near an exceptional point eigenvectors can be almost parallel; this
/// is not treated as an error.
EigenResult eigendecompose(const ComplexMatrix& m);

/// Eigenvalues computed in extended (long double) precision. Used where
/// eigenvalue clusters at higher-order defective points must be resolved
/// below the double-precision eps^(1/k) floor.
std::vector<Complex> eigenvalues_extended(const ComplexMatrix& m);

/// Matrix exponential (scaling and squaring with Pade approximant).
ComplexMatrix expm(const ComplexMatrix& m);

/// Minimum-norm least-squares solution of a x = b with singular values below
/// tol * sigma_max discarded.
SolveResult min_norm_solve(const ComplexMatrix& a, const ComplexVector& b,
                           double tol = kDefaultRankTol);

/// Number of singular values above rel_tol * scale, where scale defaults to
/// sigma_max of m. Pass a reference scale when m may be numerically zero.
Eigen::Index numerical_rank(const ComplexMatrix& m, double rel_tol, double scale = -1.0);

bool all_finite(const ComplexMatrix& m);

}  // namespace liouvep
