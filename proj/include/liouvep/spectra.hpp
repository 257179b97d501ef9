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

#include <functional>
#include <utility>
#include <vector>

#include "liouvep/lindblad.hpp"

namespace liouvep {

class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SpectralDecomposition {
  std::vector<Complex> eigenvalues;
  std::vector<ComplexMatrix> eigenmatrices;  // Frobenius norm 1, phase fixed
  std::vector<double> residuals;             // |L rho_i - lambda_i rho_i|_F
  Superoperator source;
};

/// Indices that sort eigenvalues by |Re| ascending, then Re descending, then
/// Im ascending. Comparisons are made on values quantized to tie_tol, so
/// numerically equal keys fall through to the next criterion.
std::vector<std::size_t> spectral_order(const std::vector<Complex>& eigenvalues,
                                        double tie_tol);

SpectralDecomposition decompose(const Superoperator& s);

/// Trace-one, Hermitian-symmetrized eigenmatrix of the eigenvalue closest to
/// zero. Throws PreconditionError if no eigenvalue is within 1e-10 |L| of 0,
/// which is what happens for hybrid generators with q < 1.
ComplexMatrix steady_state(const SpectralDecomposition& d);

/// |<a, b>_F| / (|a|_F |b|_F).
double frobenius_overlap(const ComplexMatrix& a, const ComplexMatrix& b);

/// Largest |a_i - b_pi(i)| under the matching pi that minimizes it. Exact for
/// up to 8 values, greedy beyond. Throws std::invalid_argument on size mismatch.
double multiset_distance(const std::vector<Complex>& a, const std::vector<Complex>& b);

/// Replaces each single-linkage group of values closer than tol by the group
/// mean. Defective eigenvalues split by O(eps^(1/k)) in floating point, while
/// the mean of the split cluster stays accurate to O(eps).
std::vector<Complex> merge_clusters(const std::vector<Complex>& values, double tol);

using ModelFamily = std::function<LindbladModel(double)>;

/// Eigenvalue branches followed across a parameter grid. Branch b at grid
/// point 0 is the b-th eigenvalue in spectral order; afterwards each branch
/// continues to the eigenmatrix of maximal overlap.
struct BranchTrack {
  std::vector<double> parameter_grid;
  double q = 1.0;
  // Indexed [branch][grid point].
  std::vector<std::vector<Complex>> eigenvalues;
  std::vector<std::vector<ComplexMatrix>> eigenmatrices;
  std::vector<std::vector<double>> residuals;
  // Grid points (k >= 1) where the greedy match fell below 0.5 and the
  // optimal assignment was used instead.
  std::vector<std::size_t> optimal_match_points;
};

/// Greedy maximal-overlap assignment; falls back to the optimal assignment
/// when the weakest greedy overlap is below 0.5. perm[i] is the column
/// matched to row i.
std::vector<std::size_t> match_branches(const Eigen::MatrixXd& overlap, bool* used_optimal = nullptr);

BranchTrack sweep(const ModelFamily& family, const std::vector<double>& grid, double q);

struct EpOptions {
  std::size_t prescan_points = 64;
  double gap_tol = 1e-6;           // relative to the spectral scale
  double overlap_tol = 1e-4;       // declare when overlap > 1 - overlap_tol
  double cluster_tol = 1e-4;       // relative; eigenvalues counted as coalescing
  int max_golden_iterations = 300;
};

struct EpEstimate {
  bool found = false;
  double parameter_value = 0.0;
  std::vector<std::size_t> coalescing_branches;  // indices in spectral order at the EP
  Complex eigenvalue_at_ep;
  int order = 0;
  double gap_at_ep = 0.0;
  double overlap_at_ep = 0.0;
  double spectral_scale = 0.0;
};

/// Finds a coalescence of eigenvalues and eigenmatrices of the hybrid
/// generator of family(x) for x in the bracket.
///
/// A prescan over the bracket picks the basin with the smallest pairwise
/// coalescence score gap / scale + (1 - overlap); golden-section search then
/// refines inside it down to machine precision in x. Pair gaps are taken from
/// extended-precision eigenvalues. The scale is the Frobenius norm of the
/// generator. The result is declared an EP only if the gap is below
/// gap_tol * scale and the overlap above 1 - overlap_tol; otherwise found is
/// false and the closest approach is still reported. The order is the Jordan
/// block size at the cluster mean.
EpEstimate locate_ep(const ModelFamily& family, double q, std::pair<double, double> bracket,
                     const EpOptions& options = {});

struct JordanChainResult {
  Complex eigenvalue;
  ComplexMatrix eigenmatrix;
  ComplexMatrix generalized_eigenmatrix;  // minimum-norm member of the family
  double residual = 0.0;                  // |L rt - lambda rt - rho|_F
  bool consistent = false;
};

/// Solves L rt = lambda rt + rho for the minimum-norm rt. Any rt + c rho also
/// solves it. consistent is false when no solution reaches
/// 1e-8 max(1, |L|) |rho|, i.e. lambda is not defective.
JordanChainResult jordan_chain(const Superoperator& s, Complex lambda, const ComplexMatrix& rho);

/// Largest k with rank((L - lambda)^k) < rank((L - lambda)^(k-1)); ranks use
/// a 1e-8 sigma_max cutoff. lambda should be accurate (a cluster mean rather
/// than a single split eigenvalue). Throws std::invalid_argument if
/// L - lambda has full rank.
int jordan_block_size(const Superoperator& s, Complex lambda);

}  // namespace liouvep
