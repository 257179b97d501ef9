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

#include "liouvep/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace liouvep {

namespace {

constexpr double kSortTieTol = 1e-9;
constexpr double kJordanRankTol = 1e-8;
constexpr double kGreedyFloor = 0.5;

long long quantize(double x, double tol) { return std::llround(x / tol); }

// Solves the assignment problem min sum cost(i, perm[i]) (Hungarian method,
// O(n^3) potentials form).
std::vector<std::size_t> optimal_assignment(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<std::size_t> perm(n);
  for (int j = 1; j <= n; ++j) perm[p[j] - 1] = static_cast<std::size_t>(j - 1);
  return perm;
}

struct PointSpectrum {
  SpectralDecomposition dec;
  std::vector<Complex> extended;  // extended-precision values aligned with dec
  double scale = 0.0;
};

// Aligns extended-precision eigenvalues with the double-precision ones by
// nearest-first greedy matching.
std::vector<Complex> align(const std::vector<Complex>& reference, std::vector<Complex> values) {
  std::vector<Complex> out(reference.size());
  std::vector<char> taken(values.size(), 0);
  std::vector<std::tuple<double, std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < reference.size(); ++i)
    for (std::size_t j = 0; j < values.size(); ++j)
      pairs.emplace_back(std::abs(reference[i] - values[j]), i, j);
  std::sort(pairs.begin(), pairs.end());
  std::vector<char> done(reference.size(), 0);
  for (const auto& [dist, i, j] : pairs) {
    if (done[i] || taken[j]) continue;
    out[i] = values[j];
    done[i] = 1;
    taken[j] = 1;
  }
  return out;
}

PointSpectrum evaluate(const ModelFamily& family, double x, double q) {
  const Superoperator s = hybrid_liouvillian(family(x), q);
  PointSpectrum out{decompose(s), {}, 0.0};
  out.extended = align(out.dec.eigenvalues, eigenvalues_extended(s.matrix));
  out.scale = std::max(s.matrix.norm(), std::numeric_limits<double>::min());
  return out;
}

struct PairScore {
  double score = std::numeric_limits<double>::infinity();
  std::size_t i = 0, j = 0;
  double gap = 0.0;
  double overlap = 0.0;
};

constexpr double kDiabolicProbeGap = 1e-6;

bool cluster_is_defective(const PointSpectrum& ps, std::size_t i, std::size_t j) {
  const Complex center = 0.5 * (ps.extended[i] + ps.extended[j]);
  const double radius =
      std::max(kDiabolicProbeGap * ps.scale, 10.0 * std::abs(ps.extended[i] - ps.extended[j]));
  Eigen::Index cluster = 0;
  for (const auto& l : ps.extended)
    if (std::abs(l - center) <= radius) ++cluster;
  const ComplexMatrix& m = ps.dec.source.matrix;
  const Eigen::Index nullity =
      m.rows() - numerical_rank(m - center * ComplexMatrix::Identity(m.rows(), m.cols()), kJordanRankTol);
  return nullity < cluster;
}

PairScore best_pair(const PointSpectrum& ps) {
  PairScore best;
  const auto& mats = ps.dec.eigenmatrices;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    for (std::size_t j = i + 1; j < mats.size(); ++j) {
      const double gap = std::abs(ps.extended[i] - ps.extended[j]);
      const double ov = frobenius_overlap(mats[i], mats[j]);
      double score = gap / ps.scale + (1.0 - ov);
      // A degenerate but diagonalizable cluster is a diabolic crossing; the
      // solver's eigenvectors there are arbitrary, so the overlap is ignored.
      if (gap < kDiabolicProbeGap * ps.scale && !cluster_is_defective(ps, i, j)) score = gap / ps.scale + 1.0;
      if (score < best.score) best = {score, i, j, gap, ov};
    }
  }
  return best;
}

}  // namespace

std::vector<std::size_t> spectral_order(const std::vector<Complex>& ev, double tie_tol) {
  std::vector<std::size_t> idx(ev.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const Complex x = ev[a], y = ev[b];
    const auto kx = std::make_tuple(quantize(std::abs(x.real()), tie_tol),
                                    -quantize(x.real(), tie_tol), quantize(x.imag(), tie_tol));
    const auto ky = std::make_tuple(quantize(std::abs(y.real()), tie_tol),
                                    -quantize(y.real(), tie_tol), quantize(y.imag(), tie_tol));
    if (kx != ky) return kx < ky;
    return std::make_tuple(std::abs(x.real()), -x.real(), x.imag()) <
           std::make_tuple(std::abs(y.real()), -y.real(), y.imag());
  });
  return idx;
}

double frobenius_overlap(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  // <a, b>_F = tr(a^+ b) = sum conj(a_ij) b_ij
  const Complex inner = (a.conjugate().cwiseProduct(b)).sum();
  return std::min(1.0, std::abs(inner) / (na * nb));
}

SpectralDecomposition decompose(const Superoperator& s) {
  const EigenResult er = eigendecompose(s.matrix);
  const Eigen::Index d = s.dim();
  const double tie_tol = kSortTieTol * std::max(1.0, s.matrix.norm());
  const auto order = spectral_order(er.eigenvalues, tie_tol);

  SpectralDecomposition out{{}, {}, {}, s};
  for (std::size_t k : order) {
    // Unit eigenvectors give unit Frobenius-norm eigenmatrices.
    out.eigenvalues.push_back(er.eigenvalues[k]);
    out.eigenmatrices.push_back(unvec(er.right_eigenvectors[k], d));
    out.residuals.push_back(er.residual_norms[k]);
  }
  return out;
}

ComplexMatrix steady_state(const SpectralDecomposition& d) {
  if (d.eigenvalues.empty()) throw PreconditionError("steady_state: empty decomposition");
  std::size_t best = 0;
  for (std::size_t k = 1; k < d.eigenvalues.size(); ++k)
    if (std::abs(d.eigenvalues[k]) < std::abs(d.eigenvalues[best])) best = k;
  const double bound = 1e-10 * std::max(1.0, d.source.matrix.norm());
  if (std::abs(d.eigenvalues[best]) > bound)
    throw PreconditionError("steady_state: no eigenvalue within " + std::to_string(bound) +
                            " of zero (smallest |lambda| = " +
                            std::to_string(std::abs(d.eigenvalues[best])) + ")");
  const ComplexMatrix& rho = d.eigenmatrices[best];
  const Complex tr = rho.trace();
  if (std::abs(tr) < 1e-12)
    throw PreconditionError("steady_state: zero-eigenvalue eigenmatrix is traceless");
  ComplexMatrix out = rho / tr;
  return 0.5 * (out + out.adjoint());
}

std::vector<std::size_t> match_branches(const Eigen::MatrixXd& overlap, bool* used_optimal) {
  const Eigen::Index n = overlap.rows();
  std::vector<std::size_t> perm(n, 0);
  std::vector<char> row_done(n, 0), col_done(n, 0);
  double weakest = 1.0;
  for (Eigen::Index step = 0; step < n; ++step) {
    double best = -1.0;
    Eigen::Index bi = 0, bj = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (row_done[i]) continue;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (col_done[j]) continue;
        if (overlap(i, j) > best) {
          best = overlap(i, j);
          bi = i;
          bj = j;
        }
      }
    }
    row_done[bi] = col_done[bj] = 1;
    perm[bi] = static_cast<std::size_t>(bj);
    weakest = std::min(weakest, best);
  }
  const bool optimal = weakest < kGreedyFloor;
  if (used_optimal) *used_optimal = optimal;
  if (optimal) return optimal_assignment(-overlap);
  return perm;
}

BranchTrack sweep(const ModelFamily& family, const std::vector<double>& grid, double q) {
  if (grid.empty()) throw std::invalid_argument("sweep: empty parameter grid");
  for (std::size_t k = 1; k < grid.size(); ++k)
    if (!(grid[k] > grid[k - 1]))
      throw std::invalid_argument("sweep: parameter grid must be strictly increasing");

  std::vector<SpectralDecomposition> points;
  points.reserve(grid.size());
  for (double x : grid) points.push_back(decompose(hybrid_liouvillian(family(x), q)));

  const std::size_t n = points.front().eigenvalues.size();
  BranchTrack out;
  out.parameter_grid = grid;
  out.q = q;
  out.eigenvalues.assign(n, {});
  out.eigenmatrices.assign(n, {});
  out.residuals.assign(n, {});

  // current[b] = index into the sorted decomposition at the current point
  std::vector<std::size_t> current(n);
  std::iota(current.begin(), current.end(), 0);
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& dec = points[k];
    if (k > 0) {
      const auto& prev = points[k - 1];
      Eigen::MatrixXd ov(n, n);
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t j = 0; j < n; ++j)
          ov(b, j) = frobenius_overlap(prev.eigenmatrices[current[b]], dec.eigenmatrices[j]);
      bool optimal = false;
      current = match_branches(ov, &optimal);
      if (optimal) out.optimal_match_points.push_back(k);
    }
    for (std::size_t b = 0; b < n; ++b) {
      out.eigenvalues[b].push_back(dec.eigenvalues[current[b]]);
      out.eigenmatrices[b].push_back(dec.eigenmatrices[current[b]]);
      out.residuals[b].push_back(dec.residuals[current[b]]);
    }
  }
  return out;
}

double multiset_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("multiset_distance: size mismatch");
  const std::size_t n = a.size();
  if (n == 0) return 0.0;
  if (n <= 8) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double worst = 0.0;
      for (std::size_t i = 0; i < n && worst < best; ++i)
        worst = std::max(worst, std::abs(a[i] - b[perm[i]]));
      best = std::min(best, worst);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
  }
  const auto matched = align(a, b);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(a[i] - matched[i]));
  return worst;
}

std::vector<Complex> merge_clusters(const std::vector<Complex>& values, double tol) {
  const std::size_t n = values.size();
  std::vector<std::size_t> group(n);
  std::iota(group.begin(), group.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t i) {
    return group[i] == i ? i : group[i] = root(group[i]);
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(values[i] - values[j]) < tol) group[root(i)] = root(j);
  std::vector<Complex> sum(n, 0.0);
  std::vector<double> count(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    sum[root(i)] += values[i];
    count[root(i)] += 1.0;
  }
  std::vector<Complex> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = sum[root(i)] / count[root(i)];
  return out;
}

EpEstimate locate_ep(const ModelFamily& family, double q, std::pair<double, double> bracket,
                     const EpOptions& options) {
  auto [lo, hi] = bracket;
  if (!(hi > lo)) throw std::invalid_argument("locate_ep: bracket must satisfy lo < hi");
  const std::size_t m = std::max<std::size_t>(options.prescan_points, 3);

  auto score_at = [&](double x) { return best_pair(evaluate(family, x, q)).score; };

  // Prescan for the basin of the best coalescence candidate.
  std::size_t best_k = 0;
  double best_score = std::numeric_limits<double>::infinity();
  const double h = (hi - lo) / static_cast<double>(m - 1);
  for (std::size_t k = 0; k < m; ++k) {
    const double s = score_at(lo + h * static_cast<double>(k));
    if (s < best_score) {
      best_score = s;
      best_k = k;
    }
  }
  double a = lo + h * static_cast<double>(best_k == 0 ? 0 : best_k - 1);
  double b = lo + h * static_cast<double>(std::min(best_k + 1, m - 1));

  // Golden-section refinement to machine precision in x.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = score_at(c), fd = score_at(d);
  for (int it = 0; it < options.max_golden_iterations; ++it) {
    const double width_floor =
        8.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(a), std::abs(b));
    if (b - a <= width_floor) break;
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = score_at(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = score_at(d);
    }
  }
  // Keep the best point seen among the final candidates and the prescan point.
  double x_best = fc <= fd ? c : d;
  {
    const double x_scan = lo + h * static_cast<double>(best_k);
    if (best_score < std::min(fc, fd)) x_best = x_scan;
  }

  const PointSpectrum ps = evaluate(family, x_best, q);
  const PairScore pair = best_pair(ps);

  EpEstimate est;
  est.parameter_value = x_best;
  est.spectral_scale = ps.scale;
  est.gap_at_ep = pair.gap;
  est.overlap_at_ep = pair.overlap;

  const Complex center = 0.5 * (ps.extended[pair.i] + ps.extended[pair.j]);
  const double cluster_radius = std::max(options.cluster_tol * ps.scale, 10.0 * pair.gap);
  Complex sum = 0.0;
  for (std::size_t k = 0; k < ps.extended.size(); ++k) {
    if (std::abs(ps.extended[k] - center) <= cluster_radius) {
      est.coalescing_branches.push_back(k);
      sum += ps.extended[k];
    }
  }
  est.eigenvalue_at_ep = sum / static_cast<double>(est.coalescing_branches.size());

  est.found = pair.gap < options.gap_tol * ps.scale && pair.overlap > 1.0 - options.overlap_tol &&
              cluster_is_defective(ps, pair.i, pair.j);
  if (est.found) {
    est.order = std::max(2, jordan_block_size(ps.dec.source, est.eigenvalue_at_ep));
  }
  return est;
}

JordanChainResult jordan_chain(const Superoperator& s, Complex lambda, const ComplexMatrix& rho) {
  const Eigen::Index n = s.matrix.rows();
  const ComplexMatrix shifted = s.matrix - lambda * ComplexMatrix::Identity(n, n);
  const ComplexVector b = vec(rho);
  const SolveResult sol = min_norm_solve(shifted, b, kDefaultRankTol);

  JordanChainResult out;
  out.eigenvalue = lambda;
  out.eigenmatrix = rho;
  out.generalized_eigenmatrix = unvec(sol.x, s.dim());
  out.residual = (shifted * sol.x - b).norm();
  out.consistent =
      sol.consistent && out.residual <= 1e-8 * std::max(1.0, s.matrix.norm()) * std::max(1.0, b.norm());
  return out;
}

int jordan_block_size(const Superoperator& s, Complex lambda) {
  const Eigen::Index n = s.matrix.rows();
  const ComplexMatrix shifted = s.matrix - lambda * ComplexMatrix::Identity(n, n);
  // Powers are judged against |A|^k so a numerically zero power has rank 0.
  const double base = std::max(shifted.norm(), std::numeric_limits<double>::min());
  Eigen::Index prev_rank = numerical_rank(shifted, kJordanRankTol, base);
  if (prev_rank == n)
    throw std::invalid_argument("jordan_block_size: lambda is not an eigenvalue");
  ComplexMatrix power = shifted;
  double scale = base;
  int k = 1;
  while (k < n && prev_rank > 0) {
    power = power * shifted;
    scale *= base;
    const Eigen::Index r = numerical_rank(power, kJordanRankTol, scale);
    if (r >= prev_rank) break;
    prev_rank = r;
    ++k;
  }
  return k;
}

}  // namespace liouvep
