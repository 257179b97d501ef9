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

#include <doctest.h>

#include "liouvep/models.hpp"
#include "liouvep/spectra.hpp"
#include "test_util.hpp"

using namespace liouvep;
using testutil::max_abs_diff;

namespace {

const Complex kI(0.0, 1.0);

ModelFamily example1_family(double omega = 1.0) {
  return [omega](double g) { return models::example1_model({omega, g, 1.0}); };
}

ModelFamily example2_family(double omega = 1.0) {
  return [omega](double g) { return models::example2_model({omega, g, 1.0}); };
}

}  // namespace

TEST_CASE("decompose sorts and normalizes") {
  const SpectralDecomposition d = decompose(liouvillian(models::example1_model({1.0, 0.5, 1.0})));
  const double s3 = std::sqrt(3.0) / 2.0;
  const std::vector<Complex> expected = {0.0, -0.5 - kI * s3, -0.5 + kI * s3, -1.0};
  REQUIRE(d.eigenvalues.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(std::abs(d.eigenvalues[k] - expected[k]) < 1e-12);
    CHECK(std::abs(d.eigenmatrices[k].norm() - 1.0) < 1e-12);
    CHECK(d.residuals[k] < 1e-10);
  }

  const SpectralDecomposition q0 =
      decompose(hybrid_liouvillian(models::example1_model({1.0, 0.8, 1.0}), 0.0));
  int at_minus_gamma = 0;
  for (const auto& l : q0.eigenvalues) at_minus_gamma += std::abs(l + 0.8) < 1e-12 ? 1 : 0;
  CHECK(at_minus_gamma == 2);

  const Superoperator zero{ComplexMatrix::Zero(4, 4), GeneratorKind::kFull, 1.0,
                           LindbladModel(ComplexMatrix::Zero(2, 2), {})};
  for (const auto& l : decompose(zero).eigenvalues) CHECK(std::abs(l) == 0.0);
}

TEST_CASE("property: every decomposition satisfies its residual bound") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const double w = 0.3 + u(rng), g = 4.0 * u(rng), q = 2.0 * u(rng);
    const LindbladModel m =
        trial % 2 ? models::example1_model({w, g, 1.0}) : models::example2_model({w, g, 1.0});
    const SpectralDecomposition d = decompose(hybrid_liouvillian(m, q));
    for (std::size_t k = 0; k < d.eigenvalues.size(); ++k) {
      const ComplexVector v = vec(d.eigenmatrices[k]);
      const double r = (d.source.matrix * v - d.eigenvalues[k] * v).norm();
      CHECK(r <= 1e-10 * std::max(1.0, d.source.matrix.norm()));
    }
  }
}

TEST_CASE("spectral order keys") {
  const std::vector<Complex> ev = {-1.0, Complex(-0.5, 1.0), 0.0, Complex(-0.5, -1.0), 0.5};
  const auto idx = spectral_order(ev, 1e-9);
  // |Re| ascending, then Re descending, then Im ascending.
  CHECK(idx == std::vector<std::size_t>{2, 4, 3, 1, 0});
}

TEST_CASE("steady state examples") {
  for (double g : {0.1, 1.0, 3.0}) {
    const ComplexMatrix ss =
        steady_state(decompose(liouvillian(models::example1_model({1.0, g, 1.0}))));
    CHECK(max_abs_diff(ss, 0.5 * ComplexMatrix::Identity(2, 2)) < 1e-12);
  }
  ComplexMatrix ex2(2, 2);
  ex2 << 1.0, -2.0 * kI, 2.0 * kI, 5.0;
  CHECK(max_abs_diff(steady_state(decompose(liouvillian(models::example2_model({1.0, 2.0, 1.0})))),
                     ex2 / 6.0) < 1e-12);
  const LindbladModel decay(ComplexMatrix::Zero(2, 2), {{sigma_minus(), 1.0, 1.0}});
  ComplexMatrix down = ComplexMatrix::Zero(2, 2);
  down(1, 1) = 1.0;
  CHECK(max_abs_diff(steady_state(decompose(liouvillian(decay))), down) < 1e-12);
  CHECK_THROWS_AS(
      steady_state(decompose(hybrid_liouvillian(models::example1_model({1.0, 1.0, 1.0}), 0.5))),
      PreconditionError);
}

TEST_CASE("branch matching") {
  Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(3, 3);
  perm(0, 2) = perm(1, 0) = perm(2, 1) = 1.0;
  bool optimal = true;
  CHECK(match_branches(perm, &optimal) == std::vector<std::size_t>{2, 0, 1});
  CHECK_FALSE(optimal);

  // Greedy takes (0,0) first and strands row 1 with a poor match.
  Eigen::MatrixXd trap(2, 2);
  trap << 0.9, 0.8, 0.85, 0.1;
  CHECK(match_branches(trap, &optimal) == std::vector<std::size_t>{1, 0});
  CHECK(optimal);
}

TEST_CASE("sweep tracks branches through the Example 1 EP") {
  std::vector<double> grid;
  for (int k = 1; k <= 300; ++k) grid.push_back(0.01 * k);
  const BranchTrack t = sweep(example1_family(), grid, 1.0);
  REQUIRE(t.eigenvalues.size() == 4);
  REQUIRE(t.eigenvalues[0].size() == grid.size());
  // The closest approach of any two branches is the EP at gamma = omega.
  std::size_t kmin = 0;
  double gmin = INFINITY;
  for (std::size_t b = 0; b < 4; ++b)
    for (std::size_t c = b + 1; c < 4; ++c)
      for (std::size_t k = 0; k < grid.size(); ++k) {
        const double gap = std::abs(t.eigenvalues[b][k] - t.eigenvalues[c][k]);
        if (gap < gmin) gmin = gap, kmin = k;
      }
  CHECK(grid[kmin] == doctest::Approx(1.0));
  CHECK(gmin < 1e-6);
  // Continuity: no jumps larger than the local eigenvalue speed allows.
  for (std::size_t b = 0; b < 4; ++b)
    for (std::size_t k = 1; k < grid.size(); ++k)
      CHECK(std::abs(t.eigenvalues[b][k] - t.eigenvalues[b][k - 1]) < 0.2);

  const BranchTrack single = sweep(example1_family(), {0.5}, 1.0);
  CHECK(single.eigenvalues[0].size() == 1);
  CHECK_THROWS_AS(sweep(example1_family(), {}, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(sweep(example1_family(), {1.0, 0.5}, 1.0), std::invalid_argument);
}

TEST_CASE("locate_ep examples") {
  const EpEstimate e1 = locate_ep(example1_family(), 0.5, {1.0, 3.0});
  CHECK(e1.found);
  CHECK(e1.parameter_value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(e1.order == 2);
  CHECK(e1.coalescing_branches.size() == 2);
  CHECK(std::abs(e1.eigenvalue_at_ep + 2.0) < 1e-6);

  CHECK_FALSE(locate_ep(example1_family(), 0.0, {0.05, 6.0}).found);

  const EpEstimate e2 = locate_ep(example2_family(), 1.0, {3.0, 5.0});
  CHECK(e2.found);
  CHECK(e2.parameter_value == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(e2.order == 2);

  const EpEstimate e3 = locate_ep(example2_family(), 0.0, {1.0, 3.0});
  CHECK(e3.found);
  CHECK(e3.parameter_value == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(e3.order >= 3);

  // Rescaled omega moves the EP proportionally.
  const EpEstimate e4 = locate_ep(example1_family(2.0), 1.0, {0.5, 5.0});
  CHECK(e4.parameter_value == doctest::Approx(2.0).epsilon(1e-6));

  CHECK_THROWS_AS(locate_ep(example1_family(), 1.0, {2.0, 1.0}), std::invalid_argument);
}

TEST_CASE("jordan chains at the Example 1 and Example 2 EPs") {
  // Example 1, q = 1, gamma = omega = 1, lambda = -1.
  const Superoperator s1 = liouvillian(models::example1_model({1.0, 1.0, 1.0}));
  ComplexMatrix rho(2, 2);
  rho << 0.0, -kI, 1.0, 0.0;
  const JordanChainResult j1 = jordan_chain(s1, -1.0, rho);
  CHECK(j1.consistent);
  CHECK(j1.residual < 1e-8);
  // Each family member, including the printed representative (a = 1), closes the chain.
  for (Complex a : {Complex(1.0), Complex(0.0), Complex(0.3, -2.0)}) {
    const ComplexMatrix rt = models::example1_generalized_eigenmatrix(a);
    CHECK((s1.matrix * vec(rt) + vec(rt) - vec(rho)).norm() < 1e-12);
    // and differs from the minimum-norm member by an eigenmatrix.
    CHECK((s1.matrix * vec(rt - j1.generalized_eigenmatrix) +
           vec(rt - j1.generalized_eigenmatrix))
              .norm() < 1e-8);
  }

  // Example 2 LEP, q = 1, gamma = 4 omega, lambda = -3.
  const Superoperator s2 = liouvillian(models::example2_model({1.0, 4.0, 1.0}));
  const ComplexMatrix rho2 = models::example2_liouvillian_spectrum({1.0, 4.0, 1.0}).eigenmatrices[2];
  const JordanChainResult j2 = jordan_chain(s2, -3.0, rho2);
  CHECK(j2.consistent);
  CHECK(j2.residual < 1e-8);
  const ComplexMatrix printed = models::example2_lep_generalized_eigenmatrix();
  CHECK((s2.matrix * vec(printed) + 3.0 * vec(printed) - vec(rho2)).norm() < 1e-12);

  // Away from an EP the chain has no solution.
  const Superoperator s3 = liouvillian(models::example1_model({1.0, 2.0, 1.0}));
  const SpectralDecomposition d3 = decompose(s3);
  CHECK_FALSE(jordan_chain(s3, d3.eigenvalues[1], d3.eigenmatrices[1]).consistent);
}

TEST_CASE("jordan block sizes") {
  CHECK(jordan_block_size(liouvillian(models::example1_model({1.0, 2.0, 1.0})), 0.0) == 1);
  CHECK(jordan_block_size(liouvillian(models::example1_model({1.0, 1.0, 1.0})), -1.0) == 2);
  CHECK(jordan_block_size(liouvillian(models::example2_model({1.0, 4.0, 1.0})), -3.0) == 2);
  CHECK(jordan_block_size(hybrid_liouvillian(models::example2_model({1.0, 2.0, 1.0}), 0.0),
                          -1.0) >= 3);
  CHECK_THROWS_AS(jordan_block_size(liouvillian(models::example1_model({1.0, 2.0, 1.0})), 5.0),
                  std::invalid_argument);
}

TEST_CASE("multiset helpers") {
  CHECK(multiset_distance({1.0, 2.0, 3.0}, {3.0, 1.0, 2.0}) == 0.0);
  CHECK(multiset_distance({0.0, 1.0}, {1.1, 0.0}) == doctest::Approx(0.1));
  CHECK_THROWS_AS(multiset_distance({1.0}, {1.0, 2.0}), std::invalid_argument);
  const auto merged = merge_clusters({1.0, 1.0 + 1e-9, 3.0}, 1e-6);
  CHECK(std::abs(merged[0] - merged[1]) == 0.0);
  CHECK(merged[2] == Complex(3.0));
}
