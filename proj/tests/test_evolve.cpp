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

#include "liouvep/evolve.hpp"
#include "liouvep/models.hpp"
#include "test_util.hpp"

using namespace liouvep;
using testutil::max_abs_diff;

TEST_CASE("propagate examples") {
  const LindbladModel m = models::example1_model({1.0, 0.5, 1.0});
  const ComplexMatrix rho0 = projector(qubit_state({1.1, 0.4}));

  const EvolutionResult at0 = propagate(liouvillian(m), rho0, {0.0});
  CHECK(max_abs_diff(at0.states[0], rho0) < 1e-15);
  CHECK(at0.raw_traces[0] == 1.0);

  const EvolutionResult late = propagate(liouvillian(m), rho0, {40.0 / 0.5});
  CHECK(max_abs_diff(late.states[0], 0.5 * ComplexMatrix::Identity(2, 2)) < 1e-10);
}

TEST_CASE("q = 0 evolution of example 1 is independent of the decay rate") {
  const ComplexMatrix rho0 = projector(qubit_state({2.0, 0.3}));
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(0.25 * k);
  const EvolutionResult a =
      propagate(hybrid_liouvillian(models::example1_model({1.0, 0.5, 1.0}), 0.0), rho0, times);
  const EvolutionResult b =
      propagate(hybrid_liouvillian(models::example1_model({1.0, 1.5, 1.0}), 0.0), rho0, times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    CHECK(max_abs_diff(a.states[k], b.states[k]) < 1e-12);
    // sigma_z constant, transverse components rotate at omega.
    CHECK(expectation(a.states[k], sigma_z()) == doctest::Approx(std::cos(2.0)).epsilon(1e-12));
    const double sx = std::sin(2.0) * std::cos(0.3 + times[k]);
    CHECK(expectation(a.states[k], sigma_x()) == doctest::Approx(sx).epsilon(1e-10).scale(1.0));
  }
  CHECK(b.raw_traces.back() < a.raw_traces.back());
  CHECK(a.raw_traces.back() == doctest::Approx(std::exp(-0.5 * 5.0)).epsilon(1e-10));
}

TEST_CASE("property: hybrid evolution stays physical") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const ComplexMatrix rho0 = testutil::random_density(2, rng);
    const double q = u(rng);
    const LindbladModel m = trial % 2 ? models::example1_model({1.0, 2.0 * u(rng), 1.0})
                                      : models::example2_model({1.0, 4.0 * u(rng), 1.0});
    const EvolutionResult r = propagate(hybrid_liouvillian(m, q), rho0, {0.3, 1.0, 2.5, 6.0});
    double prev = 1.0;
    for (std::size_t k = 0; k < r.states.size(); ++k) {
      const ComplexMatrix& rho = r.states[k];
      CHECK(std::abs(rho.trace() - Complex(1.0)) < 1e-12);
      CHECK(max_abs_diff(rho, rho.adjoint()) < 1e-14);
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho);
      CHECK(es.eigenvalues().minCoeff() >= -1e-9);
      CHECK(r.raw_traces[k] <= prev + 1e-12);
      prev = r.raw_traces[k];
    }
  }
}

TEST_CASE("property: full Lindblad evolution preserves the raw trace") {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix rho0 = testutil::random_density(2, rng);
    const EvolutionResult r =
        propagate(liouvillian(models::example2_model({1.0, 1.7, 1.0})), rho0, {0.5, 2.0, 9.0});
    for (double t : r.raw_traces) CHECK(t == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("propagate input validation") {
  const Superoperator s = liouvillian(models::example1_model({1.0, 0.5, 1.0}));
  const ComplexMatrix good = 0.5 * ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(propagate(s, ComplexMatrix::Identity(2, 2), {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(propagate(s, sigma_x(), {1.0}), std::invalid_argument);
  ComplexMatrix neg = good;
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(propagate(s, neg, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(propagate(s, good, {1.0, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(propagate(s, good, {-1.0}), std::invalid_argument);
  CHECK_THROWS_AS(propagate(s, ComplexMatrix::Identity(3, 3) / 3.0, {1.0}),
                  std::invalid_argument);
}

TEST_CASE("raw trace underflow is reported") {
  const Superoperator s = hybrid_liouvillian(models::example1_model({1.0, 5.0, 1.0}), 0.0);
  try {
    propagate(s, 0.5 * ComplexMatrix::Identity(2, 2), {1.0, 10.0});
    FAIL("expected TraceUnderflowError");
  } catch (const TraceUnderflowError& e) {
    CHECK(e.time() == 10.0);
  }
}

TEST_CASE("expectation examples") {
  ComplexMatrix up = ComplexMatrix::Zero(2, 2);
  up(0, 0) = 1.0;
  CHECK(expectation(up, sigma_z()) == 1.0);
  CHECK(expectation(0.5 * ComplexMatrix::Identity(2, 2), sigma_x()) == 0.0);
  const ComplexMatrix fig2 = projector(qubit_state({std::sqrt(3.0) * M_PI / 2.0, std::sqrt(3.0) * M_PI}));
  CHECK(expectation(fig2, sigma_z()) == doctest::Approx(std::cos(std::sqrt(3.0) * M_PI / 2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(expectation(up, ComplexMatrix::Identity(3, 3)), std::invalid_argument);
  ComplexMatrix off = ComplexMatrix::Zero(2, 2);
  off(0, 1) = 1.0;
  CHECK_THROWS_AS(expectation(off, sigma_y()), std::invalid_argument);
}
