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

#include "liouvep/evolve.hpp"

#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

namespace liouvep {

namespace {

constexpr double kStateTol = 1e-10;
constexpr double kTraceFloor = 1e-14;

void check_initial_state(const ComplexMatrix& rho, Eigen::Index d) {
  if (rho.rows() != d || rho.cols() != d)
    throw std::invalid_argument("propagate: initial state has wrong dimension");
  if ((rho - rho.adjoint()).norm() > kStateTol)
    throw std::invalid_argument("propagate: initial state is not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0, 0.0)) > kStateTol)
    throw std::invalid_argument("propagate: initial state does not have trace one");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kStateTol)
    throw std::invalid_argument("propagate: initial state is not positive semidefinite");
}

}  // namespace

EvolutionResult propagate(const Superoperator& s, const ComplexMatrix& rho0,
                          const std::vector<double>& times) {
  const Eigen::Index d = s.dim();
  check_initial_state(rho0, d);
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] >= 0.0)) throw std::invalid_argument("propagate: times must be nonnegative");
    if (k > 0 && times[k] < times[k - 1])
      throw std::invalid_argument("propagate: times must be sorted");
  }

  EvolutionResult out;
  // Propagators are cached per interval length, so uniform grids cost one expm.
  std::map<double, ComplexMatrix> cache;
  ComplexVector v = vec(rho0);
  double raw = 1.0;
  double t = 0.0;
  for (double target : times) {
    const double dt = target - t;
    if (dt > 0.0) {
      auto it = cache.find(dt);
      if (it == cache.end()) it = cache.emplace(dt, expm(s.matrix * dt)).first;
      v = it->second * v;
      const double tr = unvec(v, d).trace().real();
      raw *= tr;
      if (!(raw >= kTraceFloor) || !(tr > 0.0))
        throw TraceUnderflowError("propagate: raw trace underflow at t = " + std::to_string(target),
                                  target);
      // Keep the working vector normalized; the product of interval traces
      // is the raw trace.
      v /= tr;
      t = target;
    }
    ComplexMatrix rho = unvec(v, d);
    rho = 0.5 * (rho + rho.adjoint());
    rho /= rho.trace().real();
    out.times.push_back(target);
    out.states.push_back(std::move(rho));
    out.raw_traces.push_back(raw);
  }
  return out;
}

double expectation(const ComplexMatrix& rho, const ComplexMatrix& obs) {
  if (rho.rows() != obs.rows() || rho.cols() != obs.cols() || rho.rows() != rho.cols())
    throw std::invalid_argument("expectation: dimension mismatch");
  const Complex value = (obs * rho).trace();
  if (std::abs(value.imag()) > 1e-10)
    throw std::invalid_argument("expectation: non-real expectation value (Im = " +
                                std::to_string(value.imag()) + ")");
  return value.real();
}

}  // namespace liouvep
