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

#include <stdexcept>
#include <vector>

#include "liouvep/lindblad.hpp"

namespace liouvep {

class TraceUnderflowError : public std::runtime_error {
 public:
  TraceUnderflowError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

struct EvolutionResult {
  std::vector<double> times;
  std::vector<ComplexMatrix> states;  // trace one, Hermitian
  // Trace of the unnormalized state. For q < 1 this is the probability that
  // a trajectory survives postselection up to that time.
  std::vector<double> raw_traces;
};

/// rho(t) = exp(L t) rho0, advanced interval by interval, with the trace
/// removed at every output time. times must be sorted and nonnegative; rho0
/// Hermitian, trace one and positive semidefinite to 1e-10. Throws
/// TraceUnderflowError when the raw trace drops below 1e-14.
EvolutionResult propagate(const Superoperator& s, const ComplexMatrix& rho0,
                          const std::vector<double>& times);

/// Re tr(obs rho); throws if the imaginary part exceeds 1e-10 or dims differ.
double expectation(const ComplexMatrix& rho, const ComplexMatrix& obs);

}  // namespace liouvep
