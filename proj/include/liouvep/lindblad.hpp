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

#include <string>
#include <vector>

#include "liouvep/numerics.hpp"

namespace liouvep {

// Qubit basis: |up> is index 0, |down> is index 1.
ComplexMatrix sigma_x();
ComplexMatrix sigma_y();
ComplexMatrix sigma_z();
ComplexMatrix sigma_minus();  // |down><up|
ComplexMatrix sigma_plus();   // |up><down|

/// One dissipation channel. The jump operator entering the master equation is
/// sqrt(rate) * op; jump_weight scales the jump (sandwich) term in the hybrid
/// generator on top of the global q.
struct JumpChannel {
  ComplexMatrix op;
  double rate = 0.0;
  double jump_weight = 1.0;

  ComplexMatrix jump_operator() const;
};

class LindbladModel {
 public:
  /// Throws std::invalid_argument when H is not Hermitian to 1e-12, a rate or
  /// jump weight is negative, or a channel dimension differs from H.
  LindbladModel(ComplexMatrix hamiltonian, std::vector<JumpChannel> channels);

  Eigen::Index dim() const { return hamiltonian_.rows(); }
  const ComplexMatrix& hamiltonian() const { return hamiltonian_; }
  const std::vector<JumpChannel>& channels() const { return channels_; }

 private:
  ComplexMatrix hamiltonian_;
  std::vector<JumpChannel> channels_;
};

enum class GeneratorKind { kFull, kNoJump, kHybrid };

std::string to_string(GeneratorKind kind);

struct Superoperator {
  ComplexMatrix matrix;  // d^2 x d^2, acts on column-stacked operators
  GeneratorKind kind = GeneratorKind::kFull;
  double q = 1.0;  // meaningful for kHybrid; 1 for kFull, 0 for kNoJump
  LindbladModel model;

  Eigen::Index dim() const { return model.dim(); }
};

/// D[G] rho = G rho G^+ - {G^+G, rho}/2 as a d^2 x d^2 matrix, G = sqrt(rate) op.
ComplexMatrix dissipator_superop(const JumpChannel& channel);

/// Full Lindblad generator -i[H, .] + sum_mu D[G_mu]. Jump weights are ignored.
Superoperator liouvillian(const LindbladModel& model);

/// H - (i/2) sum_mu G_mu^+ G_mu.
ComplexMatrix effective_hamiltonian(const LindbladModel& model);

/// Generator without the jump term: -i H_eff . + i . H_eff^+.
Superoperator nojump_superop(const LindbladModel& model);

/// q * L + (1 - q) * L' with the jump term of channel mu scaled by
/// q * jump_weight_mu. Any q >= 0 is accepted; only q in [0, 1] has a
/// postselection interpretation.
Superoperator hybrid_liouvillian(const LindbladModel& model, double q);

struct QubitStateSpec {
  double theta = 0.0;
  double phi = 0.0;
};

/// cos(theta/2)|up> + sin(theta/2) e^{i phi}|down>.
ComplexVector qubit_state(const QubitStateSpec& spec);

ComplexMatrix projector(const ComplexVector& psi);

}  // namespace liouvep
