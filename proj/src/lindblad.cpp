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

#include "liouvep/lindblad.hpp"

#include <cmath>
#include <stdexcept>

namespace liouvep {

namespace {

constexpr double kHermitianTol = 1e-12;
const Complex kI(0.0, 1.0);

ComplexMatrix identity(Eigen::Index d) { return ComplexMatrix::Identity(d, d); }

// -i[H, .] in column-stacked form.
ComplexMatrix commutator_superop(const ComplexMatrix& h) {
  const Eigen::Index d = h.rows();
  return -kI * (kron(identity(d), h) - kron(h.transpose(), identity(d)));
}

// The jump (sandwich) term G . G^+.
ComplexMatrix jump_superop(const ComplexMatrix& g) { return kron(g.conjugate(), g); }

// -{G^+G, .}/2.
ComplexMatrix anticommutator_superop(const ComplexMatrix& g) {
  const Eigen::Index d = g.rows();
  const ComplexMatrix gg = g.adjoint() * g;
  return -0.5 * (kron(identity(d), gg) + kron(gg.transpose(), identity(d)));
}

}  // namespace

ComplexMatrix sigma_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix sigma_y() {
  ComplexMatrix m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

ComplexMatrix sigma_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

ComplexMatrix sigma_minus() {
  ComplexMatrix m(2, 2);
  m << 0, 0, 1, 0;
  return m;
}

ComplexMatrix sigma_plus() { return sigma_minus().adjoint(); }

ComplexMatrix JumpChannel::jump_operator() const { return std::sqrt(rate) * op; }

LindbladModel::LindbladModel(ComplexMatrix hamiltonian, std::vector<JumpChannel> channels)
    : hamiltonian_(std::move(hamiltonian)), channels_(std::move(channels)) {
  if (hamiltonian_.rows() == 0 || hamiltonian_.rows() != hamiltonian_.cols())
    throw std::invalid_argument("LindbladModel: Hamiltonian must be square and non-empty");
  if (!all_finite(hamiltonian_))
    throw std::invalid_argument("LindbladModel: Hamiltonian has non-finite entries");
  const double herm_err = (hamiltonian_ - hamiltonian_.adjoint()).norm();
  if (herm_err > kHermitianTol * std::max(1.0, hamiltonian_.norm()))
    throw std::invalid_argument("LindbladModel: Hamiltonian is not Hermitian (deviation " +
                                std::to_string(herm_err) + ")");
  for (const auto& ch : channels_) {
    if (ch.op.rows() != dim() || ch.op.cols() != dim())
      throw std::invalid_argument("LindbladModel: channel dimension does not match Hamiltonian");
    if (!(ch.rate >= 0.0) || !std::isfinite(ch.rate))
      throw std::invalid_argument("LindbladModel: channel rate must be finite and >= 0");
    if (!(ch.jump_weight >= 0.0) || !std::isfinite(ch.jump_weight))
      throw std::invalid_argument("LindbladModel: jump weight must be finite and >= 0");
    if (!all_finite(ch.op))
      throw std::invalid_argument("LindbladModel: channel operator has non-finite entries");
  }
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kFull:
      return "full";
    case GeneratorKind::kNoJump:
      return "nojump";
    case GeneratorKind::kHybrid:
      return "hybrid";
  }
  return "unknown";
}

ComplexMatrix dissipator_superop(const JumpChannel& channel) {
  if (channel.op.rows() != channel.op.cols())
    throw std::invalid_argument("dissipator_superop: operator must be square");
  const ComplexMatrix g = channel.jump_operator();
  return jump_superop(g) + anticommutator_superop(g);
}

Superoperator liouvillian(const LindbladModel& model) {
  ComplexMatrix m = commutator_superop(model.hamiltonian());
  for (const auto& ch : model.channels()) m += dissipator_superop(ch);
  return Superoperator{std::move(m), GeneratorKind::kFull, 1.0, model};
}

ComplexMatrix effective_hamiltonian(const LindbladModel& model) {
  ComplexMatrix h = model.hamiltonian();
  for (const auto& ch : model.channels()) {
    const ComplexMatrix g = ch.jump_operator();
    h -= 0.5 * kI * (g.adjoint() * g);
  }
  return h;
}

Superoperator nojump_superop(const LindbladModel& model) {
  const Eigen::Index d = model.dim();
  const ComplexMatrix heff = effective_hamiltonian(model);
  // -i H_eff rho + i rho H_eff^+ ; vec(rho B) = kron(B^T, I) vec(rho), B^T = conj(H_eff).
  ComplexMatrix m = -kI * kron(identity(d), heff) + kI * kron(heff.conjugate(), identity(d));
  return Superoperator{std::move(m), GeneratorKind::kNoJump, 0.0, model};
}

Superoperator hybrid_liouvillian(const LindbladModel& model, double q) {
  if (!(q >= 0.0) || !std::isfinite(q))
    throw std::invalid_argument("hybrid_liouvillian: q must be finite and >= 0");
  ComplexMatrix m = commutator_superop(model.hamiltonian());
  for (const auto& ch : model.channels()) {
    const ComplexMatrix g = ch.jump_operator();
    m += (q * ch.jump_weight) * jump_superop(g) + anticommutator_superop(g);
  }
  return Superoperator{std::move(m), GeneratorKind::kHybrid, q, model};
}

ComplexVector qubit_state(const QubitStateSpec& spec) {
  ComplexVector psi(2);
  psi(0) = std::cos(spec.theta / 2.0);
  psi(1) = std::sin(spec.theta / 2.0) * std::exp(kI * spec.phi);
  return psi;
}

ComplexMatrix projector(const ComplexVector& psi) { return psi * psi.adjoint(); }

}  // namespace liouvep
