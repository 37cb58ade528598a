#include "kitaev/perturb.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "kitaev/errors.hpp"

namespace kitaev {

Matrix random_near_identity(int arity, double delta, Rng& rng) {
  const Eigen::Index d = Eigen::Index{1} << arity;
  Matrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  const Matrix h = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const auto& ev = es.eigenvalues();
  const double scale = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
  Matrix phases = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) phases(i, i) = std::polar(1.0, delta * ev(i) / scale);
  return es.eigenvectors() * phases * es.eigenvectors().adjoint();
}

OperationSequence perturb_sequence(const OperationSequence& seq, double delta, Rng& rng) {
  if (!(delta >= 0.0)) throw InvalidArgument("perturb_sequence: delta must be >= 0");
  if (delta == 0.0) return seq;
  OperationSequence out = seq;
  for (auto& op : out.ops) {
    const int k = op.gate.arity();
    const bool matrix_gate =
        std::holds_alternative<gates::Unitary1>(op.gate.kind()) || std::holds_alternative<gates::Dense>(op.gate.kind()) ||
        std::holds_alternative<gates::PhaseLambda>(op.gate.kind()) || std::holds_alternative<gates::Not>(op.gate.kind()) ||
        std::holds_alternative<gates::Tau>(op.gate.kind()) || std::holds_alternative<gates::NotTau>(op.gate.kind()) ||
        std::holds_alternative<gates::AndTau>(op.gate.kind());
    if (!matrix_gate || k > 3) continue;
    Matrix u = op.gate.matrix();
    u = random_near_identity(k, delta, rng) * u;
    op.gate = k == 1 ? Gate(gates::Unitary1{u}) : Gate(gates::Dense{u, k});
  }
  return out;
}

}  // namespace kitaev
