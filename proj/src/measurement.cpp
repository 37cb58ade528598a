#include "kitaev/measurement.hpp"

#include "kitaev/errors.hpp"
#include "kitaev/state_vector.hpp"

namespace kitaev {

MeasurementOperator::MeasurementOperator(qlinalg::ObservableFamily observable, std::vector<Matrix> branch_unitaries,
                                         int d_qubits, Register result_register)
    : observable_(std::move(observable)),
      branches_(std::move(branch_unitaries)),
      d_qubits_(d_qubits),
      result_(std::move(result_register)) {
  if (d_qubits < 0 || d_qubits > 10) throw InvalidArgument("MeasurementOperator: bad D width");
  if (branches_.size() != observable_.parts().size()) {
    throw InvalidArgument("MeasurementOperator: one branch unitary per observable part required");
  }
  for (const Matrix& u : branches_) {
    if (static_cast<std::size_t>(u.rows()) != dim_d() || !qlinalg::is_unitary(u)) {
      throw InvalidArgument("MeasurementOperator: branch must be a unitary on D");
    }
  }
  check_distinct(result_);
  for (QubitId q : result_) {
    if (q >= d_qubits_) throw InvalidArgument("MeasurementOperator: result qubit outside D");
  }
}

Matrix MeasurementOperator::matrix() const {
  Matrix m = qlinalg::tensor(observable_.residual().projector(), qlinalg::identity(dim_d()));
  for (std::size_t v = 0; v < branches_.size(); ++v) {
    m += qlinalg::tensor(observable_.parts()[v].space.projector(), branches_[v]);
  }
  return m;
}

namespace {

std::vector<double> result_marginal(const qlinalg::Vector& d_state, int d_qubits, const Register& c) {
  std::vector<double> p(std::size_t{1} << c.size(), 0.0);
  for (Eigen::Index i = 0; i < d_state.size(); ++i) {
    p[register_value(static_cast<std::uint64_t>(i), d_qubits, c)] += std::norm(d_state(i));
  }
  return p;
}

}  // namespace

std::vector<std::vector<double>> conditional_probabilities(const MeasurementOperator& m) {
  std::vector<std::vector<double>> table;
  for (const Matrix& u : m.branches()) table.push_back(result_marginal(u.col(0), m.d_qubits(), m.result_register()));
  return table;
}

std::vector<double> outcome_distribution(const MeasurementOperator& m, const qlinalg::Vector& xi) {
  if (static_cast<std::size_t>(xi.size()) != m.dim_a()) throw DimensionMismatch("outcome_distribution: ξ dimension");
  const qlinalg::Vector in = qlinalg::tensor(xi, qlinalg::basis_vector(m.dim_d(), 0));
  const qlinalg::Vector out = m.matrix() * in;
  const int nq = [&] {
    int n = 0;
    while ((std::size_t{1} << n) < m.dim_a()) ++n;
    return n;
  }();
  if ((std::size_t{1} << nq) != m.dim_a()) throw DimensionMismatch("outcome_distribution: A must have dimension 2^k");
  Register c;
  for (QubitId q : m.result_register()) c.push_back(q + nq);
  return result_marginal(out, nq + m.d_qubits(), c);
}

std::vector<double> composite_prediction(const MeasurementOperator& m, const qlinalg::Vector& xi) {
  const auto table = conditional_probabilities(m);
  std::vector<double> pred(std::size_t{1} << m.result_register().size(), 0.0);
  for (std::size_t v = 0; v < table.size(); ++v) {
    const double pv = qlinalg::quantum_probability(xi, m.observable().parts()[v].space);
    for (std::size_t y = 0; y < pred.size(); ++y) pred[y] += pv * table[v][y];
  }
  pred[0] += qlinalg::quantum_probability(xi, m.observable().residual());
  return pred;
}

MeasurementOperator compose_disjoint(const MeasurementOperator& m1, const MeasurementOperator& m2) {
  const auto& p1 = m1.observable().parts();
  const auto& p2 = m2.observable().parts();
  if (p1.size() != p2.size() || m1.dim_a() != m2.dim_a()) {
    throw InvalidArgument("compose_disjoint: observables differ");
  }
  std::vector<Matrix> branches;
  for (std::size_t v = 0; v < p1.size(); ++v) {
    if (p1[v].label != p2[v].label) throw InvalidArgument("compose_disjoint: part labels differ");
    branches.push_back(qlinalg::tensor(m1.branches()[v], m2.branches()[v]));
  }
  Register c = m1.result_register();
  for (QubitId q : m2.result_register()) c.push_back(q + m1.d_qubits());
  return MeasurementOperator(m1.observable(), std::move(branches), m1.d_qubits() + m2.d_qubits(), std::move(c));
}

OperationSequence reversible_measurement(const OperationSequence& u_seq, const OperationSequence& t_seq) {
  OperationSequence out;
  out.memory_size = std::max(u_seq.memory_size, t_seq.memory_size);
  out.append(u_seq);
  out.append(t_seq);
  out.append(u_seq.inverse());
  out.input_register = u_seq.input_register;
  out.output_register = t_seq.output_register;
  out.validate();
  return out;
}

}  // namespace kitaev
