#pragma once

// Measurement operators Σ_V Π_V ⊗ U_V, their conditional probabilities,
// and the garbage-free conjugation U^{-1} T U.

#include <string>
#include <vector>

#include "kitaev/gate.hpp"
#include "kitaev/qlinalg.hpp"

namespace kitaev {

/// Block operator on A ⊗ D: Π_V ⊗ U_V on each part and the identity on the
/// residual. D has dim_d = 2^d_qubits; result register C lists D-local
/// qubit positions (0 = most significant qubit of D).
class MeasurementOperator {
 public:
  MeasurementOperator(qlinalg::ObservableFamily observable, std::vector<Matrix> branch_unitaries, int d_qubits,
                      Register result_register);

  const qlinalg::ObservableFamily& observable() const { return observable_; }
  const std::vector<Matrix>& branches() const { return branches_; }
  int d_qubits() const { return d_qubits_; }
  const Register& result_register() const { return result_; }
  std::size_t dim_a() const { return observable_.ambient_dim(); }
  std::size_t dim_d() const { return std::size_t{1} << d_qubits_; }

  /// Dense matrix on A ⊗ D (A most significant).
  Matrix matrix() const;

 private:
  qlinalg::ObservableFamily observable_;
  std::vector<Matrix> branches_;
  int d_qubits_;
  Register result_;
};

/// table[v][y] = P(U_V|0>, C = y).
std::vector<std::vector<double>> conditional_probabilities(const MeasurementOperator& m);

/// Distribution of C after applying m to ξ ⊗ |0>.
std::vector<double> outcome_distribution(const MeasurementOperator& m, const qlinalg::Vector& xi);

/// Σ_V P(ξ,V) P(V,y), the composite-probability prediction. The residual
/// part contributes as a branch with U = I.
std::vector<double> composite_prediction(const MeasurementOperator& m, const qlinalg::Vector& xi);

/// Two measurements of the same observable on disjoint additional
/// registers D1, D2: U_V = U1_V ⊗ U2_V, C = C1 ∪ C2 (C2 shifted past D1).
MeasurementOperator compose_disjoint(const MeasurementOperator& m1, const MeasurementOperator& m2);

/// U^{-1} T U. With U computing F with error ε on Ω, it represents F_T with
/// precision 2(|Ω|ε)^{1/2}.
OperationSequence reversible_measurement(const OperationSequence& u_seq, const OperationSequence& t_seq);

}  // namespace kitaev
