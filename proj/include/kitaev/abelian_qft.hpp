#pragma once

// Measurement-based Fourier transform on Z_q and on products of cyclic
// groups: ψ_{q,0} preparation, the phase operator U_q, the creation
// operator T_q, the reversible measurement Q_q and the assembly V_q.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kitaev/gate.hpp"
#include "kitaev/phase_estimation.hpp"
#include "kitaev/qlinalg.hpp"

namespace kitaev {

inline constexpr int kPsiRotationBits = 40;

struct CyclicGroupSpec {
  std::uint64_t q = 2;
  int n = 1;

  /// n minimal with q <= 2^n (at least 1).
  static CyclicGroupSpec make(std::uint64_t q);
};

/// |ψ_{q,a}> = q^{-1/2} Σ_b exp(2πi ab/q) |b> on n qubits.
qlinalg::Vector psi_vector(const CyclicGroupSpec& spec, std::uint64_t a);

/// Uniform superposition over {0..q-1} on register r (msb-first).
void append_psi_q0(OperationSequence& seq, std::uint64_t q, const Register& r, int theta_bits = kPsiRotationBits);
OperationSequence prepare_psi_q0(const CyclicGroupSpec& spec, int theta_bits = kPsiRotationBits);

/// exp(2πi ab/q) on |a>_A |b>_B via n² two-qubit Λ(e^{iφ}).
void append_u_q(OperationSequence& seq, const CyclicGroupSpec& spec, const Register& a, const Register& b);
/// Memory [A = 0..n), B = [n, 2n)).
OperationSequence u_q_phase(const CyclicGroupSpec& spec);

/// |a,0> -> |a, ψ_{q,a}>: ψ_{q,0} on the second register, then U_q.
void append_t_q(OperationSequence& seq, const CyclicGroupSpec& spec, const Register& a, const Register& b,
                int theta_bits = kPsiRotationBits);
OperationSequence t_q(const CyclicGroupSpec& spec, int theta_bits = kPsiRotationBits);

/// Outcome law of one eigenvalue measurement of the q-cycle on ψ_{q,a}
/// (one retry on failure), decoded to Y values. p[a][c] for c < q; a
/// failure on both attempts leaves Y at 0 and is stored in fail[a].
struct QqStatistics {
  int shots = 0;
  std::vector<std::vector<double>> p;
  std::vector<double> fail;
  /// 1 - P(Y = a | ψ_{q,a}); failures count against every a except 0.
  double error(std::uint64_t a) const;
  double max_error() const;
};

/// Y value decoded from a measured phase of the q-cycle: a = (q - φq) mod q.
/// Returns nullopt when the denominator does not divide q.
std::optional<std::uint64_t> decode_cycle_phase(const RationalPhase& phi, std::uint64_t q);

QqStatistics q_q_statistics(const CyclicGroupSpec& spec, int shots, int retries = 1);

/// Smallest per-level shot count with max_a error <= eps.
int q_q_shots(const CyclicGroupSpec& spec, double eps);

/// Q_q on X(n) ⊗ Y(n) ⊗ G(n+1):
///   Σ_a |ψ_{q,a}><ψ_{q,a}| ⊗ H_a T H_a  plus the identity for X >= q,
/// where H_a is the reflection mapping |0>_G to the garbage state
/// Σ_c √p_a(c) |c+1>_G of the measurement, and T adds g-1 into Y for
/// g in 1..q. The map is an involution.
class QqOperator : public BlockOperator {
 public:
  QqOperator(const CyclicGroupSpec& spec, QqStatistics stats);

  int arity() const override { return 3 * spec_.n + 1; }
  void apply(std::span<Complex> block) const override;
  std::shared_ptr<const BlockOperator> inverse() const override;
  std::string name() const override;

  const CyclicGroupSpec& spec() const { return spec_; }
  const QqStatistics& statistics() const { return stats_; }

 private:
  CyclicGroupSpec spec_;
  QqStatistics stats_;
  std::vector<std::vector<double>> eta_;  // per a, over G codes
};

/// Q_q as a gate on concat(X, Y, G) at precision eps.
Gate q_q(const CyclicGroupSpec& spec, double eps);

struct QftFactor {
  CyclicGroupSpec spec;
  Register x, y, g;
  int shots = 0;
};

struct QftProgram {
  OperationSequence seq;
  std::vector<QftFactor> factors;
  Register x;    // all X registers, first factor most significant
  double eps = 0.0;
  int memory() const { return seq.memory_size; }
};

/// (Q_q[X,Y])^{-1} T_q[Y,X] τ_n[Y,X] τ_n[X,Y]; memory X, Y, G = 3n+1 qubits.
QftProgram qft(const CyclicGroupSpec& spec, double eps);
QftProgram qft_abelian(const std::vector<CyclicGroupSpec>& specs, double eps);

struct QftColumn {
  double fidelity = 0.0;  // |<ψ_a ⊗ 0|out>|²
  double residual = 0.0;  // norm of the part with non-X registers away from 0
  qlinalg::Vector x_part; // projection onto X ⊗ |0>
};

/// Runs the program on |a> (mixed radix over the factors).
QftColumn qft_column(const QftProgram& prog, const std::vector<std::uint64_t>& a, int qubit_cap = 26);

/// Tensor of ψ_{q_i,a_i} over the factors.
qlinalg::Vector product_psi(const std::vector<CyclicGroupSpec>& specs, const std::vector<std::uint64_t>& a);

/// max_a ‖Q_q|ψ_a,0,0> - |ψ_a,a,0>‖, measured by simulation.
double q_q_deviation(const CyclicGroupSpec& spec, double eps);

/// Full-ancilla reversible measurement U^{-1} T U for a tiny shot count:
/// every Ξ shot gets its own ancilla, the classical decoder is written to
/// a code register G and then copied into Y. No retries. Layout: X = [0,n),
/// Y = [n,2n), G = [2n,3n+1), ancillas after.
struct LiteralQq {
  OperationSequence seq;
  Register x, y, g, anc;
};
LiteralQq literal_q_q(const CyclicGroupSpec& spec, int shots);

}  // namespace kitaev
