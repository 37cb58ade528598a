#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kitaev/gate.hpp"
#include "kitaev/qlinalg.hpp"
#include "kitaev/rng.hpp"

namespace kitaev {

inline constexpr int kMaxQubits = 26;
/// Amplitudes below this magnitude are treated as exact zeros.
inline constexpr double kZeroAmplitude = 1e-15;

class StateVector {
 public:
  /// |0...0> on num_qubits qubits.
  explicit StateVector(int num_qubits, int qubit_cap = kMaxQubits);
  StateVector(int num_qubits, std::vector<Complex> amplitudes, int qubit_cap = kMaxQubits);

  static StateVector basis(int num_qubits, std::uint64_t index, int qubit_cap = kMaxQubits);
  static StateVector from_vector(const qlinalg::Vector& v);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  const std::vector<Complex>& amplitudes() const { return amps_; }
  std::vector<Complex>& amplitudes() { return amps_; }
  Complex operator[](std::uint64_t i) const { return amps_[i]; }

  double norm() const;
  void normalize();
  qlinalg::Vector to_vector() const;

  /// Puts `value` (msb-first over reg) into an all-zero register: the
  /// state must currently be supported on reg = 0.
  void set_register(const Register& reg, std::uint64_t value);

 private:
  int num_qubits_;
  std::vector<Complex> amps_;
};

/// A fixed assignment of values to some qubits under which a gate acts.
struct Condition {
  std::vector<QubitId> qubits;
  std::vector<int> values;
};

StateVector apply_operation(StateVector state, const Operation& op);
void apply_in_place(StateVector& state, const Gate& gate, const Register& target,
                    const Condition& cond = {});
StateVector run_sequence(StateVector state, const OperationSequence& seq);
void run_in_place(StateVector& state, const OperationSequence& seq);

/// Bit-vector simulation for classical sequences (no amplitude array), so
/// memories beyond the state-vector cap can be checked.
std::vector<int> run_classical(const OperationSequence& seq, std::vector<int> bits);

/// Register value with reg[0] the most significant bit.
std::uint64_t read_bits(const std::vector<int>& bits, const Register& reg);
void write_bits(std::vector<int>& bits, const Register& reg, std::uint64_t value);
std::uint64_t register_value(std::uint64_t index, int num_qubits, const Register& reg);

/// Msb-first 0/1 rendering of an integer of the given width.
std::string bitstring(std::uint64_t value, int width);
std::uint64_t parse_bitstring(const std::string& s);

struct MeasurementResult {
  std::uint64_t outcome;
  StateVector collapsed;
};

/// Marginal distribution of a register's value.
std::vector<double> register_distribution(const StateVector& state, const Register& reg);

/// Samples z_A and collapses. Throws ResampleGuard when the sampled
/// outcome carries probability below 1e-15.
MeasurementResult measure_register(StateVector state, const Register& reg, Rng& rng);
std::uint64_t measure_in_place(StateVector& state, const Register& reg, Rng& rng);

/// Projects onto reg = value and renormalizes; returns the probability.
double project_register(StateVector& state, const Register& reg, std::uint64_t value);

/// Measures a qubit and flips it back to 0. Returns the outcome.
int measure_and_reset(StateVector& state, QubitId q, Rng& rng);

/// Probability per part label plus the residual under "?".
std::map<std::string, double> observable_probabilities(const StateVector& state,
                                                       const qlinalg::ObservableFamily& fam);

/// Dense matrix of a sequence on its whole memory (memory <= 12 qubits).
Matrix sequence_matrix(const OperationSequence& seq);

}  // namespace kitaev
