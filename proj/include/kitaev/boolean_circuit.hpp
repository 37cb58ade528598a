#pragma once

// Boolean circuits over the basis {NOT, AND} and their compilation into
// operation sequences.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kitaev/gate.hpp"
#include "kitaev/rng.hpp"

namespace kitaev {

/// Wires 0..n-1 are the inputs; gate i writes wire n+i and may only read
/// wires below n+i.
class BooleanCircuit {
 public:
  enum class Op { Not, And };
  struct Node {
    Op op;
    int a;
    int b;  // unused for Not
  };

  explicit BooleanCircuit(int num_inputs);

  int num_inputs() const { return num_inputs_; }
  int num_gates() const { return static_cast<int>(nodes_.size()); }
  int num_outputs() const { return static_cast<int>(outputs_.size()); }
  int num_wires() const { return num_inputs_ + num_gates(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<int>& outputs() const { return outputs_; }

  /// Returns the new wire index. Throws WiringViolation on forward or
  /// out-of-range references.
  int add_not(int a);
  int add_and(int a, int b);
  /// a ∨ b as ¬(¬a ∧ ¬b).
  int add_or(int a, int b);
  /// Constant 0 as a ∧ ¬a (the basis has no constants).
  int add_zero(int a);
  void set_outputs(std::vector<int> taps);
  void add_output(int wire);

  /// All wire values for input x (inputs as bits, x_0 first).
  std::vector<int> evaluate_wires(const std::vector<int>& x) const;
  std::vector<int> evaluate(const std::vector<int>& x) const;
  /// Integer form: input and output msb-first.
  std::uint64_t evaluate_int(std::uint64_t x) const;

 private:
  void check_wire(int w) const;

  int num_inputs_;
  std::vector<Node> nodes_;
  std::vector<int> outputs_;
};

std::vector<int> to_bits(std::uint64_t value, int width);
std::uint64_t from_bits(const std::vector<int>& bits);

/// Layout of a compiled circuit: inputs at qubits [0, n), gate outputs at
/// [n, n+L). wire_qubit[w] is the qubit carrying wire w.
struct CompiledCircuit {
  OperationSequence seq;
  std::vector<QubitId> wire_qubit;
};

/// One (f_i)_τ operation per gate onto a fresh ancilla. Running it on
/// |x,0> leaves every wire value on its qubit.
CompiledCircuit compile_circuit(const BooleanCircuit& c);

/// Same gates placed on caller-chosen qubits.
OperationSequence compile_onto(const BooleanCircuit& c, const Register& inputs, const Register& ancillas,
                               int memory_size);

/// Circuit for an arbitrary function B^n -> B^m given as a table of
/// integers (msb-first), by Shannon expansion with shared sub-functions.
BooleanCircuit circuit_from_table(int n, int m, const std::function<std::uint64_t(std::uint64_t)>& f);

/// Random circuit: `gates` gates over n inputs, m output taps drawn from
/// all wires.
BooleanCircuit random_circuit(int n, int gates, int m, Rng& rng);

/// Text format: `INPUTS n`, `NOT i [-> k]`, `AND i j [-> k]`, `OUTPUTS w...`,
/// `#` comments. A `-> k` destination must name the next fresh wire.
BooleanCircuit parse_circuit(const std::string& text);
BooleanCircuit load_circuit(const std::string& path);
std::string format_circuit(const BooleanCircuit& c);

/// y = MAJ(y_1,...,y_k) amplification bound λ^k with λ = 2(ε(1-ε))^{1/2}.
double majority_error_bound(double eps, int k);
/// Exact majority error for k independent runs with error ε (k odd).
double majority_error_exact(double eps, int k);
/// Bitwise majority vote.
std::uint64_t majority_vote(const std::vector<std::uint64_t>& votes, int width);

}  // namespace kitaev
