#pragma once

// Gates, operations and operation sequences.
//
// Qubit convention: qubit 0 is the most significant bit of an amplitude
// index, and a register's first qubit is the most significant bit of the
// integer it holds.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kitaev/qlinalg.hpp"

namespace kitaev {

using qlinalg::Complex;
using qlinalg::Matrix;

using QubitId = int;
using Register = std::vector<QubitId>;

/// Contiguous register [first, first + width).
Register make_register(int first, int width);
Register concat(const Register& a, const Register& b);
void check_distinct(const Register& r);

/// Partial bijection on N ⊆ B^bits. Entries outside N hold kUndefined.
class PermutationTable {
 public:
  static constexpr std::uint64_t kUndefined = ~std::uint64_t{0};

  /// Throws InvalidArgument unless map is injective on its defined entries
  /// and every image fits in `bits` bits.
  PermutationTable(int bits, std::vector<std::uint64_t> map);

  static PermutationTable identity(int bits);

  int bits() const { return bits_; }
  std::size_t size() const { return map_.size(); }
  bool defined(std::uint64_t x) const { return x < map_.size() && map_[x] != kUndefined; }
  std::uint64_t operator()(std::uint64_t x) const;
  const std::vector<std::uint64_t>& map() const { return map_; }

  PermutationTable inverse() const;
  /// (this ∘ other)(x) = this(other(x)); undefined where either is.
  PermutationTable compose(const PermutationTable& other) const;
  bool fixes_zero() const { return defined(0) && map_[0] == 0; }

 private:
  int bits_;
  std::vector<std::uint64_t> map_;
};

class Gate;
using GatePtr = std::shared_ptr<const Gate>;

/// Linear map on a gathered block of 2^arity amplitudes. Used for gates
/// whose action is known in closed form but too large for a dense matrix.
class BlockOperator {
 public:
  virtual ~BlockOperator() = default;
  virtual int arity() const = 0;
  virtual void apply(std::span<Complex> block) const = 0;
  virtual std::shared_ptr<const BlockOperator> inverse() const = 0;
  virtual std::string name() const = 0;
};

namespace gates {

struct Unitary1 { Matrix m; };          // 2x2 unitary
struct Not {};                          // ¬
struct Tau {};                          // (u,v) -> (u, v⊕u)
struct NotTau {};                       // (u,v) -> (u, v⊕¬u)
struct AndTau {};                       // (u,v,w) -> (u, v, w⊕(u∧v))
struct PhaseLambda { double phi; };     // diag(1, e^{iφ})
struct Dense { Matrix m; int arity; };
struct Permutation { std::shared_ptr<const PermutationTable> table; };
/// Applies payload iff the first `width` qubits hold `trigger`.
struct Controlled { int width; std::uint64_t trigger; GatePtr payload; };
/// |a,ξ> -> |a> ⊗ U_a|ξ>, one payload per control value.
struct Multiplexed { int width; std::vector<GatePtr> payloads; };
/// U^[0,r]: |a,ξ> -> |a> ⊗ U^a|ξ>, powers[s] = U^(2^s), r = 2^width - 1.
struct IntegerControlled { int width; std::vector<GatePtr> powers; };
struct Block { std::shared_ptr<const BlockOperator> op; };

}  // namespace gates

using GateKind = std::variant<gates::Unitary1, gates::Not, gates::Tau, gates::NotTau, gates::AndTau,
                              gates::PhaseLambda, gates::Dense, gates::Permutation,
                              gates::Controlled, gates::Multiplexed, gates::IntegerControlled,
                              gates::Block>;

class Gate {
 public:
  explicit Gate(GateKind kind);

  static Gate unitary1(const Matrix& m);
  static Gate not_gate() { return Gate(gates::Not{}); }
  static Gate tau() { return Gate(gates::Tau{}); }
  static Gate not_tau() { return Gate(gates::NotTau{}); }
  static Gate and_tau() { return Gate(gates::AndTau{}); }
  static Gate phase(double phi) { return Gate(gates::PhaseLambda{phi}); }
  static Gate dense(const Matrix& m);
  static Gate permutation(PermutationTable table);
  static Gate controlled(Gate payload, int width = 1, std::uint64_t trigger = ~std::uint64_t{0});
  static Gate multiplexed(int width, std::vector<Gate> payloads);
  static Gate block(std::shared_ptr<const BlockOperator> op);

  const GateKind& kind() const { return kind_; }
  int arity() const;
  Gate inverse() const;
  std::string name() const;

  /// Maps classical basis states to classical basis states.
  bool is_classical() const;

  /// 2^arity dense matrix (arity <= 12).
  Matrix matrix() const;

 private:
  GateKind kind_;
};

/// S = (1/√2)[[1,1],[1,-1]].
Matrix s_matrix();
/// Real rotation [[cos θ, -sin θ],[sin θ, cos θ]].
Matrix rotation_matrix(double theta);

struct Operation {
  Gate gate;
  Register target;
};

struct OperationSequence {
  int memory_size = 0;
  std::vector<Operation> ops;
  Register input_register;
  Register output_register;

  std::size_t length() const { return ops.size(); }
  void add(Gate g, Register target);
  void append(const OperationSequence& other);
  /// U^{-1}: reversed order, each gate inverted.
  OperationSequence inverse() const;
  /// Checks every target fits the memory, has distinct qubits and matches
  /// its gate's arity.
  void validate() const;
  bool is_classical() const;
};

}  // namespace kitaev
