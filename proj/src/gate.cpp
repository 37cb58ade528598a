#include "kitaev/gate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include "kitaev/errors.hpp"

namespace kitaev {

Register make_register(int first, int width) {
  Register r(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) r[static_cast<std::size_t>(i)] = first + i;
  return r;
}

Register concat(const Register& a, const Register& b) {
  Register r = a;
  r.insert(r.end(), b.begin(), b.end());
  return r;
}

void check_distinct(const Register& r) {
  std::unordered_set<QubitId> seen;
  for (QubitId q : r) {
    if (q < 0) throw InvalidArgument("register contains a negative qubit id");
    if (!seen.insert(q).second) throw InvalidArgument("register repeats qubit " + std::to_string(q));
  }
}

// --------------------------------------------------------- PermutationTable

PermutationTable::PermutationTable(int bits, std::vector<std::uint64_t> map)
    : bits_(bits), map_(std::move(map)) {
  if (bits < 0 || bits > 30) throw InvalidArgument("PermutationTable: bad width");
  const std::uint64_t n = std::uint64_t{1} << bits;
  if (map_.size() != n) throw InvalidArgument("PermutationTable: table size must be 2^bits");
  std::vector<char> hit(n, 0);
  for (std::uint64_t y : map_) {
    if (y == kUndefined) continue;
    if (y >= n) throw InvalidArgument("PermutationTable: image out of range");
    if (hit[y]) throw InvalidArgument("PermutationTable: not injective");
    hit[y] = 1;
  }
}

PermutationTable PermutationTable::identity(int bits) {
  std::vector<std::uint64_t> m(std::size_t{1} << bits);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = i;
  return PermutationTable(bits, std::move(m));
}

std::uint64_t PermutationTable::operator()(std::uint64_t x) const {
  if (!defined(x)) throw DomainViolation("permutation applied outside its domain");
  return map_[x];
}

PermutationTable PermutationTable::inverse() const {
  std::vector<std::uint64_t> inv(map_.size(), kUndefined);
  for (std::size_t x = 0; x < map_.size(); ++x) {
    if (map_[x] != kUndefined) inv[map_[x]] = x;
  }
  return PermutationTable(bits_, std::move(inv));
}

PermutationTable PermutationTable::compose(const PermutationTable& other) const {
  if (other.bits_ != bits_) throw DimensionMismatch("PermutationTable::compose: widths differ");
  std::vector<std::uint64_t> m(map_.size(), kUndefined);
  for (std::size_t x = 0; x < map_.size(); ++x) {
    const std::uint64_t y = other.map_[x];
    if (y != kUndefined) m[x] = map_[y];
  }
  return PermutationTable(bits_, std::move(m));
}

// --------------------------------------------------------------------- Gate

Gate::Gate(GateKind kind) : kind_(std::move(kind)) {}

Gate Gate::unitary1(const Matrix& m) {
  if (m.rows() != 2 || m.cols() != 2 || !qlinalg::is_unitary(m)) {
    throw InvalidArgument("unitary1: need a 2x2 unitary");
  }
  return Gate(gates::Unitary1{m});
}

Gate Gate::dense(const Matrix& m) {
  int arity = 0;
  while ((Eigen::Index{1} << arity) < m.rows()) ++arity;
  if ((Eigen::Index{1} << arity) != m.rows() || !qlinalg::is_unitary(m)) {
    throw InvalidArgument("dense gate: need a 2^k x 2^k unitary");
  }
  return Gate(gates::Dense{m, arity});
}

Gate Gate::permutation(PermutationTable table) {
  return Gate(gates::Permutation{std::make_shared<const PermutationTable>(std::move(table))});
}

Gate Gate::controlled(Gate payload, int width, std::uint64_t trigger) {
  if (width < 1 || width > 30) throw InvalidArgument("controlled: bad control width");
  const std::uint64_t all = (std::uint64_t{1} << width) - 1;
  if (trigger == ~std::uint64_t{0}) trigger = all;
  if (trigger > all) throw InvalidArgument("controlled: trigger wider than control");
  return Gate(gates::Controlled{width, trigger, std::make_shared<const Gate>(std::move(payload))});
}

Gate Gate::multiplexed(int width, std::vector<Gate> payloads) {
  if (width < 1 || payloads.size() != (std::size_t{1} << width)) {
    throw InvalidArgument("multiplexed: need 2^width payloads");
  }
  std::vector<GatePtr> ps;
  for (auto& p : payloads) {
    if (p.arity() != payloads.front().arity()) throw InvalidArgument("multiplexed: payload arities differ");
    ps.push_back(std::make_shared<const Gate>(std::move(p)));
  }
  return Gate(gates::Multiplexed{width, std::move(ps)});
}

Gate Gate::block(std::shared_ptr<const BlockOperator> op) { return Gate(gates::Block{std::move(op)}); }

namespace {

template <class... Ts>
struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

}  // namespace

int Gate::arity() const {
  return std::visit(
      Overload{
          [](const gates::Unitary1&) { return 1; },
          [](const gates::Not&) { return 1; },
          [](const gates::Tau&) { return 2; },
          [](const gates::NotTau&) { return 2; },
          [](const gates::AndTau&) { return 3; },
          [](const gates::PhaseLambda&) { return 1; },
          [](const gates::Dense& g) { return g.arity; },
          [](const gates::Permutation& g) { return g.table->bits(); },
          [](const gates::Controlled& g) { return g.width + g.payload->arity(); },
          [](const gates::Multiplexed& g) { return g.width + g.payloads.front()->arity(); },
          [](const gates::IntegerControlled& g) {
            return g.width + (g.powers.empty() ? 0 : g.powers.front()->arity());
          },
          [](const gates::Block& g) { return g.op->arity(); },
      },
      kind_);
}

Gate Gate::inverse() const {
  return std::visit(
      Overload{
          [](const gates::Unitary1& g) { return Gate(gates::Unitary1{g.m.adjoint()}); },
          [](const gates::Not& g) { return Gate(g); },
          [](const gates::Tau& g) { return Gate(g); },
          [](const gates::NotTau& g) { return Gate(g); },
          [](const gates::AndTau& g) { return Gate(g); },
          [](const gates::PhaseLambda& g) { return Gate(gates::PhaseLambda{-g.phi}); },
          [](const gates::Dense& g) { return Gate(gates::Dense{g.m.adjoint(), g.arity}); },
          [](const gates::Permutation& g) {
            return Gate(gates::Permutation{std::make_shared<const PermutationTable>(g.table->inverse())});
          },
          [](const gates::Controlled& g) {
            return Gate(gates::Controlled{g.width, g.trigger, std::make_shared<const Gate>(g.payload->inverse())});
          },
          [](const gates::Multiplexed& g) {
            std::vector<GatePtr> ps;
            for (const auto& p : g.payloads) ps.push_back(std::make_shared<const Gate>(p->inverse()));
            return Gate(gates::Multiplexed{g.width, std::move(ps)});
          },
          [](const gates::IntegerControlled& g) {
            std::vector<GatePtr> ps;
            for (const auto& p : g.powers) ps.push_back(std::make_shared<const Gate>(p->inverse()));
            return Gate(gates::IntegerControlled{g.width, std::move(ps)});
          },
          [](const gates::Block& g) { return Gate(gates::Block{g.op->inverse()}); },
      },
      kind_);
}

std::string Gate::name() const {
  return std::visit(
      Overload{
          [](const gates::Unitary1&) { return std::string("U1"); },
          [](const gates::Not&) { return std::string("NOT"); },
          [](const gates::Tau&) { return std::string("TAU"); },
          [](const gates::NotTau&) { return std::string("NOT_TAU"); },
          [](const gates::AndTau&) { return std::string("AND_TAU"); },
          [](const gates::PhaseLambda& g) { return "PHASE(" + std::to_string(g.phi) + ")"; },
          [](const gates::Dense& g) { return "DENSE" + std::to_string(g.arity); },
          [](const gates::Permutation& g) { return "PERM" + std::to_string(g.table->bits()); },
          [](const gates::Controlled& g) { return "C" + std::to_string(g.width) + "[" + g.payload->name() + "]"; },
          [](const gates::Multiplexed& g) { return "MUX" + std::to_string(g.width); },
          [](const gates::IntegerControlled& g) { return "POW" + std::to_string(g.width); },
          [](const gates::Block& g) { return g.op->name(); },
      },
      kind_);
}

bool Gate::is_classical() const {
  return std::visit(
      Overload{
          [](const gates::Not&) { return true; },
          [](const gates::Tau&) { return true; },
          [](const gates::NotTau&) { return true; },
          [](const gates::AndTau&) { return true; },
          [](const gates::Permutation&) { return true; },
          [](const gates::Controlled& g) { return g.payload->is_classical(); },
          [](const gates::Multiplexed& g) {
            return std::all_of(g.payloads.begin(), g.payloads.end(), [](const GatePtr& p) { return p->is_classical(); });
          },
          [](const gates::IntegerControlled& g) {
            return std::all_of(g.powers.begin(), g.powers.end(), [](const GatePtr& p) { return p->is_classical(); });
          },
          [](const auto&) { return false; },
      },
      kind_);
}

Matrix s_matrix() {
  Matrix s(2, 2);
  const double r = 1.0 / std::numbers::sqrt2;
  s << r, r, r, -r;
  return s;
}

Matrix rotation_matrix(double theta) {
  Matrix r(2, 2);
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

// -------------------------------------------------------- OperationSequence

void OperationSequence::add(Gate g, Register target) {
  ops.push_back(Operation{std::move(g), std::move(target)});
}

void OperationSequence::append(const OperationSequence& other) {
  memory_size = std::max(memory_size, other.memory_size);
  ops.insert(ops.end(), other.ops.begin(), other.ops.end());
}

OperationSequence OperationSequence::inverse() const {
  OperationSequence inv;
  inv.memory_size = memory_size;
  inv.input_register = output_register;
  inv.output_register = input_register;
  for (auto it = ops.rbegin(); it != ops.rend(); ++it) inv.add(it->gate.inverse(), it->target);
  return inv;
}

void OperationSequence::validate() const {
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const auto& op = ops[i];
    if (static_cast<int>(op.target.size()) != op.gate.arity()) {
      throw InvalidArgument("operation " + std::to_string(i) + ": target width differs from gate arity");
    }
    check_distinct(op.target);
    for (QubitId q : op.target) {
      if (q >= memory_size) throw InvalidArgument("operation " + std::to_string(i) + ": qubit outside memory");
    }
  }
}

bool OperationSequence::is_classical() const {
  return std::all_of(ops.begin(), ops.end(), [](const Operation& op) { return op.gate.is_classical(); });
}

}  // namespace kitaev
