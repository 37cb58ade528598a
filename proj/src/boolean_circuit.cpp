#include "kitaev/boolean_circuit.hpp"

#include <cmath>
#include <map>

#include "kitaev/errors.hpp"

namespace kitaev {

BooleanCircuit::BooleanCircuit(int num_inputs) : num_inputs_(num_inputs) {
  if (num_inputs < 0 || num_inputs > 62) throw InvalidArgument("BooleanCircuit: bad input count");
}

void BooleanCircuit::check_wire(int w) const {
  if (w < 0 || w >= num_wires()) {
    throw WiringViolation("wire " + std::to_string(w) + " does not exist yet (only " +
                          std::to_string(num_wires()) + " wires)");
  }
}

int BooleanCircuit::add_not(int a) {
  check_wire(a);
  nodes_.push_back({Op::Not, a, -1});
  return num_wires() - 1;
}

int BooleanCircuit::add_and(int a, int b) {
  check_wire(a);
  check_wire(b);
  // the compiled AND τ needs two distinct control qubits
  if (a == b) throw WiringViolation("AND needs two distinct wires");
  nodes_.push_back({Op::And, a, b});
  return num_wires() - 1;
}

int BooleanCircuit::add_or(int a, int b) { return add_not(add_and(add_not(a), add_not(b))); }

int BooleanCircuit::add_zero(int a) { return add_and(a, add_not(a)); }

void BooleanCircuit::set_outputs(std::vector<int> taps) {
  for (int w : taps) check_wire(w);
  outputs_ = std::move(taps);
}

void BooleanCircuit::add_output(int wire) {
  check_wire(wire);
  outputs_.push_back(wire);
}

std::vector<int> BooleanCircuit::evaluate_wires(const std::vector<int>& x) const {
  if (static_cast<int>(x.size()) != num_inputs_) throw InvalidArgument("evaluate: input width mismatch");
  std::vector<int> w(x.begin(), x.end());
  w.reserve(static_cast<std::size_t>(num_wires()));
  for (const Node& nd : nodes_) {
    const int u = w[static_cast<std::size_t>(nd.a)] & 1;
    w.push_back(nd.op == Op::Not ? 1 - u : (u & w[static_cast<std::size_t>(nd.b)]));
  }
  return w;
}

std::vector<int> BooleanCircuit::evaluate(const std::vector<int>& x) const {
  const auto w = evaluate_wires(x);
  std::vector<int> out;
  out.reserve(outputs_.size());
  for (int t : outputs_) out.push_back(w[static_cast<std::size_t>(t)]);
  return out;
}

std::uint64_t BooleanCircuit::evaluate_int(std::uint64_t x) const {
  return from_bits(evaluate(to_bits(x, num_inputs_)));
}

std::vector<int> to_bits(std::uint64_t value, int width) {
  std::vector<int> b(static_cast<std::size_t>(width));
  for (int i = 0; i < width; ++i) b[static_cast<std::size_t>(i)] = static_cast<int>((value >> (width - 1 - i)) & 1U);
  return b;
}

std::uint64_t from_bits(const std::vector<int>& bits) {
  std::uint64_t v = 0;
  for (int b : bits) v = (v << 1) | static_cast<std::uint64_t>(b & 1);
  return v;
}

OperationSequence compile_onto(const BooleanCircuit& c, const Register& inputs, const Register& ancillas,
                               int memory_size) {
  if (static_cast<int>(inputs.size()) != c.num_inputs()) throw InvalidArgument("compile: input register width");
  if (static_cast<int>(ancillas.size()) < c.num_gates()) throw InvalidArgument("compile: too few ancillas");
  std::vector<QubitId> wq(inputs.begin(), inputs.end());
  OperationSequence seq;
  seq.memory_size = memory_size;
  for (std::size_t i = 0; i < c.nodes().size(); ++i) {
    const auto& nd = c.nodes()[i];
    const QubitId out = ancillas[i];
    if (nd.op == BooleanCircuit::Op::Not) {
      seq.add(Gate::not_tau(), {wq[static_cast<std::size_t>(nd.a)], out});
    } else {
      seq.add(Gate::and_tau(), {wq[static_cast<std::size_t>(nd.a)], wq[static_cast<std::size_t>(nd.b)], out});
    }
    wq.push_back(out);
  }
  seq.input_register = inputs;
  for (int t : c.outputs()) seq.output_register.push_back(wq[static_cast<std::size_t>(t)]);
  seq.validate();
  return seq;
}

CompiledCircuit compile_circuit(const BooleanCircuit& c) {
  const int n = c.num_inputs();
  const int l = c.num_gates();
  CompiledCircuit cc;
  cc.seq = compile_onto(c, make_register(0, n), make_register(n, l), n + l);
  cc.wire_qubit = make_register(0, n + l);
  return cc;
}

// ---------------------------------------------------------- synthesis

namespace {

class ShannonBuilder {
 public:
  explicit ShannonBuilder(BooleanCircuit& c) : c_(c) {}

  // table[x] for x over the variables var..n-1 (msb-first)
  int build(const std::vector<char>& table, int var) {
    bool all0 = true, all1 = true;
    for (char t : table) {
      all0 &= (t == 0);
      all1 &= (t == 1);
    }
    if (all0) return zero();
    if (all1) return one();
    const std::string key = std::to_string(var) + ":" + std::string(table.begin(), table.end());
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const std::size_t half = table.size() / 2;
    const std::vector<char> f0(table.begin(), table.begin() + static_cast<std::ptrdiff_t>(half));
    const std::vector<char> f1(table.begin() + static_cast<std::ptrdiff_t>(half), table.end());
    int w;
    if (f0 == f1) {
      w = build(f0, var + 1);
    } else {
      const int w0 = build(f0, var + 1);
      const int w1 = build(f1, var + 1);
      if (w0 == zero_ && w1 == one_) {
        w = var;
      } else if (w0 == one_ && w1 == zero_) {
        w = negated(var);
      } else if (w0 == zero_) {
        w = c_.add_and(var, w1);
      } else if (w1 == zero_) {
        w = c_.add_and(negated(var), w0);
      } else {
        w = c_.add_or(c_.add_and(var, w1), c_.add_and(negated(var), w0));
      }
    }
    memo_[key] = w;
    return w;
  }

 private:
  int zero() {
    if (zero_ < 0) zero_ = c_.add_zero(0);
    return zero_;
  }
  int one() {
    if (one_ < 0) one_ = c_.add_not(zero());
    return one_;
  }
  int negated(int var) {
    auto it = neg_.find(var);
    if (it != neg_.end()) return it->second;
    const int w = c_.add_not(var);
    neg_[var] = w;
    return w;
  }

  BooleanCircuit& c_;
  int zero_ = -1;
  int one_ = -1;
  std::map<int, int> neg_;
  std::map<std::string, int> memo_;
};

}  // namespace

BooleanCircuit circuit_from_table(int n, int m, const std::function<std::uint64_t(std::uint64_t)>& f) {
  if (n < 1 || n > 16) throw InvalidArgument("circuit_from_table: need 1 <= n <= 16");
  BooleanCircuit c(n);
  ShannonBuilder b(c);
  const std::size_t size = std::size_t{1} << n;
  std::vector<std::uint64_t> values(size);
  for (std::size_t x = 0; x < size; ++x) values[x] = f(x);
  std::vector<int> taps;
  for (int j = 0; j < m; ++j) {
    std::vector<char> table(size);
    for (std::size_t x = 0; x < size; ++x) table[x] = static_cast<char>((values[x] >> (m - 1 - j)) & 1U);
    taps.push_back(b.build(table, 0));
  }
  c.set_outputs(std::move(taps));
  return c;
}

BooleanCircuit random_circuit(int n, int gates, int m, Rng& rng) {
  BooleanCircuit c(n);
  for (int i = 0; i < gates; ++i) {
    const int w = c.num_wires();
    const int a = static_cast<int>(rng.uniform_int(0, w - 1));
    if (w < 2 || rng.uniform() < 0.35) {
      c.add_not(a);
    } else {
      int b = static_cast<int>(rng.uniform_int(0, w - 2));
      if (b >= a) ++b;
      c.add_and(a, b);
    }
  }
  std::vector<int> taps;
  for (int j = 0; j < m; ++j) taps.push_back(static_cast<int>(rng.uniform_int(0, c.num_wires() - 1)));
  c.set_outputs(std::move(taps));
  return c;
}

// ---------------------------------------------------------- majority

double majority_error_bound(double eps, int k) {
  if (eps < 0 || eps > 0.5 || k < 1) throw InvalidArgument("majority_error_bound: need 0 <= eps <= 1/2, k >= 1");
  return std::pow(2.0 * std::sqrt(eps * (1.0 - eps)), k);
}

double majority_error_exact(double eps, int k) {
  if (k < 1 || k % 2 == 0) throw InvalidArgument("majority_error_exact: k must be odd");
  double total = 0.0;
  for (int j = (k + 1) / 2; j <= k; ++j) {
    total += std::exp(std::lgamma(k + 1.0) - std::lgamma(j + 1.0) - std::lgamma(k - j + 1.0) +
                      j * std::log(eps) + (k - j) * std::log1p(-eps));
  }
  return total;
}

std::uint64_t majority_vote(const std::vector<std::uint64_t>& votes, int width) {
  std::uint64_t out = 0;
  for (int b = 0; b < width; ++b) {
    std::size_t ones = 0;
    for (std::uint64_t v : votes) ones += (v >> b) & 1U;
    if (2 * ones > votes.size()) out |= std::uint64_t{1} << b;
  }
  return out;
}

}  // namespace kitaev
