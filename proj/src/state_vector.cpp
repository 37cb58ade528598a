#include "kitaev/state_vector.hpp"

#include <algorithm>
#include <cmath>

#include "kitaev/errors.hpp"

namespace kitaev {

namespace {

template <class... Ts>
struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

std::uint64_t qubit_bit(int num_qubits, QubitId q) {
  return std::uint64_t{1} << (num_qubits - 1 - q);
}

void check_qubits(int num_qubits, const Register& reg) {
  for (QubitId q : reg) {
    if (q < 0 || q >= num_qubits) throw InvalidArgument("qubit " + std::to_string(q) + " outside memory");
  }
}

// Calls f(base, offsets) for every block of 2^|target| amplitudes whose
// non-target qubits satisfy `cond`. offsets[t] is the index displacement of
// target value t (target[0] most significant).
template <class F>
void for_each_block(int num_qubits, const Register& target, const Condition& cond, F&& f) {
  const std::size_t k = target.size();
  std::vector<std::uint64_t> off(std::size_t{1} << k, 0);
  std::uint64_t fixed = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint64_t b = qubit_bit(num_qubits, target[i]);
    if (fixed & b) throw InvalidArgument("operation target repeats a qubit");
    fixed |= b;
  }
  for (std::size_t t = 0; t < off.size(); ++t) {
    std::uint64_t o = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if ((t >> (k - 1 - i)) & 1U) o |= qubit_bit(num_qubits, target[i]);
    }
    off[t] = o;
  }
  std::uint64_t cond_value = 0;
  for (std::size_t i = 0; i < cond.qubits.size(); ++i) {
    const std::uint64_t b = qubit_bit(num_qubits, cond.qubits[i]);
    if (fixed & b) throw InvalidArgument("control qubit overlaps the target");
    fixed |= b;
    if (cond.values[i]) cond_value |= b;
  }
  const std::uint64_t total = std::uint64_t{1} << num_qubits;
  std::uint64_t i = 0;
  while (i < total) {
    f(i | cond_value, off);
    i = ((i | fixed) + 1) & ~fixed;
  }
}

void apply_matrix(std::vector<Complex>& amps, int nq, const Matrix& m, const Register& target,
                  const Condition& cond) {
  const auto d = static_cast<std::size_t>(m.rows());
  if (d == 2) {
    const Complex a = m(0, 0), b = m(0, 1), c = m(1, 0), e = m(1, 1);
    for_each_block(nq, target, cond, [&](std::uint64_t base, const std::vector<std::uint64_t>& off) {
      Complex& x0 = amps[base + off[0]];
      Complex& x1 = amps[base + off[1]];
      const Complex y0 = a * x0 + b * x1;
      const Complex y1 = c * x0 + e * x1;
      x0 = y0;
      x1 = y1;
    });
    return;
  }
  std::vector<Complex> buf(d), out(d);
  for_each_block(nq, target, cond, [&](std::uint64_t base, const std::vector<std::uint64_t>& off) {
    for (std::size_t t = 0; t < d; ++t) buf[t] = amps[base + off[t]];
    for (std::size_t r = 0; r < d; ++r) {
      Complex s = 0;
      for (std::size_t c = 0; c < d; ++c) s += m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) * buf[c];
      out[r] = s;
    }
    for (std::size_t t = 0; t < d; ++t) amps[base + off[t]] = out[t];
  });
}

void swap_pair(std::vector<Complex>& amps, int nq, const Register& target, const Condition& cond,
               std::size_t p, std::size_t q) {
  for_each_block(nq, target, cond, [&](std::uint64_t base, const std::vector<std::uint64_t>& off) {
    std::swap(amps[base + off[p]], amps[base + off[q]]);
  });
}

Condition extend(const Condition& cond, const Register& controls, std::uint64_t value) {
  Condition c = cond;
  const std::size_t w = controls.size();
  for (std::size_t i = 0; i < w; ++i) {
    c.qubits.push_back(controls[i]);
    c.values.push_back(static_cast<int>((value >> (w - 1 - i)) & 1U));
  }
  return c;
}

void apply_gate(std::vector<Complex>& amps, int nq, const Gate& gate, const Register& target,
                const Condition& cond) {
  std::visit(
      Overload{
          [&](const gates::Unitary1& g) { apply_matrix(amps, nq, g.m, target, cond); },
          [&](const gates::Dense& g) { apply_matrix(amps, nq, g.m, target, cond); },
          [&](const gates::PhaseLambda& g) {
            const Complex w = std::polar(1.0, g.phi);
            for_each_block(nq, target, cond, [&](std::uint64_t base, const std::vector<std::uint64_t>& off) {
              amps[base + off[1]] *= w;
            });
          },
          [&](const gates::Not&) { swap_pair(amps, nq, target, cond, 0, 1); },
          [&](const gates::Tau&) { swap_pair(amps, nq, target, cond, 2, 3); },
          [&](const gates::NotTau&) { swap_pair(amps, nq, target, cond, 0, 1); },
          [&](const gates::AndTau&) { swap_pair(amps, nq, target, cond, 6, 7); },
          [&](const gates::Permutation& g) {
            const auto& map = g.table->map();
            std::vector<Complex> buf(map.size());
            for_each_block(nq, target, cond, [&](std::uint64_t base, const std::vector<std::uint64_t>& off) {
              for (std::size_t t = 0; t < buf.size(); ++t) {
                buf[t] = amps[base + off[t]];
                amps[base + off[t]] = 0.0;
              }
              for (std::size_t t = 0; t < buf.size(); ++t) {
                if (map[t] == PermutationTable::kUndefined) {
                  if (std::abs(buf[t]) > kZeroAmplitude) {
                    throw DomainViolation("permutation met a supported basis state outside its domain");
                  }
                  continue;
                }
                amps[base + off[map[t]]] = buf[t];
              }
            });
          },
          [&](const gates::Controlled& g) {
            const auto w = static_cast<std::size_t>(g.width);
            const Register controls(target.begin(), target.begin() + static_cast<std::ptrdiff_t>(w));
            const Register rest(target.begin() + static_cast<std::ptrdiff_t>(w), target.end());
            apply_gate(amps, nq, *g.payload, rest, extend(cond, controls, g.trigger));
          },
          [&](const gates::Multiplexed& g) {
            const auto w = static_cast<std::size_t>(g.width);
            const Register controls(target.begin(), target.begin() + static_cast<std::ptrdiff_t>(w));
            const Register rest(target.begin() + static_cast<std::ptrdiff_t>(w), target.end());
            for (std::uint64_t a = 0; a < g.payloads.size(); ++a) {
              apply_gate(amps, nq, *g.payloads[a], rest, extend(cond, controls, a));
            }
          },
          [&](const gates::IntegerControlled& g) {
            const auto w = static_cast<std::size_t>(g.width);
            const Register rest(target.begin() + static_cast<std::ptrdiff_t>(w), target.end());
            for (std::size_t s = 0; s < g.powers.size(); ++s) {
              Condition c = cond;
              c.qubits.push_back(target[w - 1 - s]);
              c.values.push_back(1);
              apply_gate(amps, nq, *g.powers[s], rest, c);
            }
          },
          [&](const gates::Block& g) {
            std::vector<Complex> buf(std::size_t{1} << g.op->arity());
            for_each_block(nq, target, cond, [&](std::uint64_t base, const std::vector<std::uint64_t>& off) {
              for (std::size_t t = 0; t < buf.size(); ++t) buf[t] = amps[base + off[t]];
              g.op->apply(buf);
              for (std::size_t t = 0; t < buf.size(); ++t) amps[base + off[t]] = buf[t];
            });
          },
      },
      gate.kind());
}

std::uint64_t classical_apply(const Gate& gate, std::uint64_t v) {
  return std::visit(
      Overload{
          [&](const gates::Not&) { return v ^ 1U; },
          [&](const gates::Tau&) { return v ^ ((v >> 1) & 1U); },
          [&](const gates::NotTau&) { return v ^ (((v >> 1) & 1U) ^ 1U); },
          [&](const gates::AndTau&) { return v ^ ((v >> 2) & (v >> 1) & 1U); },
          [&](const gates::Permutation& g) { return (*g.table)(v); },
          [&](const gates::Controlled& g) {
            const int pa = g.payload->arity();
            const std::uint64_t low_mask = (std::uint64_t{1} << pa) - 1;
            if ((v >> pa) != g.trigger) return v;
            return (v & ~low_mask) | classical_apply(*g.payload, v & low_mask);
          },
          [&](const gates::Multiplexed& g) {
            const int pa = g.payloads.front()->arity();
            const std::uint64_t low_mask = (std::uint64_t{1} << pa) - 1;
            return (v & ~low_mask) | classical_apply(*g.payloads[v >> pa], v & low_mask);
          },
          [&](const gates::IntegerControlled& g) {
            const int pa = g.powers.empty() ? 0 : g.powers.front()->arity();
            const std::uint64_t low_mask = (std::uint64_t{1} << pa) - 1;
            const std::uint64_t a = v >> pa;
            std::uint64_t x = v & low_mask;
            for (std::size_t s = 0; s < g.powers.size(); ++s) {
              if ((a >> s) & 1U) x = classical_apply(*g.powers[s], x);
            }
            return (v & ~low_mask) | x;
          },
          [&](const auto&) -> std::uint64_t {
            throw InvalidArgument("run_classical: gate " + gate.name() + " is not classical");
          },
      },
      gate.kind());
}

}  // namespace

// -------------------------------------------------------------- StateVector

StateVector::StateVector(int num_qubits, int qubit_cap) : num_qubits_(num_qubits) {
  if (num_qubits < 0) throw InvalidArgument("StateVector: negative qubit count");
  if (num_qubits > std::min(qubit_cap, kMaxQubits)) {
    throw QubitBudgetExceeded("StateVector: " + std::to_string(num_qubits) + " qubits exceed the cap of " +
                              std::to_string(std::min(qubit_cap, kMaxQubits)));
  }
  amps_.assign(std::size_t{1} << num_qubits, Complex(0.0));
  amps_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, std::vector<Complex> amplitudes, int qubit_cap)
    : StateVector(num_qubits, qubit_cap) {
  if (amplitudes.size() != amps_.size()) throw DimensionMismatch("StateVector: amplitude count must be 2^n");
  for (const Complex& z : amplitudes) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw InvalidArgument("StateVector: non-finite amplitude");
  }
  amps_ = std::move(amplitudes);
  if (std::abs(norm() - 1.0) > 1e-9) throw InvalidArgument("StateVector: state is not normalized");
}

StateVector StateVector::basis(int num_qubits, std::uint64_t index, int qubit_cap) {
  StateVector s(num_qubits, qubit_cap);
  if (index >= s.dim()) throw InvalidArgument("StateVector::basis: index out of range");
  s.amps_[0] = 0.0;
  s.amps_[index] = 1.0;
  return s;
}

StateVector StateVector::from_vector(const qlinalg::Vector& v) {
  int n = 0;
  while ((Eigen::Index{1} << n) < v.size()) ++n;
  if ((Eigen::Index{1} << n) != v.size()) throw DimensionMismatch("StateVector::from_vector: size not 2^n");
  return StateVector(n, std::vector<Complex>(v.data(), v.data() + v.size()));
}

double StateVector::norm() const {
  double s = 0.0;
  for (const Complex& z : amps_) s += std::norm(z);
  return std::sqrt(s);
}

void StateVector::normalize() {
  const double n = norm();
  if (n <= 0.0) throw ResampleGuard("cannot normalize the zero vector");
  for (Complex& z : amps_) z /= n;
}

qlinalg::Vector StateVector::to_vector() const {
  return Eigen::Map<const qlinalg::Vector>(amps_.data(), static_cast<Eigen::Index>(amps_.size()));
}

void StateVector::set_register(const Register& reg, std::uint64_t value) {
  check_qubits(num_qubits_, reg);
  std::uint64_t mask = 0, shift = 0;
  const std::size_t w = reg.size();
  for (std::size_t i = 0; i < w; ++i) {
    const std::uint64_t b = qubit_bit(num_qubits_, reg[i]);
    mask |= b;
    if ((value >> (w - 1 - i)) & 1U) shift |= b;
  }
  if (shift == 0) return;
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if ((i & mask) == 0) continue;
    if (std::abs(amps_[i]) > kZeroAmplitude) throw InvalidArgument("set_register: register is not zero");
  }
  for (std::uint64_t i = 0; i < amps_.size(); ++i) {
    if ((i & mask) != 0) continue;
    amps_[i | shift] = amps_[i];
    amps_[i] = 0.0;
  }
}

// --------------------------------------------------------------- execution

void apply_in_place(StateVector& state, const Gate& gate, const Register& target, const Condition& cond) {
  if (static_cast<int>(target.size()) != gate.arity()) {
    throw InvalidArgument("apply: target width " + std::to_string(target.size()) + " differs from arity of " +
                          gate.name());
  }
  check_qubits(state.num_qubits(), target);
  check_qubits(state.num_qubits(), cond.qubits);
  apply_gate(state.amplitudes(), state.num_qubits(), gate, target, cond);
}

StateVector apply_operation(StateVector state, const Operation& op) {
  apply_in_place(state, op.gate, op.target);
  return state;
}

void run_in_place(StateVector& state, const OperationSequence& seq) {
  if (seq.memory_size > state.num_qubits()) throw DimensionMismatch("run_sequence: state smaller than the memory");
  for (const auto& op : seq.ops) apply_in_place(state, op.gate, op.target);
}

StateVector run_sequence(StateVector state, const OperationSequence& seq) {
  run_in_place(state, seq);
  return state;
}

std::uint64_t read_bits(const std::vector<int>& bits, const Register& reg) {
  std::uint64_t v = 0;
  for (QubitId q : reg) v = (v << 1) | static_cast<std::uint64_t>(bits.at(static_cast<std::size_t>(q)) & 1);
  return v;
}

void write_bits(std::vector<int>& bits, const Register& reg, std::uint64_t value) {
  const std::size_t w = reg.size();
  for (std::size_t i = 0; i < w; ++i) {
    bits.at(static_cast<std::size_t>(reg[i])) = static_cast<int>((value >> (w - 1 - i)) & 1U);
  }
}

std::vector<int> run_classical(const OperationSequence& seq, std::vector<int> bits) {
  if (static_cast<int>(bits.size()) < seq.memory_size) throw DimensionMismatch("run_classical: bit vector too short");
  for (const auto& op : seq.ops) {
    if (static_cast<int>(op.target.size()) != op.gate.arity()) throw InvalidArgument("run_classical: arity mismatch");
    const std::uint64_t v = read_bits(bits, op.target);
    write_bits(bits, op.target, classical_apply(op.gate, v));
  }
  return bits;
}

std::uint64_t register_value(std::uint64_t index, int num_qubits, const Register& reg) {
  std::uint64_t v = 0;
  for (QubitId q : reg) v = (v << 1) | ((index >> (num_qubits - 1 - q)) & 1U);
  return v;
}

std::string bitstring(std::uint64_t value, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((value >> (width - 1 - i)) & 1U) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

std::uint64_t parse_bitstring(const std::string& s) {
  if (s.size() > 63) throw InvalidArgument("bitstring too long");
  std::uint64_t v = 0;
  for (char c : s) {
    if (c != '0' && c != '1') throw InvalidArgument("bitstring may contain only 0 and 1");
    v = (v << 1) | static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

// ------------------------------------------------------------- measurement

std::vector<double> register_distribution(const StateVector& state, const Register& reg) {
  check_qubits(state.num_qubits(), reg);
  if (reg.size() > 24) throw InvalidArgument("register_distribution: register too wide");
  std::vector<double> p(std::size_t{1} << reg.size(), 0.0);
  const auto& a = state.amplitudes();
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    const double w = std::norm(a[i]);
    if (w != 0.0) p[register_value(i, state.num_qubits(), reg)] += w;
  }
  return p;
}

double project_register(StateVector& state, const Register& reg, std::uint64_t value) {
  auto& a = state.amplitudes();
  double prob = 0.0;
  for (std::uint64_t i = 0; i < a.size(); ++i) {
    if (register_value(i, state.num_qubits(), reg) == value) {
      prob += std::norm(a[i]);
    } else {
      a[i] = 0.0;
    }
  }
  if (prob < kZeroAmplitude) throw ResampleGuard("projection onto the measured outcome vanished");
  const double r = 1.0 / std::sqrt(prob);
  for (Complex& z : a) z *= r;
  return prob;
}

std::uint64_t measure_in_place(StateVector& state, const Register& reg, Rng& rng) {
  const auto p = register_distribution(state, reg);
  double total = 0.0;
  for (double x : p) total += x;
  double u = rng.uniform() * total;
  std::uint64_t outcome = p.size() - 1;
  for (std::uint64_t v = 0; v < p.size(); ++v) {
    if (u < p[v]) {
      outcome = v;
      break;
    }
    u -= p[v];
  }
  // rounding can leave u past the last nonzero entry
  while (outcome > 0 && p[outcome] == 0.0) --outcome;
  project_register(state, reg, outcome);
  return outcome;
}

MeasurementResult measure_register(StateVector state, const Register& reg, Rng& rng) {
  const std::uint64_t outcome = measure_in_place(state, reg, rng);
  return MeasurementResult{outcome, std::move(state)};
}

int measure_and_reset(StateVector& state, QubitId q, Rng& rng) {
  const int b = static_cast<int>(measure_in_place(state, {q}, rng));
  if (b) apply_in_place(state, Gate::not_gate(), {q});
  return b;
}

std::map<std::string, double> observable_probabilities(const StateVector& state,
                                                       const qlinalg::ObservableFamily& fam) {
  if (fam.ambient_dim() != state.dim()) throw DimensionMismatch("observable_probabilities: dimension mismatch");
  const qlinalg::Vector v = state.to_vector();
  std::map<std::string, double> out;
  double total = 0.0;
  for (const auto& part : fam.parts()) {
    const double p = qlinalg::quantum_probability(v, part.space);
    out[part.label] = p;
    total += p;
  }
  out[qlinalg::ObservableFamily::kResidualLabel] = std::clamp(1.0 - total, 0.0, 1.0);
  return out;
}

Matrix sequence_matrix(const OperationSequence& seq) {
  if (seq.memory_size > 12) throw QubitBudgetExceeded("sequence_matrix: memory above 12 qubits");
  const std::size_t d = std::size_t{1} << seq.memory_size;
  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t c = 0; c < d; ++c) {
    StateVector s = StateVector::basis(seq.memory_size, c);
    run_in_place(s, seq);
    for (std::size_t r = 0; r < d; ++r) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s[r];
  }
  return m;
}

Matrix Gate::matrix() const {
  if (arity() > 12) throw QubitBudgetExceeded("Gate::matrix: arity above 12");
  OperationSequence seq;
  seq.memory_size = arity();
  seq.add(*this, make_register(0, arity()));
  const std::size_t d = std::size_t{1} << arity();
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t c = 0; c < d; ++c) {
    StateVector s = StateVector::basis(arity(), c);
    try {
      run_in_place(s, seq);
    } catch (const DomainViolation&) {
      continue;  // column outside the domain of a partial permutation
    }
    for (std::size_t r = 0; r < d; ++r) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s[r];
  }
  return m;
}

}  // namespace kitaev
