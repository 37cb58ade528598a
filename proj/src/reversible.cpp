#include "kitaev/reversible.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "kitaev/errors.hpp"
#include "kitaev/rng.hpp"
#include "kitaev/state_vector.hpp"

namespace kitaev {

void append_tau_n(OperationSequence& seq, const Register& a, const Register& b) {
  if (a.size() != b.size()) throw DimensionMismatch("tau_n: registers differ in width");
  for (std::size_t i = 0; i < a.size(); ++i) seq.add(Gate::tau(), {a[i], b[i]});
}

OperationSequence f_tau_onto(const BooleanCircuit& c, const Register& u, const Register& v, const Register& aux,
                             int memory_size) {
  if (static_cast<int>(v.size()) != c.num_outputs()) throw InvalidArgument("F_tau: output register width");
  OperationSequence g = compile_onto(c, u, aux, memory_size);
  OperationSequence seq;
  seq.memory_size = memory_size;
  seq.append(g);
  for (std::size_t j = 0; j < v.size(); ++j) seq.add(Gate::tau(), {g.output_register[j], v[j]});
  seq.append(g.inverse());
  seq.input_register = concat(u, v);
  seq.output_register = concat(u, v);
  return seq;
}

ReversibleProgram make_f_tau(const BooleanCircuit& c) {
  const int n = c.num_inputs(), m = c.num_outputs(), l = c.num_gates();
  ReversibleProgram p;
  p.io = make_register(0, n + m);
  p.aux = make_register(n + m, l);
  p.seq = f_tau_onto(c, make_register(0, n), make_register(n, m), p.aux, n + m + l);
  p.declared_length = static_cast<std::size_t>(2 * l + m);
  if (p.seq.length() != p.declared_length) throw Error("make_f_tau: length bookkeeping broken");
  return p;
}

ReversibleProgram make_bijection(const BooleanCircuit& fwd, const BooleanCircuit& inv,
                                 const std::function<bool(std::uint64_t)>& in_domain, std::uint64_t probe_seed) {
  const int n = fwd.num_inputs();
  if (fwd.num_outputs() != n || inv.num_inputs() != n || inv.num_outputs() != n) {
    throw InvalidArgument("make_bijection: both circuits must map n bits to n bits");
  }
  auto check = [&](std::uint64_t x) {
    if (in_domain && !in_domain(x)) return;
    const std::uint64_t y = fwd.evaluate_int(x);
    if (inv.evaluate_int(y) != x) {
      throw InvalidArgument("make_bijection: inverse circuit disagrees at x = " + bitstring(x, n));
    }
  };
  if (n <= 10) {
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) check(x);
  } else {
    Rng rng(probe_seed, "bijection-probe");
    for (int i = 0; i < 1000; ++i) check(static_cast<std::uint64_t>(rng.uniform_int(0, (std::int64_t{1} << n) - 1)));
  }
  const int l = fwd.num_gates(), l2 = inv.num_gates();
  const int w = std::max(l, l2);
  const int mem = 2 * n + w;
  const Register x = make_register(0, n), y = make_register(n, n), aux = make_register(2 * n, w);
  ReversibleProgram p;
  p.io = x;
  p.aux = concat(y, aux);
  p.seq.memory_size = mem;
  p.seq.append(f_tau_onto(fwd, x, y, aux, mem));  // (x,0) -> (x,G(x))
  p.seq.append(f_tau_onto(inv, y, x, aux, mem));  // -> (0,G(x))
  append_tau_n(p.seq, y, x);                      // -> (G(x),G(x))
  append_tau_n(p.seq, x, y);                      // -> (G(x),0)
  p.seq.input_register = x;
  p.seq.output_register = x;
  p.declared_length = static_cast<std::size_t>(2 * l + 2 * l2 + 4 * n);
  if (p.seq.length() != p.declared_length) throw Error("make_bijection: length bookkeeping broken");
  return p;
}

namespace {

bool gate_fixes_zero(const Gate& u) {
  if (const auto* p = std::get_if<gates::Permutation>(&u.kind())) return p->table->fixes_zero();
  if (u.arity() > 12) throw InvalidArgument("controlled_fixing_zero: payload too wide to check");
  const Matrix m = u.matrix();
  qlinalg::Vector e0 = qlinalg::Vector::Zero(m.rows());
  e0(0) = 1.0;
  return (m.col(0) - e0).norm() <= 1e-10;
}

}  // namespace

ReversibleProgram controlled_fixing_zero(const Gate& u) {
  if (!gate_fixes_zero(u)) throw InvalidArgument("controlled_fixing_zero: U does not fix |0>");
  const int n = u.arity();
  const Register a = make_register(1, n), b = make_register(n + 1, n);
  ReversibleProgram p;
  p.seq.memory_size = 2 * n + 1;
  auto lambda_tau_n = [&](const Register& from, const Register& to) {
    for (int i = 0; i < n; ++i) p.seq.add(Gate::and_tau(), {0, from[static_cast<std::size_t>(i)], to[static_cast<std::size_t>(i)]});
  };
  lambda_tau_n(a, b);
  lambda_tau_n(b, a);
  p.seq.add(u, b);
  lambda_tau_n(b, a);
  lambda_tau_n(a, b);
  p.io = concat({0}, a);
  p.aux = b;
  p.seq.input_register = p.io;
  p.seq.output_register = p.io;
  p.declared_length = static_cast<std::size_t>(4 * n + 1);
  if (p.seq.length() != p.declared_length) throw Error("controlled_fixing_zero: length bookkeeping broken");
  return p;
}

SingleQubitDecomposition decompose_single_qubit(const Matrix& u) {
  if (u.rows() != 2 || u.cols() != 2 || !qlinalg::is_unitary(u)) {
    throw InvalidArgument("decompose_single_qubit: need a 2x2 unitary");
  }
  Eigen::ComplexSchur<Matrix> schur(u);
  Matrix q = schur.matrixU();
  Complex l0 = schur.matrixT()(0, 0), l1 = schur.matrixT()(1, 1);
  if (std::arg(l1) < std::arg(l0)) {
    std::swap(l0, l1);
    q.col(0).swap(q.col(1));
  }
  SingleQubitDecomposition d;
  d.v = q.adjoint();
  d.w = Matrix::Identity(2, 2);
  d.w(1, 1) = l1 / l0;
  d.w(1, 1) /= std::abs(d.w(1, 1));
  d.phi = std::arg(l0);
  return d;
}

ReversibleProgram controlled_single_qubit(const Matrix& u) {
  const auto d = decompose_single_qubit(u);
  ReversibleProgram lw = controlled_fixing_zero(Gate(gates::Unitary1{d.w}));  // c=0, A=1, B=2
  ReversibleProgram p;
  p.seq.memory_size = 3;
  p.seq.add(Gate(gates::Unitary1{d.v}), {1});
  p.seq.append(lw.seq);
  p.seq.add(Gate(gates::Unitary1{d.v.adjoint()}), {1});
  p.seq.add(Gate::phase(d.phi), {0});
  p.io = {0, 1};
  p.aux = {2};
  p.seq.input_register = p.io;
  p.seq.output_register = p.io;
  p.declared_length = p.seq.length();
  return p;
}

ReversibleProgram control_reparam(const BooleanCircuit& f, const Gate& t) {
  const int k = f.num_inputs(), l = f.num_outputs(), gates_l = f.num_gates();
  const int pa = t.arity() - l;
  if (pa < 0) throw InvalidArgument("control_reparam: T narrower than F's output");
  const int mem = k + pa + gates_l;
  const Register a = make_register(0, k), payload = make_register(k, pa), aux = make_register(k + pa, gates_l);
  OperationSequence g = compile_onto(f, a, aux, mem);
  check_distinct(g.output_register);
  ReversibleProgram p;
  p.seq.memory_size = mem;
  p.seq.append(g);
  p.seq.add(t, concat(g.output_register, payload));
  p.seq.append(g.inverse());
  p.io = concat(a, payload);
  p.aux = aux;
  p.seq.input_register = p.io;
  p.seq.output_register = p.io;
  p.declared_length = static_cast<std::size_t>(2 * gates_l + 1);
  if (p.seq.length() != p.declared_length) throw Error("control_reparam: length bookkeeping broken");
  return p;
}

OperationSequence rotation_gate(int theta_bits) {
  if (theta_bits < 1 || theta_bits > 62) throw InvalidArgument("rotation_gate: theta_bits must be in [1, 62]");
  OperationSequence seq;
  seq.memory_size = theta_bits + 1;
  for (int s = 1; s <= theta_bits; ++s) {
    const double angle = 2.0 * std::numbers::pi * std::ldexp(1.0, -s);
    seq.add(Gate::controlled(Gate(gates::Unitary1{rotation_matrix(angle)})), {s - 1, theta_bits});
  }
  seq.input_register = make_register(0, theta_bits + 1);
  seq.output_register = seq.input_register;
  return seq;
}

std::uint64_t quantize_angle(double theta, int theta_bits) {
  const long double turns = static_cast<long double>(theta) / (2.0L * std::numbers::pi_v<long double>);
  long double frac = turns - std::floor(turns);
  const auto q = static_cast<std::uint64_t>(std::llround(std::ldexp(frac, theta_bits)));
  return q & ((std::uint64_t{1} << theta_bits) - 1);
}

void append_rotation(OperationSequence& seq, std::uint64_t theta, int theta_bits, QubitId target,
                     const Register& controls, std::uint64_t trigger) {
  for (int s = 1; s <= theta_bits; ++s) {
    if (((theta >> (theta_bits - s)) & 1U) == 0) continue;
    Gate r(gates::Unitary1{rotation_matrix(2.0 * std::numbers::pi * std::ldexp(1.0, -s))});
    if (controls.empty()) {
      seq.add(std::move(r), {target});
    } else {
      seq.add(Gate::controlled(std::move(r), static_cast<int>(controls.size()), trigger), concat(controls, {target}));
    }
  }
}

std::vector<Gate> power_ladder(const Gate& u, int l) {
  std::vector<Gate> out;
  out.reserve(static_cast<std::size_t>(l));
  for (int s = 0; s < l; ++s) {
    if (s == 0) {
      out.push_back(u);
      continue;
    }
    const Gate& prev = out.back();
    if (const auto* p = std::get_if<gates::Permutation>(&prev.kind())) {
      out.push_back(Gate::permutation(p->table->compose(*p->table)));
    } else if (const auto* m = std::get_if<gates::Unitary1>(&prev.kind())) {
      out.push_back(Gate(gates::Unitary1{m->m * m->m}));
    } else if (const auto* d = std::get_if<gates::Dense>(&prev.kind())) {
      out.push_back(Gate(gates::Dense{d->m * d->m, d->arity}));
    } else {
      if (prev.arity() > 10) throw InvalidArgument("power_ladder: payload too wide to square densely");
      const Matrix m2 = prev.matrix();
      out.push_back(Gate(gates::Dense{m2 * m2, prev.arity()}));
    }
  }
  return out;
}

Gate integer_controlled_power(const Gate& u, int l) {
  if (l < 1 || l > 62) throw InvalidArgument("integer_controlled_power: l must be in [1, 62]");
  std::vector<GatePtr> ps;
  for (auto& g : power_ladder(u, l)) ps.push_back(std::make_shared<const Gate>(std::move(g)));
  return Gate(gates::IntegerControlled{l, std::move(ps)});
}

ReversibleProgram permute_bits(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<int> seen(perm.size(), 0);
  for (int v : perm) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]++) throw InvalidArgument("permute_bits: not a permutation");
  }
  const Register x = make_register(0, n), y = make_register(n, n);
  ReversibleProgram p;
  p.seq.memory_size = 2 * n;
  for (int i = 0; i < n; ++i) p.seq.add(Gate::tau(), {x[i], y[perm[i]]});
  for (int i = 0; i < n; ++i) p.seq.add(Gate::tau(), {y[perm[i]], x[i]});
  append_tau_n(p.seq, y, x);
  append_tau_n(p.seq, x, y);
  p.io = x;
  p.aux = y;
  p.seq.input_register = x;
  p.seq.output_register = x;
  p.declared_length = static_cast<std::size_t>(4 * n);
  return p;
}

}  // namespace kitaev
