#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>

#include "kitaev/boolean_circuit.hpp"
#include "kitaev/errors.hpp"
#include "kitaev/gate.hpp"
#include "kitaev/perturb.hpp"
#include "kitaev/state_vector.hpp"
#include "oracles.hpp"

using namespace kitaev;

namespace {

StateVector basis(int n, const std::string& bits) { return StateVector::basis(n, parse_bitstring(bits)); }

// index of the single populated amplitude, or -1
long long classical_index(const StateVector& s) {
  long long idx = -1;
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const double a = std::abs(s[i]);
    if (a > 1e-12) {
      if (idx >= 0 || std::abs(a - 1.0) > 1e-12) return -1;
      idx = static_cast<long long>(i);
    }
  }
  return idx;
}

OperationSequence random_quantum_sequence(int qubits, int length, Rng& rng) {
  OperationSequence seq;
  seq.memory_size = qubits;
  for (int i = 0; i < length; ++i) {
    const int a = static_cast<int>(rng.uniform_int(0, qubits - 1));
    int b = static_cast<int>(rng.uniform_int(0, qubits - 2));
    if (b >= a) ++b;
    switch (rng.uniform_int(0, 3)) {
      case 0: seq.add(Gate::unitary1(qlinalg::random_unitary(2, rng)), {a}); break;
      case 1: seq.add(Gate::tau(), {a, b}); break;
      case 2: seq.add(Gate::controlled(Gate::phase(rng.uniform() * 6.0)), {a, b}); break;
      default: seq.add(Gate::dense(qlinalg::random_unitary(4, rng)), {a, b}); break;
    }
  }
  return seq;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("basic gate actions") {
  CHECK(classical_index(run_sequence(basis(2, "10"), [] {
          OperationSequence s;
          s.memory_size = 2;
          s.add(Gate::tau(), {0, 1});
          return s;
        }())) == parse_bitstring("11"));

  StateVector s(1);
  apply_in_place(s, Gate::unitary1(s_matrix()), {0});
  CHECK(std::abs(s[0] - Complex(1 / std::sqrt(2.0), 0)) < 1e-15);
  CHECK(std::abs(s[1] - Complex(1 / std::sqrt(2.0), 0)) < 1e-15);

  Rng rng(1, "lambda");
  StateVector t = StateVector::from_vector(oracle::kron(oracle::fourier_vector(1, 1, 0), qlinalg::random_state(2, rng)));
  const auto before = t.amplitudes();
  apply_in_place(t, Gate::controlled(Gate::unitary1(qlinalg::random_unitary(2, rng))), {0, 1});
  for (std::size_t i = 0; i < before.size(); ++i) CHECK(std::abs(t[i] - before[i]) < 1e-15);
}

TEST_CASE("qubit 0 is the most significant bit") {
  CHECK(bitstring(5, 4) == "0101");
  CHECK(parse_bitstring("0101") == 5);
  StateVector s(3);
  apply_in_place(s, Gate::not_gate(), {0});
  CHECK(classical_index(s) == 4);
  CHECK(register_value(6, 3, {1, 2}) == 2);
  CHECK(register_value(6, 3, {2, 0}) == 1);
}

TEST_CASE("controlled triggers read the controls msb first") {
  const Gate g = Gate::controlled(Gate::not_gate(), 2, 0b10);
  StateVector a = basis(3, "100");
  apply_in_place(a, g, {0, 1, 2});
  CHECK(classical_index(a) == parse_bitstring("101"));
  StateVector b = basis(3, "010");
  apply_in_place(b, g, {0, 1, 2});
  CHECK(classical_index(b) == parse_bitstring("010"));
}

TEST_CASE("run_sequence examples") {
  Rng rng(2, "runseq");
  const auto xi = qlinalg::random_state(8, rng);
  OperationSequence empty;
  empty.memory_size = 3;
  CHECK((run_sequence(StateVector::from_vector(xi), empty).to_vector() - xi).norm() < 1e-15);

  OperationSequence twice;
  twice.memory_size = 3;
  twice.add(Gate::not_gate(), {0});
  twice.add(Gate::not_gate(), {0});
  CHECK((run_sequence(StateVector::from_vector(xi), twice).to_vector() - xi).norm() < 1e-15);

  BooleanCircuit c(2);
  c.set_outputs({c.add_and(0, 1)});
  const CompiledCircuit cc = compile_circuit(c);
  CHECK(classical_index(run_sequence(basis(3, "110"), cc.seq)) == parse_bitstring("111"));
}

TEST_CASE("sequences validate their targets") {
  OperationSequence s;
  s.memory_size = 2;
  s.add(Gate::tau(), {0, 0});
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  s.ops.back().target = {0, 2};
  CHECK_THROWS_AS(s.validate(), InvalidArgument);
  OperationSequence w;
  w.memory_size = 2;
  w.ops.push_back({Gate::tau(), {0}});
  CHECK_THROWS_AS(w.validate(), InvalidArgument);
  CHECK_THROWS_AS(StateVector(kMaxQubits + 1), QubitBudgetExceeded);
  CHECK_THROWS_AS(StateVector(4, 3), QubitBudgetExceeded);
}

TEST_CASE("permutation gates enforce their domain") {
  const auto u = PermutationTable::kUndefined;
  const Gate g = Gate::permutation(PermutationTable(2, {1, 0, u, u}));
  StateVector ok = basis(2, "01");
  apply_in_place(ok, g, {0, 1});
  CHECK(classical_index(ok) == 0);
  StateVector bad = basis(2, "10");
  CHECK_THROWS_AS(apply_in_place(bad, g, {0, 1}), DomainViolation);
  CHECK_THROWS_AS(PermutationTable(2, {0, 0, 1, 2}), InvalidArgument);
}

TEST_CASE("norm is preserved by random sequences") {
  Rng rng(3, "norm");
  for (int t = 0; t < 20; ++t) {
    const auto seq = random_quantum_sequence(5, 30, rng);
    const StateVector out = run_sequence(StateVector::from_vector(qlinalg::random_state(32, rng)), seq);
    CHECK(std::abs(out.norm() - 1.0) <= 1e-9);
  }
}

TEST_CASE("gates on one register leave disjoint marginals alone") {
  Rng rng(4, "locality");
  for (int t = 0; t < 20; ++t) {
    const auto left = qlinalg::random_state(4, rng);
    const auto right = qlinalg::random_state(8, rng);
    const StateVector s = StateVector::from_vector(oracle::kron(left, right));
    const auto seq = random_quantum_sequence(2, 10, rng);
    OperationSequence shifted;
    shifted.memory_size = 5;
    for (const auto& op : seq.ops) shifted.add(op.gate, op.target);  // acts on qubits 0,1
    const auto before = register_distribution(s, {2, 3, 4});
    const auto after = register_distribution(run_sequence(s, shifted), {2, 3, 4});
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(std::abs(before[i] - after[i]) < 1e-12);
  }
}

TEST_CASE("classical gates keep basis states classical") {
  Rng rng(5, "closure");
  for (int t = 0; t < 30; ++t) {
    OperationSequence seq;
    seq.memory_size = 5;
    for (int i = 0; i < 25; ++i) {
      Register r;
      while (r.size() < 3) {
        const int q = static_cast<int>(rng.uniform_int(0, 4));
        if (std::find(r.begin(), r.end(), q) == r.end()) r.push_back(q);
      }
      switch (rng.uniform_int(0, 2)) {
        case 0: seq.add(Gate::not_gate(), {r[0]}); break;
        case 1: seq.add(Gate::tau(), {r[0], r[1]}); break;
        default: seq.add(Gate::and_tau(), r); break;
      }
    }
    CHECK(seq.is_classical());
    const auto x = static_cast<std::uint64_t>(rng.uniform_int(0, 31));
    const long long idx = classical_index(run_sequence(StateVector::basis(5, x), seq));
    REQUIRE(idx >= 0);
    std::vector<int> bits(5);
    write_bits(bits, make_register(0, 5), x);
    CHECK(read_bits(run_classical(seq, bits), make_register(0, 5)) == static_cast<std::uint64_t>(idx));
  }
}

TEST_CASE("measurement examples") {
  qlinalg::Vector bell = qlinalg::Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const StateVector s = StateVector::from_vector(bell);
  const auto d = register_distribution(s, {0});
  CHECK(d[0] == doctest::Approx(0.5));
  CHECK(d[1] == doctest::Approx(0.5));
  Rng rng(6, "bell");
  for (int t = 0; t < 20; ++t) {
    const auto r = measure_register(s, {0}, rng);
    CHECK(classical_index(r.collapsed) == (r.outcome ? 3 : 0));
  }

  const StateVector c = basis(4, "1011");
  CHECK(measure_register(c, {1, 3}, rng).outcome == parse_bitstring("01"));
  CHECK(measure_register(c, {3, 0, 2}, rng).outcome == parse_bitstring("111"));
}

TEST_CASE("sampled frequencies match the exact marginal") {
  Rng rng(7, "freq");
  const StateVector s = StateVector::from_vector(qlinalg::random_state(8, rng));
  const Register reg{0, 2};
  const auto exact = register_distribution(s, reg);
  const int draws = 10000;
  std::vector<int> counts(4, 0);
  for (int t = 0; t < draws; ++t) ++counts[measure_register(s, reg, rng).outcome];
  for (std::size_t v = 0; v < 4; ++v) {
    const double sigma = std::sqrt(exact[v] * (1 - exact[v]) / draws);
    CHECK(std::abs(counts[v] / static_cast<double>(draws) - exact[v]) <= 3 * sigma + 1e-12);
  }
}

TEST_CASE("observable probabilities") {
  const std::uint64_t q = 3;
  std::vector<qlinalg::LabeledSubspace> parts;
  for (std::uint64_t h = 0; h < q; ++h) {
    parts.push_back({std::to_string(h), qlinalg::Subspace::span(4, {oracle::fourier_vector(q, 2, h)})});
  }
  const qlinalg::ObservableFamily fourier(4, parts);
  for (std::uint64_t a = 0; a < q; ++a) {
    const auto p = observable_probabilities(StateVector::basis(2, a), fourier);
    for (std::uint64_t h = 0; h < q; ++h) CHECK(p.at(std::to_string(h)) == doctest::Approx(1.0 / 3));
    CHECK(p.at("?") == doctest::Approx(0.0).epsilon(1e-12));
  }
  const auto own = observable_probabilities(StateVector::from_vector(oracle::fourier_vector(q, 2, 2)), fourier);
  CHECK(own.at("2") == doctest::Approx(1.0));

  const qlinalg::ObservableFamily half(4, {{"low", qlinalg::Subspace::classical(4, {0, 1})}});
  Rng rng(8, "half");
  CHECK(observable_probabilities(StateVector::from_vector(qlinalg::random_state(4, rng)), half).at("?") > 0.0);
}

TEST_CASE("boolean circuit evaluation") {
  BooleanCircuit c(2);
  c.set_outputs({c.add_and(0, 1)});
  CHECK(c.evaluate({1, 1}) == std::vector<int>{1});
  CHECK(c.evaluate({1, 0}) == std::vector<int>{0});
  CHECK_THROWS_AS(c.add_and(0, 7), WiringViolation);
  CHECK_THROWS_AS(c.add_and(1, 1), WiringViolation);
}

TEST_CASE("compiled circuits agree with direct evaluation") {
  Rng rng(9, "compile");
  for (int t = 0; t < 10; ++t) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 6));
    const BooleanCircuit c = random_circuit(n, 20, 3, rng);
    const CompiledCircuit cc = compile_circuit(c);
    CHECK(cc.seq.length() == static_cast<std::size_t>(c.num_gates()));
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
      std::vector<int> bits(static_cast<std::size_t>(cc.seq.memory_size), 0);
      write_bits(bits, cc.seq.input_register, x);
      CHECK(read_bits(run_classical(cc.seq, bits), cc.seq.output_register) == c.evaluate_int(x));
    }
  }
}

TEST_CASE("table synthesis reproduces the table") {
  for (std::uint64_t mult : {3u, 5u, 7u}) {
    const auto f = [mult](std::uint64_t x) { return (x * mult) % 16; };
    const BooleanCircuit c = circuit_from_table(4, 4, f);
    for (std::uint64_t x = 0; x < 16; ++x) CHECK(c.evaluate_int(x) == f(x));
  }
}

TEST_CASE("text format") {
  const std::string text =
      "# comment\n"
      "INPUTS 2\n"
      "NOT 0 -> 2\n"
      "AND 2 1    # ¬x0 ∧ x1\n"
      "OUTPUTS 3 0\n";
  const BooleanCircuit c = parse_circuit(text);
  CHECK(c.num_inputs() == 2);
  CHECK(c.num_gates() == 2);
  CHECK(c.evaluate_int(0b01) == 0b10);
  CHECK(c.evaluate_int(0b10) == 0b01);

  CHECK_THROWS_AS(parse_circuit("NOT 0\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_circuit("INPUTS 1\nNOT 0 -> 3\n"), WiringViolation);
  CHECK_THROWS_AS(parse_circuit("INPUTS 1\nNOT 4\n"), WiringViolation);
  CHECK_THROWS_AS(parse_circuit("INPUTS 1\nXOR 0 0\n"), InvalidArgument);
  CHECK_THROWS_AS(parse_circuit("INPUTS 1\nOUTPUTS 0\nNOT 0\n"), InvalidArgument);

  Rng rng(10, "roundtrip");
  for (int t = 0; t < 10; ++t) {
    const BooleanCircuit r = random_circuit(4, 15, 2, rng);
    const BooleanCircuit back = parse_circuit(format_circuit(r));
    CHECK(format_circuit(back) == format_circuit(r));
    for (std::uint64_t x = 0; x < 16; ++x) CHECK(back.evaluate_int(x) == r.evaluate_int(x));
  }
}

TEST_CASE("circuit corpus") {
  const std::string dir = std::string(KITAEV_DATA_DIR) + "/circuits/";
  const BooleanCircuit add = load_circuit(dir + "half_adder.circ");
  for (std::uint64_t x = 0; x < 4; ++x) CHECK(add.evaluate_int(x) == (x >> 1) + (x & 1));
  const BooleanCircuit maj = load_circuit(dir + "majority3.circ");
  for (std::uint64_t x = 0; x < 8; ++x) CHECK(maj.evaluate_int(x) == (std::popcount(x) >= 2 ? 1u : 0u));
  const BooleanCircuit cn = load_circuit(dir + "copy_not.circ");
  CHECK(cn.evaluate_int(0b10) == 0b001);
  CHECK(format_circuit(load_circuit(dir + "half_adder.circ")) == format_circuit(parse_circuit(slurp(dir + "half_adder.circ"))));
  CHECK_THROWS_AS(load_circuit(dir + "bad_destination.circ"), WiringViolation);
  CHECK_THROWS_AS(load_circuit(dir + "bad_same_wire.circ"), WiringViolation);
  CHECK_THROWS_AS(load_circuit(dir + "missing.circ"), InvalidArgument);
}

TEST_CASE("majority amplification") {
  for (double eps : {0.01, 0.1, 0.3}) {
    for (int k : {1, 3, 5, 9, 15}) CHECK(majority_error_exact(eps, k) <= majority_error_bound(eps, k) + 1e-15);
  }
  CHECK(majority_vote({0b101, 0b100, 0b001}, 3) == 0b101);
}

TEST_CASE("perturbation harness") {
  Rng rng(12, "perturb");
  const auto seq = random_quantum_sequence(4, 12, rng);
  const auto same = perturb_sequence(seq, 0.0, rng);
  CHECK((sequence_matrix(same) - sequence_matrix(seq)).norm() < 1e-14);

  for (double delta : {1e-3, 1e-2, 1e-1}) {
    const auto p = perturb_sequence(seq, delta, rng);
    REQUIRE(p.length() == seq.length());
    for (std::size_t i = 0; i < seq.length(); ++i) {
      CHECK(qlinalg::operator_norm(p.ops[i].gate.matrix() - seq.ops[i].gate.matrix()) <= delta + 1e-12);
    }
    CHECK(qlinalg::operator_norm(sequence_matrix(p) - sequence_matrix(seq)) <=
          static_cast<double>(seq.length()) * delta + 1e-12);
  }
}
