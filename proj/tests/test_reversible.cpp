#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kitaev/boolean_circuit.hpp"
#include "kitaev/errors.hpp"
#include "kitaev/reversible.hpp"
#include "kitaev/state_vector.hpp"
#include "oracles.hpp"

using namespace kitaev;
using qlinalg::Vector;

namespace {

std::vector<int> run_bits(const OperationSequence& seq, const std::vector<std::pair<Register, std::uint64_t>>& init) {
  std::vector<int> bits(static_cast<std::size_t>(seq.memory_size), 0);
  for (const auto& [reg, v] : init) write_bits(bits, reg, v);
  return run_classical(seq, bits);
}

// |in> on `io`, zeros elsewhere; returns the program output restricted to
// aux = 0 and the norm left outside it.
std::pair<Vector, double> run_on_io(const ReversibleProgram& p, const Vector& in) {
  const int mem = p.seq.memory_size;
  Vector full = Vector::Zero(Eigen::Index{1} << mem);
  for (Eigen::Index i = 0; i < in.size(); ++i) {
    std::uint64_t idx = 0;
    for (std::size_t b = 0; b < p.io.size(); ++b) {
      if ((static_cast<std::uint64_t>(i) >> (p.io.size() - 1 - b)) & 1U) idx |= std::uint64_t{1} << (mem - 1 - p.io[b]);
    }
    full(static_cast<Eigen::Index>(idx)) = in(i);
  }
  const Vector out = run_sequence(StateVector::from_vector(full), p.seq).to_vector();
  Vector io_part = Vector::Zero(in.size());
  double outside = 0.0;
  for (Eigen::Index idx = 0; idx < out.size(); ++idx) {
    const auto u = static_cast<std::uint64_t>(idx);
    if (register_value(u, mem, p.aux) != 0) {
      outside += std::norm(out(idx));
      continue;
    }
    io_part(static_cast<Eigen::Index>(register_value(u, mem, p.io))) += out(idx);
  }
  return {io_part, std::sqrt(outside)};
}

// Λ(u) on |c, ξ>: control most significant
Matrix lambda(const Matrix& u) {
  const auto d = u.rows();
  Matrix m = Matrix::Identity(2 * d, 2 * d);
  m.bottomRightCorner(d, d) = u;
  return m;
}

BooleanCircuit distinct_tap_circuit(int n, int gates, int m, Rng& rng) {
  for (;;) {
    BooleanCircuit c = random_circuit(n, gates, m, rng);
    auto taps = c.outputs();
    std::sort(taps.begin(), taps.end());
    if (std::adjacent_find(taps.begin(), taps.end()) == taps.end()) return c;
  }
}

}  // namespace

TEST_CASE("tau_n copies and is an involution") {
  OperationSequence seq;
  seq.memory_size = 6;
  append_tau_n(seq, {0, 1, 2}, {3, 4, 5});
  CHECK(seq.length() == 3);
  for (std::uint64_t u = 0; u < 8; ++u) {
    const auto bits = run_bits(seq, {{{0, 1, 2}, u}});
    CHECK(read_bits(bits, {3, 4, 5}) == u);
    CHECK(read_bits(run_classical(seq, bits), {3, 4, 5}) == 0);
  }
}

TEST_CASE("F_tau on a single AND") {
  BooleanCircuit c(2);
  c.set_outputs({c.add_and(0, 1)});
  const ReversibleProgram p = make_f_tau(c);
  CHECK(p.seq.length() == 3);
  CHECK(p.declared_length == 3);
  const Register u{0, 1}, v{2};
  CHECK(read_bits(run_bits(p.seq, {{u, 3}}), v) == 1);
  CHECK(read_bits(run_bits(p.seq, {{u, 3}, {v, 1}}), v) == 0);
  CHECK(read_bits(run_bits(p.seq, {{u, 2}}), v) == 0);
}

TEST_CASE("F_tau agrees with evaluation and restores its ancillas") {
  Rng rng(1, "ftau");
  for (int t = 0; t < 12; ++t) {
    const int n = 1 + static_cast<int>(rng.uniform_int(0, 5));
    const int m = 1 + static_cast<int>(rng.uniform_int(0, 2));
    const BooleanCircuit c = random_circuit(n, 10, m, rng);
    const ReversibleProgram p = make_f_tau(c);
    CHECK(p.seq.length() == static_cast<std::size_t>(2 * c.num_gates() + m));
    const Register u = make_register(0, n), v = make_register(n, m);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
      const auto y0 = static_cast<std::uint64_t>(rng.uniform_int(0, (1 << m) - 1));
      const auto bits = run_bits(p.seq, {{u, x}, {v, y0}});
      CHECK(read_bits(bits, u) == x);
      CHECK(read_bits(bits, v) == (y0 ^ c.evaluate_int(x)));
      CHECK(read_bits(bits, p.aux) == 0);
    }
  }
}

TEST_CASE("bijections") {
  SUBCASE("identity") {
    BooleanCircuit id(3);
    id.set_outputs({0, 1, 2});
    const ReversibleProgram p = make_bijection(id, id);
    CHECK(p.seq.length() == 12);
    for (std::uint64_t x = 0; x < 8; ++x) CHECK(read_bits(run_bits(p.seq, {{p.io, x}}), p.io) == x);
  }
  SUBCASE("bitwise not") {
    BooleanCircuit nt(3);
    nt.set_outputs({nt.add_not(0), nt.add_not(1), nt.add_not(2)});
    const ReversibleProgram p = make_bijection(nt, nt);
    CHECK(p.seq.length() == 2 * 3 + 2 * 3 + 12);
    for (std::uint64_t x = 0; x < 8; ++x) {
      const auto bits = run_bits(p.seq, {{make_register(0, 3), x}});
      CHECK(read_bits(bits, make_register(0, 3)) == (~x & 7U));
      CHECK(read_bits(bits, make_register(3, 3)) == 0);
      CHECK(read_bits(bits, p.aux) == 0);
    }
  }
  SUBCASE("modular multiplication action") {
    // (g, x) -> (g, 2^g x mod 5) on x in {1..4}, g one bit, 4 bits total
    const auto in_domain = [](std::uint64_t v) { return (v & 7U) >= 1 && (v & 7U) <= 4; };
    const auto fwd_f = [&](std::uint64_t v) -> std::uint64_t {
      if (!in_domain(v)) return v;
      const std::uint64_t g = v >> 3, x = v & 7U;
      return (g << 3) | (x * oracle::powmod(2, g, 5) % 5);
    };
    const auto inv_f = [&](std::uint64_t v) -> std::uint64_t {
      if (!in_domain(v)) return v;
      const std::uint64_t g = v >> 3, x = v & 7U;
      return (g << 3) | (x * oracle::powmod(3, g, 5) % 5);
    };
    const BooleanCircuit fwd = circuit_from_table(4, 4, fwd_f);
    const BooleanCircuit inv = circuit_from_table(4, 4, inv_f);
    const ReversibleProgram p = make_bijection(fwd, inv, in_domain);
    CHECK(p.seq.length() == static_cast<std::size_t>(2 * fwd.num_gates() + 2 * inv.num_gates() + 16));
    for (std::uint64_t v = 0; v < 16; ++v) {
      if (!in_domain(v)) continue;
      const auto bits = run_bits(p.seq, {{make_register(0, 4), v}});
      CHECK(read_bits(bits, make_register(0, 4)) == fwd_f(v));
      CHECK(read_bits(bits, make_register(4, 4)) == 0);
      CHECK(read_bits(bits, p.aux) == 0);
    }
  }
  SUBCASE("inconsistent inverse is rejected") {
    BooleanCircuit id(2);
    id.set_outputs({0, 1});
    BooleanCircuit sw(2);
    sw.set_outputs({1, sw.add_not(0)});
    CHECK_THROWS_AS(make_bijection(sw, sw), InvalidArgument);
  }
}

TEST_CASE("controlled gate for U fixing zero") {
  Matrix z = Matrix::Identity(2, 2);
  z(1, 1) = -1.0;
  const ReversibleProgram cz = controlled_fixing_zero(Gate::dense(z));
  CHECK(cz.seq.length() == 5);
  Rng rng(2, "fixzero");
  for (int t = 0; t < 5; ++t) {
    const Vector in = qlinalg::random_state(4, rng);
    const auto [out, leak] = run_on_io(cz, in);
    CHECK(leak < 1e-12);
    CHECK((out - lambda(z) * in).norm() < 1e-12);
  }

  std::vector<std::uint64_t> perm{0, 3, 5, 1, 7, 2, 6, 4};
  const Gate pg = Gate::permutation(PermutationTable(3, perm));
  const ReversibleProgram cp = controlled_fixing_zero(pg);
  CHECK(cp.seq.length() == 4 * 3 + 1);
  for (int t = 0; t < 5; ++t) {
    const Vector in = qlinalg::random_state(16, rng);
    const auto [out, leak] = run_on_io(cp, in);
    CHECK(leak < 1e-12);
    CHECK((out - lambda(pg.matrix()) * in).norm() < 1e-12);
  }
  const Vector off = oracle::kron(qlinalg::basis_vector(2, 0), qlinalg::random_state(8, rng));
  CHECK((run_on_io(cp, off).first - off).norm() < 1e-12);
}

TEST_CASE("controlled single-qubit gates") {
  Matrix x = Matrix::Zero(2, 2);
  x(0, 1) = x(1, 0) = 1.0;
  Rng rng(3, "lambda1");
  std::vector<Matrix> us{x, Matrix::Identity(2, 2)};
  for (int t = 0; t < 10; ++t) us.push_back(qlinalg::random_unitary(2, rng));
  for (const Matrix& u : us) {
    const ReversibleProgram p = controlled_single_qubit(u);
    for (int t = 0; t < 3; ++t) {
      const Vector in = qlinalg::random_state(4, rng);
      const auto [out, leak] = run_on_io(p, in);
      CHECK(leak < 1e-9);
      CHECK((out - lambda(u) * in).norm() < 1e-9);
    }
    const auto d = decompose_single_qubit(u);
    CHECK(std::abs(d.w(0, 0) - Complex(1.0, 0.0)) < 1e-9);
    CHECK((d.v.inverse() * d.w * d.v * std::exp(Complex(0, d.phi)) - u).norm() < 1e-9);
  }
}

TEST_CASE("lambda is multiplicative") {
  Rng rng(4, "functor");
  for (int t = 0; t < 10; ++t) {
    const std::size_t d = std::size_t{1} << rng.uniform_int(1, 3);
    const Matrix u = qlinalg::random_unitary(d, rng), v = qlinalg::random_unitary(d, rng);
    const Matrix luv = Gate::controlled(Gate::dense(u * v)).matrix();
    const Matrix lu = Gate::controlled(Gate::dense(u)).matrix();
    const Matrix lv = Gate::controlled(Gate::dense(v)).matrix();
    CHECK((luv - lu * lv).norm() < 1e-12);
    CHECK((lu - lambda(u)).norm() < 1e-12);
  }
}

TEST_CASE("control re-parameterization") {
  Rng rng(5, "reparam");
  SUBCASE("identity F gives T") {
    BooleanCircuit id(2);
    id.set_outputs({0, 1});
    std::vector<Gate> payloads;
    for (int i = 0; i < 4; ++i) payloads.push_back(Gate::unitary1(qlinalg::random_unitary(2, rng)));
    const Gate t = Gate::multiplexed(2, payloads);
    const ReversibleProgram p = control_reparam(id, t);
    CHECK(p.seq.length() == 1);
    CHECK((sequence_matrix(p.seq) - t.matrix()).norm() < 1e-12);
  }
  SUBCASE("random F against the direct multiplexer") {
    for (int trial = 0; trial < 4; ++trial) {
      const BooleanCircuit f = distinct_tap_circuit(4, 6, 2, rng);
      std::vector<Gate> payloads;
      std::vector<Matrix> mats;
      for (int i = 0; i < 4; ++i) {
        mats.push_back(qlinalg::random_unitary(2, rng));
        payloads.push_back(Gate::unitary1(mats.back()));
      }
      const ReversibleProgram p = control_reparam(f, Gate::multiplexed(2, payloads));
      CHECK(p.seq.length() == static_cast<std::size_t>(2 * f.num_gates() + 1));
      for (std::uint64_t a = 0; a < 16; ++a) {
        const Vector xi = qlinalg::random_state(2, rng);
        const Vector in = oracle::kron(qlinalg::basis_vector(16, a), xi);
        const auto [out, leak] = run_on_io(p, in);
        CHECK(leak < 1e-12);
        CHECK((out - oracle::kron(qlinalg::basis_vector(16, a), mats[f.evaluate_int(a)] * xi)).norm() < 1e-9);
      }
    }
  }
  SUBCASE("selecting a power from U^[0,r]") {
    // F(j) = 2^j on j in {0,1}, 2-bit output, so the payload is U^(2^j)
    const std::vector<std::uint64_t> cyc{1, 2, 3, 4, 0, 5, 6, 7};
    const Gate u = Gate::permutation(PermutationTable(3, cyc));
    const Gate upow = integer_controlled_power(u, 2);
    const BooleanCircuit f = circuit_from_table(1, 2, [](std::uint64_t j) { return std::uint64_t{1} << j; });
    const ReversibleProgram p = control_reparam(f, upow);
    for (std::uint64_t j = 0; j < 2; ++j) {
      for (std::uint64_t x = 0; x < 5; ++x) {
        const auto bits = run_bits(p.seq, {{{0}, j}, {make_register(1, 3), x}});
        CHECK(read_bits(bits, make_register(1, 3)) == (x + (std::uint64_t{1} << j)) % 5);
        CHECK(read_bits(bits, p.aux) == 0);
      }
    }
  }
}

TEST_CASE("rotation family") {
  const int b = 12;
  const OperationSequence r = rotation_gate(b);
  CHECK(r.length() == static_cast<std::size_t>(b));
  auto realized = [&](std::uint64_t theta) {
    Matrix m(2, 2);
    for (int col = 0; col < 2; ++col) {
      StateVector s = StateVector::basis(b + 1, (theta << 1) | static_cast<std::uint64_t>(col));
      run_in_place(s, r);
      m(0, col) = s[theta << 1];
      m(1, col) = s[(theta << 1) | 1U];
    }
    return m;
  };
  CHECK((realized(0) - Matrix::Identity(2, 2)).norm() < 1e-12);
  const Matrix quarter = realized(std::uint64_t{1} << (b - 2));
  CHECK(std::abs(std::abs(quarter(1, 0)) - 1.0) < 1e-12);
  Rng rng(6, "rotation");
  for (int t = 0; t < 10; ++t) {
    const double angle = rng.uniform() * 2 * oracle::kPi;
    const std::uint64_t theta = quantize_angle(angle, b);
    const Matrix exact = rotation_matrix(angle);
    CHECK(qlinalg::operator_norm(realized(theta) - exact) <= 1e-3);
  }
  CHECK(quantize_angle(2 * oracle::kPi - 1e-9, 8) == 0);
}

TEST_CASE("integer-controlled powers") {
  const std::vector<std::uint64_t> cyc{1, 2, 3, 4, 0, 5, 6, 7};
  const Gate u = Gate::permutation(PermutationTable(3, cyc));
  const Gate up = integer_controlled_power(u, 2);
  CHECK(up.arity() == 5);
  auto apply = [&](std::uint64_t a, std::uint64_t x) {
    StateVector s = StateVector::basis(5, (a << 3) | x);
    apply_in_place(s, up, make_register(0, 5));
    for (std::size_t i = 0; i < s.dim(); ++i) {
      if (std::abs(s[i]) > 0.5) return static_cast<std::uint64_t>(i) & 7U;
    }
    return ~std::uint64_t{0};
  };
  CHECK(apply(0, 3) == 3);
  CHECK(apply(1, 3) == 4);
  CHECK(apply(3, 1) == 4);
  for (std::uint64_t a = 0; a < 4; ++a) {
    for (std::uint64_t x = 0; x < 5; ++x) CHECK(apply(a, x) == (x + a) % 5);
  }
  const auto ladder = power_ladder(u, 3);
  CHECK(ladder.size() == 3);
  CHECK((ladder[2].matrix() - u.matrix() * u.matrix() * u.matrix() * u.matrix()).norm() < 1e-12);
}

TEST_CASE("bit permutations use 4n tau") {
  Rng rng(7, "permute");
  for (int n : {1, 3, 5, 8}) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const ReversibleProgram p = permute_bits(perm);
    CHECK(p.seq.length() == static_cast<std::size_t>(4 * n));
    CHECK(p.seq.length() == p.declared_length);
    for (int t = 0; t < 20; ++t) {
      const auto x = static_cast<std::uint64_t>(rng.uniform_int(0, (1 << n) - 1));
      const auto bits = run_bits(p.seq, {{p.io, x}});
      for (int i = 0; i < n; ++i) {
        CHECK(bits[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] == static_cast<int>((x >> (n - 1 - i)) & 1U));
      }
      CHECK(read_bits(bits, p.aux) == 0);
    }
  }
  CHECK_THROWS_AS(permute_bits({0, 0}), InvalidArgument);
}
