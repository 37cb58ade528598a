#include <doctest.h>

#include <cmath>

#include "kitaev/abelian_qft.hpp"
#include "kitaev/errors.hpp"
#include "kitaev/state_vector.hpp"
#include "oracles.hpp"

using namespace kitaev;
using oracle::cd;

namespace {

CyclicGroupSpec spec_of(std::uint64_t q) { return CyclicGroupSpec::make(q); }

// state on a register of width n, padded to memory `mem` with zeros after it
StateVector embed(const Eigen::VectorXcd& v, int mem) {
  const int used = static_cast<int>(std::log2(static_cast<double>(v.size())) + 0.5);
  Eigen::VectorXcd pad = Eigen::VectorXcd::Zero(Eigen::Index{1} << (mem - used));
  pad(0) = 1.0;
  return StateVector::from_vector(oracle::kron(v, pad));
}

Eigen::VectorXcd dft_column(const std::vector<std::uint64_t>& qs, const std::vector<std::uint64_t>& a) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
  for (std::size_t i = 0; i < qs.size(); ++i) v = oracle::kron(v, oracle::fourier_vector(qs[i], spec_of(qs[i]).n, a[i]));
  return v;
}

// mixed-radix digits, first factor most significant
std::vector<std::uint64_t> digits(std::uint64_t idx, const std::vector<std::uint64_t>& qs) {
  std::vector<std::uint64_t> a(qs.size());
  for (std::size_t i = qs.size(); i-- > 0;) {
    a[i] = idx % qs[i];
    idx /= qs[i];
  }
  return a;
}

}  // namespace

TEST_CASE("spec sizes") {
  CHECK(spec_of(2).n == 1);
  CHECK(spec_of(3).n == 2);
  CHECK(spec_of(4).n == 2);
  CHECK(spec_of(5).n == 3);
  CHECK(spec_of(8).n == 3);
  CHECK(spec_of(9).n == 4);
}

TEST_CASE("fourier states") {
  for (std::uint64_t q = 2; q <= 9; ++q) {
    const auto s = spec_of(q);
    for (std::uint64_t a = 0; a < q; ++a) CHECK((psi_vector(s, a) - oracle::fourier_vector(q, s.n, a)).norm() < 1e-12);
  }
}

TEST_CASE("uniform superposition preparation") {
  for (std::uint64_t q = 2; q <= 11; ++q) {
    const auto s = spec_of(q);
    const StateVector out = run_sequence(StateVector(s.n), prepare_psi_q0(s));
    CHECK((out.to_vector() - oracle::fourier_vector(q, s.n, 0)).norm() < 1e-8);
  }
}

TEST_CASE("phase operator is diagonal with the character phases") {
  for (std::uint64_t q = 2; q <= 8; ++q) {
    const auto s = spec_of(q);
    const auto u = u_q_phase(s);
    CHECK(u.length() == static_cast<std::size_t>(s.n * s.n));
    const auto m = sequence_matrix(u);
    const std::uint64_t dn = std::uint64_t{1} << s.n;
    double worst = 0.0;
    for (std::uint64_t a = 0; a < dn; ++a) {
      for (std::uint64_t b = 0; b < dn; ++b) {
        const auto i = static_cast<Eigen::Index>(a * dn + b);
        const cd want = std::polar(1.0, 2.0 * oracle::kPi * static_cast<double>(a * b) / static_cast<double>(q));
        worst = std::max(worst, std::abs(m(i, i) - want));
      }
    }
    CHECK(worst < 1e-12);
    CHECK((m - Eigen::MatrixXcd(m.diagonal().asDiagonal())).norm() < 1e-12);
  }
  const auto m4 = sequence_matrix(u_q_phase(spec_of(4)));
  CHECK(std::abs(m4(1 * 4 + 2, 1 * 4 + 2) - cd(-1.0, 0.0)) < 1e-12);
}

TEST_CASE("creation operator") {
  const auto s3 = spec_of(3);
  const StateVector out = run_sequence(StateVector::basis(4, 1 << 2), t_q(s3));
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(4);
  x(1) = 1.0;
  CHECK((out.to_vector() - oracle::kron(x, oracle::fourier_vector(3, 2, 1))).norm() < 1e-8);

  const auto s5 = spec_of(5);
  for (std::uint64_t a = 0; a < 5; ++a) {
    const StateVector o = run_sequence(StateVector::basis(6, a << 3), t_q(s5));
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(8);
    e(static_cast<Eigen::Index>(a)) = 1.0;
    CHECK(std::norm(oracle::kron(e, oracle::fourier_vector(5, 3, a)).dot(o.to_vector())) >= 1 - 1e-6);
  }
}

TEST_CASE("measurement statistics") {
  const auto s5 = spec_of(5);
  const double eps = 1e-4;
  const int shots = q_q_shots(s5, eps);
  const auto st = q_q_statistics(s5, shots);
  CHECK(st.max_error() <= eps);
  CHECK(q_q_statistics(s5, shots - 1).max_error() > eps);
  for (std::uint64_t a = 0; a < 5; ++a) {
    double total = st.fail[a];
    for (double p : st.p[a]) total += p;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  }

  CHECK(decode_cycle_phase(RationalPhase::make(1, 4), 4) == std::optional<std::uint64_t>(3));
  CHECK(decode_cycle_phase(RationalPhase::make(0, 1), 4) == std::optional<std::uint64_t>(0));
  CHECK_FALSE(decode_cycle_phase(RationalPhase::make(1, 3), 4).has_value());
}

TEST_CASE("reversible measurement") {
  const auto s2 = spec_of(2);
  CHECK(q_q_deviation(s2, 1e-6) <= 2 * std::sqrt(2 * 1e-6));
  const auto s8 = spec_of(8);
  CHECK(q_q_deviation(s8, 1e-6) <= 2 * std::sqrt(8 * 1e-6));

  const Gate g = q_q(s2, 1e-3);
  REQUIRE(g.arity() == 4);
  const auto m = g.matrix();
  CHECK((m * m - Eigen::MatrixXcd::Identity(16, 16)).norm() < 1e-10);
  CHECK((m * m.adjoint() - Eigen::MatrixXcd::Identity(16, 16)).norm() < 1e-10);
  CHECK((g.inverse().matrix() - m).norm() < 1e-10);
}

TEST_CASE("compressed measurement matches the full-ancilla circuit") {
  for (auto [q, shots] : std::vector<std::pair<std::uint64_t, int>>{{2, 1}, {2, 2}, {3, 1}}) {
    const auto s = spec_of(q);
    const LiteralQq lit = literal_q_q(s, shots);
    const auto st = q_q_statistics(s, shots, 0);
    const QqOperator op(s, st);
    for (std::uint64_t a = 0; a < q; ++a) {
      const StateVector out = run_sequence(embed(psi_vector(s, a), lit.seq.memory_size), lit.seq);
      const auto py = register_distribution(out, lit.y);
      StateVector c = embed(psi_vector(s, a), 3 * s.n + 1);
      apply_in_place(c, Gate::block(std::make_shared<QqOperator>(op)), make_register(0, 3 * s.n + 1));
      const auto pc = register_distribution(c, make_register(s.n, s.n));
      for (std::uint64_t y = 0; y < py.size(); ++y) {
        double want = y < q ? st.p[a][y] : 0.0;
        if (y == 0) want += st.fail[a];
        CHECK(py[y] == doctest::Approx(want).epsilon(1e-9).scale(1.0));
        CHECK(pc[y] == doctest::Approx(want).epsilon(1e-9).scale(1.0));
      }
      const auto px = register_distribution(out, lit.x);
      const auto ideal = register_distribution(StateVector::from_vector(psi_vector(s, a)), make_register(0, s.n));
      for (std::size_t x = 0; x < px.size(); ++x) CHECK(px[x] == doctest::Approx(ideal[x]).scale(1.0));
    }
  }
}

TEST_CASE("fourier transform on small cyclic groups") {
  const auto p2 = qft(spec_of(2), 1e-6);
  for (std::uint64_t a = 0; a < 2; ++a) {
    const auto col = qft_column(p2, {a});
    Eigen::VectorXcd h(2);
    h << 1.0 / std::sqrt(2.0), (a ? -1.0 : 1.0) / std::sqrt(2.0);
    CHECK((col.x_part - h).norm() < 1e-2);
    CHECK(col.fidelity >= 1 - 1e-5);
  }
  const auto p4 = qft(spec_of(4), 1e-6);
  for (std::uint64_t a = 0; a < 4; ++a) {
    const auto col = qft_column(p4, {a});
    Eigen::VectorXcd d(4);
    const cd i(0.0, 1.0);
    for (std::uint64_t b = 0; b < 4; ++b) d(static_cast<Eigen::Index>(b)) = 0.5 * std::pow(i, static_cast<int>(a * b));
    CHECK((col.x_part - d).norm() < 2 * std::sqrt(4 * 1e-6));
  }
  const auto p6 = qft(spec_of(6), 1e-6);
  CHECK(p6.memory() == 10);
  const auto c6 = qft_column(p6, {1});
  CHECK((c6.x_part - oracle::fourier_vector(6, 3, 1)).norm() < 2 * std::sqrt(6 * 1e-6));
  CHECK_THROWS_AS(qft_column(p6, {6}), InvalidArgument);
}

TEST_CASE("fourier transform on products") {
  const double eps = 1e-6;
  const auto z22 = qft_abelian({spec_of(2), spec_of(2)}, eps);
  CHECK((qft_column(z22, {1, 0}).x_part - dft_column({2, 2}, {1, 0})).norm() < 1e-2);
  const auto z23 = qft_abelian({spec_of(2), spec_of(3)}, eps);
  CHECK((qft_column(z23, {1, 1}).x_part - dft_column({2, 3}, {1, 1})).norm() < 1e-2);
  CHECK((product_psi({spec_of(2), spec_of(3)}, {1, 1}) - dft_column({2, 3}, {1, 1})).norm() < 1e-12);

  // full 12x12 character table of Z4 x Z3, restricted to valid indices
  const std::vector<std::uint64_t> qs{4, 3};
  const auto z43 = qft_abelian({spec_of(4), spec_of(3)}, eps);
  CHECK(z43.memory() == 14);
  std::vector<Eigen::VectorXcd> cols;
  double worst = 0.0;
  for (std::uint64_t idx = 0; idx < 12; ++idx) {
    const auto a = digits(idx, qs);
    const auto col = qft_column(z43, a);
    worst = std::max(worst, std::sqrt((col.x_part - dft_column(qs, a)).squaredNorm() + col.residual * col.residual));
    cols.push_back(col.x_part);
  }
  CHECK(worst <= 2 * std::sqrt(12 * eps));
  for (std::size_t i = 0; i < cols.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const cd g = cols[i].dot(cols[j]);
      CHECK(std::abs(g - cd(i == j ? 1.0 : 0.0, 0.0)) < 1e-3);
    }
  }
}

TEST_CASE("transform error shrinks with the precision") {
  for (double eps : {1e-4, 1e-6, 1e-8}) {
    for (std::uint64_t q : {3, 5}) {
      const auto prog = qft(spec_of(q), eps);
      for (std::uint64_t a = 0; a < q; ++a) {
        const auto col = qft_column(prog, {a});
        const double dev =
            std::sqrt((col.x_part - oracle::fourier_vector(q, spec_of(q).n, a)).squaredNorm() + col.residual * col.residual);
        CHECK(dev <= 2 * std::sqrt(static_cast<double>(q) * eps));
      }
    }
  }
}

TEST_CASE("qubit budget") {
  CHECK_THROWS_AS(qft(spec_of(512), 1e-6), QubitBudgetExceeded);
  CHECK_THROWS_AS(qft_abelian({spec_of(64), spec_of(64)}, 1e-6), QubitBudgetExceeded);
  CHECK_THROWS_AS(StateVector(27), QubitBudgetExceeded);
  CHECK_THROWS_AS(qft_column(qft(spec_of(8), 1e-6), {0}, 8), QubitBudgetExceeded);
  CHECK_THROWS_AS(qft_abelian({}, 1e-6), InvalidArgument);
}
