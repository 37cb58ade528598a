#include <doctest.h>

#include <cmath>

#include "kitaev/errors.hpp"
#include "kitaev/gate.hpp"
#include "kitaev/qlinalg.hpp"

using namespace kitaev;
using namespace kitaev::qlinalg;

namespace {

Matrix diag(std::initializer_list<Complex> d) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (Complex z : d) m(i, i) = z, ++i;
  return m;
}

// Splits the columns of a Haar unitary into consecutive groups; the last
// `drop` columns are left out so the family has a residual.
ObservableFamily random_family(std::size_t dim, Rng& rng, std::size_t drop) {
  const Matrix u = random_unitary(dim, rng);
  std::vector<LabeledSubspace> parts;
  std::size_t col = 0;
  int label = 0;
  while (col < dim - drop) {
    const std::size_t w = std::min<std::size_t>(1 + (col % 3), dim - drop - col);
    parts.push_back({"v" + std::to_string(label++),
                     Subspace(dim, u.middleCols(static_cast<Eigen::Index>(col), static_cast<Eigen::Index>(w)))});
    col += w;
  }
  return ObservableFamily(dim, std::move(parts));
}

}  // namespace

TEST_CASE("quantum probability examples") {
  const Subspace zero = Subspace::classical(2, {0});
  CHECK(quantum_probability(basis_vector(2, 0), zero) == doctest::Approx(1.0));
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  CHECK(quantum_probability(plus, zero) == doctest::Approx(0.5));

  const std::vector<double> mu{0.1, 0.2, 0.3, 0.4};
  const auto rho = DensityMatrix::classical(mu);
  CHECK(quantum_probability(rho, Subspace::classical(4, {1, 3})) == doctest::Approx(0.6));
}

TEST_CASE("partial trace examples") {
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  const auto r1 = partial_trace(DensityMatrix::pure(bell), 2, 2, Keep::A);
  CHECK((r1.matrix() - diag({0.5, 0.5})).norm() < 1e-12);

  Rng rng(11, "ptrace");
  const auto a = random_density(2, rng);
  const auto b = random_density(4, rng);
  const DensityMatrix ab(tensor(a.matrix(), b.matrix()));
  CHECK((partial_trace(ab, 2, 4, Keep::A).matrix() - a.matrix()).norm() < 1e-12);
  CHECK((partial_trace(ab, 2, 4, Keep::B).matrix() - b.matrix()).norm() < 1e-12);

  const auto r01 = partial_trace(DensityMatrix::pure(basis_vector(4, 1)), 2, 2, Keep::A);
  CHECK((r01.matrix() - diag({1.0, 0.0})).norm() < 1e-12);
}

TEST_CASE("norm examples") {
  for (std::size_t d : {1, 2, 5, 8}) {
    CHECK(operator_norm(identity(d)) == doctest::Approx(1.0));
    CHECK(trace_norm(identity(d)) == doctest::Approx(static_cast<double>(d)));
  }
  CHECK(trace_norm(diag({1.0, -1.0})) == doctest::Approx(2.0));

  Rng rng(5, "norms");
  for (int t = 0; t < 20; ++t) {
    const Vector xi = random_state(6, rng);
    const Vector eta = random_state(6, rng);
    const Matrix d = xi * xi.adjoint() - eta * eta.adjoint();
    const double overlap = std::norm(xi.dot(eta));
    CHECK(trace_norm(d) == doctest::Approx(2.0 * std::sqrt(1.0 - overlap)).epsilon(1e-9));
  }
}

TEST_CASE("tensor examples") {
  CHECK((tensor(identity(2), identity(2)) - identity(4)).norm() < 1e-15);
  const Complex lam(0.3, 0.7);
  CHECK((tensor(diag({1.0, lam}), identity(2)) - diag({1.0, 1.0, lam, lam})).norm() < 1e-15);
  const Vector out = tensor(s_matrix(), s_matrix()) * basis_vector(4, 0);
  for (Eigen::Index i = 0; i < 4; ++i) CHECK(std::abs(out(i) - Complex(0.5, 0.0)) < 1e-15);
}

TEST_CASE("subspace construction") {
  Rng rng(3, "subspace");
  const Vector a = random_state(5, rng);
  const Vector b = random_state(5, rng);
  const Subspace s = Subspace::span(5, {a, b, a + 2.0 * b});
  CHECK(s.dim() == 2);
  const Matrix g = s.basis().adjoint() * s.basis();
  CHECK((g - Matrix::Identity(2, 2)).norm() < 1e-10);
  const Subspace c = s.complement();
  CHECK(c.dim() == 3);
  CHECK((s.basis().adjoint() * c.basis()).norm() < 1e-10);
  CHECK((s.projector() + c.projector() - identity(5)).norm() < 1e-10);

  Matrix not_orthonormal = Matrix::Zero(2, 1);
  not_orthonormal(0, 0) = 2.0;
  CHECK_THROWS_AS(Subspace(2, not_orthonormal), InvalidArgument);
}

TEST_CASE("density matrices are validated") {
  CHECK_THROWS_AS(DensityMatrix(diag({0.7, 0.7})), InvalidArgument);
  CHECK_THROWS_AS(DensityMatrix(diag({1.5, -0.5})), InvalidArgument);
  Matrix m = diag({0.5, 0.5});
  m(0, 1) = 0.1;
  CHECK_THROWS_AS(DensityMatrix{m}, InvalidArgument);
  Rng rng(8, "density");
  for (std::size_t rank : {1, 2, 0}) {
    const auto rho = random_density(4, rng, rank);
    CHECK(std::abs(rho.matrix().trace() - Complex(1.0, 0.0)) < 1e-10);
  }
}

TEST_CASE("observable families") {
  CHECK_THROWS_AS(ObservableFamily(2, {{"a", Subspace::classical(2, {0})}, {"b", Subspace::classical(2, {0})}}),
                  InvalidArgument);
  const auto fam = ObservableFamily(4, {{"low", Subspace::classical(4, {0, 1})}});
  CHECK(fam.residual().dim() == 2);
  CHECK_THROWS_AS(fam.part("high"), InvalidArgument);
}

TEST_CASE("probabilities over a family and its residual sum to one") {
  Rng rng(17, "family-sum");
  for (int t = 0; t < 30; ++t) {
    const std::size_t dim = 2 + static_cast<std::size_t>(rng.uniform_int(0, 14));
    const auto fam = random_family(dim, rng, static_cast<std::size_t>(rng.uniform_int(0, 1)));
    const auto rho = random_density(dim, rng);
    double total = quantum_probability(rho, fam.residual());
    for (const auto& part : fam.parts()) total += quantum_probability(rho, part.space);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("trace distance bounds the total variation of outcomes") {
  Rng rng(19, "tv-bound");
  for (int t = 0; t < 40; ++t) {
    const std::size_t dim = 2 + static_cast<std::size_t>(rng.uniform_int(0, 14));
    const auto fam = random_family(dim, rng, 0);
    const auto rho = random_density(dim, rng);
    const auto gamma = random_density(dim, rng, 1);
    double tv = 0.0;
    for (const auto& part : fam.parts()) {
      tv += std::abs(quantum_probability(rho, part.space) - quantum_probability(gamma, part.space));
    }
    CHECK(tv <= trace_norm(rho.matrix() - gamma.matrix()) + 1e-9);
  }
}

TEST_CASE("operator and trace norm inequalities") {
  Rng rng(23, "norm-ineq");
  for (int t = 0; t < 30; ++t) {
    const auto d = static_cast<Eigen::Index>(2 + rng.uniform_int(0, 6));
    Matrix a(d, d), b(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        a(i, j) = Complex(rng.normal(), rng.normal());
        b(i, j) = Complex(rng.normal(), rng.normal());
      }
    }
    CHECK(operator_norm(a * b) <= operator_norm(a) * operator_norm(b) * (1 + 1e-12));
    CHECK(trace_norm(a * b) <= operator_norm(b) * trace_norm(a) * (1 + 1e-12));
    CHECK(std::abs(a.trace()) <= trace_norm(a) * (1 + 1e-12));
    const auto sv = singular_values(a);
    for (std::size_t i = 1; i < sv.size(); ++i) CHECK(sv[i] <= sv[i - 1]);
  }
}

TEST_CASE("probabilities of product states factorize") {
  Rng rng(29, "independence");
  for (int t = 0; t < 20; ++t) {
    const auto ra = random_density(2, rng);
    const auto rb = random_density(4, rng);
    const auto fa = random_family(2, rng, 0);
    const auto fb = random_family(4, rng, 1);
    const Subspace ma = fa.parts().front().space;
    const Subspace mb = fb.parts().back().space;
    const DensityMatrix rab(tensor(ra.matrix(), rb.matrix()));
    CHECK(quantum_probability(rab, ma.tensor(mb)) ==
          doctest::Approx(quantum_probability(ra, ma) * quantum_probability(rb, mb)).epsilon(1e-10));
  }
}

TEST_CASE("random unitaries are unitary") {
  Rng rng(31, "haar");
  for (std::size_t d : {1, 2, 3, 8, 16}) CHECK(is_unitary(random_unitary(d, rng)));
  CHECK_FALSE(is_unitary(diag({1.0, 2.0})));
}
