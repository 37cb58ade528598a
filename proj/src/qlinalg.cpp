#include "kitaev/qlinalg.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "kitaev/errors.hpp"

namespace kitaev::qlinalg {

bool all_finite(const Matrix& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

bool is_unitary(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || !all_finite(m)) return false;
  const Matrix d = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || !all_finite(m)) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// ---------------------------------------------------------------- Subspace

Subspace::Subspace(std::size_t ambient_dim, Matrix orthonormal_basis)
    : ambient_dim_(ambient_dim), basis_(std::move(orthonormal_basis)) {
  if (basis_.cols() > 0 && static_cast<std::size_t>(basis_.rows()) != ambient_dim_) {
    throw DimensionMismatch("Subspace: basis rows differ from ambient dimension");
  }
  if (basis_.cols() == 0) basis_.resize(static_cast<Eigen::Index>(ambient_dim_), 0);
  if (!all_finite(basis_)) throw InvalidArgument("Subspace: non-finite basis");
  const Matrix gram = basis_.adjoint() * basis_;
  const Matrix err = gram - Matrix::Identity(gram.rows(), gram.cols());
  if (gram.size() > 0 && err.cwiseAbs().maxCoeff() > kUnitaryTol) {
    throw InvalidArgument("Subspace: basis is not orthonormal");
  }
}

Subspace Subspace::span(std::size_t ambient_dim, const std::vector<Vector>& vectors) {
  std::vector<Vector> kept;
  for (const Vector& v0 : vectors) {
    if (static_cast<std::size_t>(v0.size()) != ambient_dim) {
      throw DimensionMismatch("Subspace::span: vector of wrong dimension");
    }
    Vector v = v0;
    // two passes of modified Gram-Schmidt for stability
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& e : kept) v -= e * e.dot(v);
    }
    const double nrm = v.norm();
    if (nrm > 1e-9 * std::max(1.0, v0.norm())) kept.push_back(v / nrm);
  }
  Matrix b(static_cast<Eigen::Index>(ambient_dim), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) b.col(static_cast<Eigen::Index>(j)) = kept[j];
  return Subspace(ambient_dim, std::move(b));
}

Subspace Subspace::classical(std::size_t ambient_dim, const std::vector<std::size_t>& indices) {
  Matrix b = Matrix::Zero(static_cast<Eigen::Index>(ambient_dim),
                          static_cast<Eigen::Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] >= ambient_dim) throw InvalidArgument("Subspace::classical: index out of range");
    b(static_cast<Eigen::Index>(indices[j]), static_cast<Eigen::Index>(j)) = 1.0;
  }
  return Subspace(ambient_dim, std::move(b));
}

Subspace Subspace::zero(std::size_t ambient_dim) { return Subspace(ambient_dim, Matrix()); }

Subspace Subspace::full(std::size_t ambient_dim) {
  return Subspace(ambient_dim, identity(ambient_dim));
}

Matrix Subspace::projector() const {
  if (dim() == 0) return Matrix::Zero(static_cast<Eigen::Index>(ambient_dim_),
                                      static_cast<Eigen::Index>(ambient_dim_));
  return basis_ * basis_.adjoint();
}

Vector Subspace::project(const Vector& v) const {
  if (static_cast<std::size_t>(v.size()) != ambient_dim_) {
    throw DimensionMismatch("Subspace::project: dimension mismatch");
  }
  if (dim() == 0) return Vector::Zero(v.size());
  return basis_ * (basis_.adjoint() * v);
}

Subspace Subspace::complement() const {
  std::vector<Vector> candidates;
  std::vector<Vector> all;
  for (Eigen::Index j = 0; j < basis_.cols(); ++j) all.push_back(basis_.col(j));
  const std::size_t own = all.size();
  for (std::size_t i = 0; i < ambient_dim_; ++i) all.push_back(basis_vector(ambient_dim_, i));
  const Subspace s = span(ambient_dim_, all);
  // span keeps the first `own` vectors (already orthonormal) then extends
  Matrix rest = s.basis().rightCols(s.basis().cols() - static_cast<Eigen::Index>(own));
  return Subspace(ambient_dim_, std::move(rest));
}

Subspace Subspace::tensor(const Subspace& other) const {
  const std::size_t amb = ambient_dim_ * other.ambient_dim_;
  Matrix b(static_cast<Eigen::Index>(amb), static_cast<Eigen::Index>(dim() * other.dim()));
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < basis_.cols(); ++i) {
    for (Eigen::Index j = 0; j < other.basis_.cols(); ++j) {
      b.col(col++) = qlinalg::tensor(Vector(basis_.col(i)), Vector(other.basis_.col(j)));
    }
  }
  return Subspace(amb, std::move(b));
}

// ----------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(Matrix rho) : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols()) throw DimensionMismatch("DensityMatrix: not square");
  if (!is_hermitian(rho_)) throw InvalidArgument("DensityMatrix: not Hermitian");
  if (std::abs(rho_.trace() - Complex(1.0)) > kUnitaryTol) {
    throw InvalidArgument("DensityMatrix: trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().size() > 0 && es.eigenvalues().minCoeff() < -kUnitaryTol) {
    throw InvalidArgument("DensityMatrix: negative eigenvalue");
  }
}

DensityMatrix DensityMatrix::pure(const Vector& state) {
  const double n = state.norm();
  if (std::abs(n - 1.0) > 1e-9) throw InvalidArgument("DensityMatrix::pure: state not normalized");
  Matrix rho = state * state.adjoint();
  // symmetrize away rounding so the Hermiticity check is exact
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return DensityMatrix(std::move(rho));
}

DensityMatrix DensityMatrix::classical(const std::vector<double>& mu) {
  double total = 0.0;
  for (double p : mu) {
    if (!(p >= 0.0)) throw InvalidArgument("DensityMatrix::classical: negative weight");
    total += p;
  }
  if (std::abs(total - 1.0) > kUnitaryTol) {
    throw InvalidArgument("DensityMatrix::classical: weights do not sum to 1");
  }
  Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(mu.size()), static_cast<Eigen::Index>(mu.size()));
  for (std::size_t i = 0; i < mu.size(); ++i) rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = mu[i];
  return DensityMatrix(std::move(rho));
}

// --------------------------------------------------------- ObservableFamily

ObservableFamily::ObservableFamily(std::size_t ambient_dim, std::vector<LabeledSubspace> parts)
    : ambient_dim_(ambient_dim), parts_(std::move(parts)) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const Subspace& si = parts_[i].space;
    if (si.ambient_dim() != ambient_dim_) {
      throw DimensionMismatch("ObservableFamily: part with wrong ambient dimension");
    }
    if (parts_[i].label == kResidualLabel) {
      throw InvalidArgument("ObservableFamily: label '?' is reserved");
    }
    total += si.dim();
    for (std::size_t j = 0; j < i; ++j) {
      if (parts_[j].label == parts_[i].label) throw InvalidArgument("ObservableFamily: duplicate label");
      const Subspace& sj = parts_[j].space;
      if (si.dim() == 0 || sj.dim() == 0) continue;
      const Matrix overlap = sj.basis().adjoint() * si.basis();
      if (overlap.cwiseAbs().maxCoeff() > kUnitaryTol) {
        throw InvalidArgument("ObservableFamily: parts are not mutually orthogonal");
      }
    }
  }
  if (total > ambient_dim_) throw InvalidArgument("ObservableFamily: total dimension too large");
}

ObservableFamily ObservableFamily::standard(std::size_t ambient_dim) {
  std::vector<LabeledSubspace> parts;
  parts.reserve(ambient_dim);
  for (std::size_t i = 0; i < ambient_dim; ++i) {
    parts.push_back({std::to_string(i), Subspace::classical(ambient_dim, {i})});
  }
  return ObservableFamily(ambient_dim, std::move(parts));
}

const Subspace& ObservableFamily::part(const std::string& label) const {
  for (const auto& p : parts_) {
    if (p.label == label) return p.space;
  }
  throw InvalidArgument("ObservableFamily: unknown label " + label);
}

std::size_t ObservableFamily::total_dim() const {
  std::size_t t = 0;
  for (const auto& p : parts_) t += p.space.dim();
  return t;
}

Subspace ObservableFamily::residual() const {
  std::vector<Vector> all;
  for (const auto& p : parts_) {
    for (Eigen::Index j = 0; j < p.space.basis().cols(); ++j) all.push_back(p.space.basis().col(j));
  }
  return Subspace::span(ambient_dim_, all).complement();
}

// --------------------------------------------------------------- probability

namespace {

double clamp_probability(double p) {
  if (p < -kProbabilityClamp || p > 1.0 + kProbabilityClamp) {
    // outside the rounding window: the inputs were not a valid state
    throw InvalidArgument("quantum_probability: value outside [0,1]");
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

double quantum_probability(const Vector& state, const Subspace& sub) {
  if (static_cast<std::size_t>(state.size()) != sub.ambient_dim()) {
    throw DimensionMismatch("quantum_probability: dimension mismatch");
  }
  if (sub.dim() == 0) return 0.0;
  const Vector c = sub.basis().adjoint() * state;
  return clamp_probability(c.squaredNorm());
}

double quantum_probability(const DensityMatrix& rho, const Subspace& sub) {
  if (rho.dim() != sub.ambient_dim()) throw DimensionMismatch("quantum_probability: dimension mismatch");
  if (sub.dim() == 0) return 0.0;
  const Matrix& b = sub.basis();
  const Complex tr = (b.adjoint() * rho.matrix() * b).trace();
  return clamp_probability(tr.real());
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t dim_a, std::size_t dim_b, Keep keep) {
  if (dim_a * dim_b != rho.dim()) throw DimensionMismatch("partial_trace: dims do not factor");
  const Matrix& r = rho.matrix();
  const auto da = static_cast<Eigen::Index>(dim_a);
  const auto db = static_cast<Eigen::Index>(dim_b);
  Matrix out;
  if (keep == Keep::A) {
    out = Matrix::Zero(da, da);
    for (Eigen::Index a = 0; a < da; ++a)
      for (Eigen::Index b = 0; b < da; ++b)
        for (Eigen::Index c = 0; c < db; ++c) out(a, b) += r(a * db + c, b * db + c);
  } else {
    out = Matrix::Zero(db, db);
    for (Eigen::Index a = 0; a < db; ++a)
      for (Eigen::Index b = 0; b < db; ++b)
        for (Eigen::Index c = 0; c < da; ++c) out(a, b) += r(c * db + a, c * db + b);
  }
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(std::move(out));
}

// --------------------------------------------------------------------- norms

std::vector<double> singular_values(const Matrix& m) {
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  std::vector<double> out(s.data(), s.data() + s.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double operator_norm(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("operator_norm: matrix not square");
  const auto sv = singular_values(m);
  return sv.empty() ? 0.0 : sv.front();
}

double trace_norm(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("trace_norm: matrix not square");
  const auto sv = singular_values(m);
  return std::accumulate(sv.begin(), sv.end(), 0.0);
}

// -------------------------------------------------------------------- tensor

Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector tensor(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix identity(std::size_t dim) {
  return Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

Vector basis_vector(std::size_t dim, std::size_t index) {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

// ------------------------------------------------------------------- random

Matrix random_unitary(std::size_t dim, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix z(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) z(i, j) = Complex(rng.normal(), rng.normal()) / std::sqrt(2.0);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double a = std::abs(rjj);
    if (a > 0) q.col(j) *= rjj / a;
  }
  return q;
}

Vector random_state(std::size_t dim, Rng& rng) {
  Vector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(rng.normal(), rng.normal());
  return v / v.norm();
}

DensityMatrix random_density(std::size_t dim, Rng& rng, std::size_t rank) {
  if (rank == 0 || rank > dim) rank = dim;
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix g(d, static_cast<Eigen::Index>(rank));
  for (Eigen::Index i = 0; i < g.rows(); ++i)
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::move(rho));
}

}  // namespace kitaev::qlinalg
