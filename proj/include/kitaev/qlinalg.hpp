#pragma once

// Dense complex linear algebra for small quantum systems: subspaces,
// projectors, quantum probability, density operators, partial trace and
// the operator / trace norms.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "kitaev/rng.hpp"

namespace kitaev::qlinalg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kProbabilityClamp = 1e-12;

bool is_unitary(const Matrix& m, double tol = kUnitaryTol);
bool is_hermitian(const Matrix& m, double tol = kUnitaryTol);
bool all_finite(const Matrix& m);

/// Linear subspace of C^d held as an orthonormal basis (columns).
class Subspace {
 public:
  Subspace() = default;

  /// Takes an already orthonormal basis; throws if it is not.
  Subspace(std::size_t ambient_dim, Matrix orthonormal_basis);

  /// Orthonormalizes arbitrary spanning vectors (modified Gram-Schmidt,
  /// dependent vectors dropped).
  static Subspace span(std::size_t ambient_dim, const std::vector<Vector>& vectors);

  /// span{|i> : i in indices}
  static Subspace classical(std::size_t ambient_dim, const std::vector<std::size_t>& indices);

  static Subspace zero(std::size_t ambient_dim);
  static Subspace full(std::size_t ambient_dim);

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return static_cast<std::size_t>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }

  Matrix projector() const;
  Vector project(const Vector& v) const;

  /// Orthogonal complement in C^ambient_dim.
  Subspace complement() const;

  /// M_A (x) M_B with first factor most significant.
  Subspace tensor(const Subspace& other) const;

 private:
  std::size_t ambient_dim_ = 0;
  Matrix basis_;
};

/// Hermitian, unit-trace, positive semidefinite operator.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix rho);

  static DensityMatrix pure(const Vector& state);
  /// diag(mu); mu must be a probability vector.
  static DensityMatrix classical(const std::vector<double>& mu);

  std::size_t dim() const { return static_cast<std::size_t>(rho_.rows()); }
  const Matrix& matrix() const { return rho_; }

 private:
  Matrix rho_;
};

struct LabeledSubspace {
  std::string label;
  Subspace space;
};

/// Mutually orthogonal subspaces; the deficit of their direct sum is the
/// "no value" outcome.
class ObservableFamily {
 public:
  ObservableFamily(std::size_t ambient_dim, std::vector<LabeledSubspace> parts);

  /// Standard observable of the whole space: one part per basis index,
  /// labelled by its decimal value.
  static ObservableFamily standard(std::size_t ambient_dim);

  std::size_t ambient_dim() const { return ambient_dim_; }
  const std::vector<LabeledSubspace>& parts() const { return parts_; }
  const Subspace& part(const std::string& label) const;
  std::size_t total_dim() const;

  /// Orthogonal complement of the direct sum of all parts.
  Subspace residual() const;

  static constexpr const char* kResidualLabel = "?";

 private:
  std::size_t ambient_dim_;
  std::vector<LabeledSubspace> parts_;
};

/// P(xi, M) = <xi|Pi_M|xi>, clamped to [0,1].
double quantum_probability(const Vector& state, const Subspace& sub);
/// P(rho, M) = Tr(rho Pi_M), clamped to [0,1].
double quantum_probability(const DensityMatrix& rho, const Subspace& sub);

enum class Keep { A, B };

/// Tr_B rho (keep = A) or Tr_A rho (keep = B) for C^dimA (x) C^dimB.
DensityMatrix partial_trace(const DensityMatrix& rho, std::size_t dim_a, std::size_t dim_b,
                            Keep keep);

/// Singular values, descending.
std::vector<double> singular_values(const Matrix& m);
double operator_norm(const Matrix& m);
double trace_norm(const Matrix& m);

/// Kronecker product, first factor most significant.
Matrix tensor(const Matrix& a, const Matrix& b);
Vector tensor(const Vector& a, const Vector& b);

Matrix identity(std::size_t dim);
Vector basis_vector(std::size_t dim, std::size_t index);

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
Matrix random_unitary(std::size_t dim, Rng& rng);
Vector random_state(std::size_t dim, Rng& rng);
/// Random mixed state of the given rank (rank 0 means full rank).
DensityMatrix random_density(std::size_t dim, Rng& rng, std::size_t rank = 0);

}  // namespace kitaev::qlinalg
