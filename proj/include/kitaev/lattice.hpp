#pragma once

// Exact integer lattices in Z^k: Hermite normal form, membership and the
// kernel lattice of a set of characters.

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

namespace kitaev {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Integer matrix with `rows` rows; lattice generators are its columns.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);
  /// From rows of int64 values.
  static IntMatrix from_rows(const std::vector<std::vector<long long>>& rows);
  static IntMatrix from_columns(const std::vector<std::vector<long long>>& cols);
  static IntMatrix identity(std::size_t k);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  BigInt& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  std::vector<BigInt> column(std::size_t j) const;
  IntMatrix operator*(const IntMatrix& o) const;
  bool operator==(const IntMatrix& o) const = default;
  std::string str() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> a_;
};

/// Canonical basis of the lattice generated by the columns of `gens`:
/// k×k, m_ij = 0 for i > j, m_ii > 0, 0 <= m_ij < m_ii for i < j.
/// Throws InvalidArgument when the generators do not span a rank-k lattice.
IntMatrix hermite_normal_form(const IntMatrix& gens);

bool is_canonical(const IntMatrix& b);

/// g ∈ lattice spanned by the canonical basis b (exact back substitution).
bool lattice_contains(const IntMatrix& canonical, const std::vector<BigInt>& g);

/// Both canonical bases describe the same subgroup.
bool same_lattice(const IntMatrix& a, const IntMatrix& b);

BigInt determinant_of_canonical(const IntMatrix& b);

using Character = std::vector<BigRational>;

/// Reduces every component into [0,1).
Character reduce_character(Character h);

/// {g ∈ Z^k : Σ_j h_j g_j ∈ Z for every sample h}, in canonical form.
IntMatrix characters_to_lattice(const std::vector<Character>& samples, std::size_t k);

/// Σ_j h_j g_j ∈ Z.
bool character_annihilates(const Character& h, const std::vector<BigInt>& g);

/// Random unimodular k×k matrix (product of elementary column operations).
template <class Rng>
IntMatrix random_unimodular(std::size_t k, Rng& rng, int steps = 12) {
  IntMatrix u = IntMatrix::identity(k);
  if (k < 2) return u;
  for (int s = 0; s < steps; ++s) {
    const auto i = static_cast<std::size_t>(rng.uniform_int(0, static_cast<long long>(k) - 1));
    auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<long long>(k) - 2));
    if (j >= i) ++j;
    const long long c = rng.uniform_int(-3, 3);
    for (std::size_t r = 0; r < k; ++r) u(r, j) += c * u(r, i);
    if (rng.uniform() < 0.3) {
      for (std::size_t r = 0; r < k; ++r) u(r, j) = -u(r, j);
    }
  }
  return u;
}

}  // namespace kitaev
