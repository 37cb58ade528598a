#include "kitaev/lattice.hpp"

#include <sstream>

#include "kitaev/errors.hpp"

namespace kitaev {

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long long>>& rows) {
  IntMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw InvalidArgument("IntMatrix: ragged rows");
    for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<std::vector<long long>>& cols) {
  IntMatrix m(cols.empty() ? 0 : cols.front().size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != m.rows_) throw InvalidArgument("IntMatrix: ragged columns");
    for (std::size_t i = 0; i < m.rows_; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

IntMatrix IntMatrix::identity(std::size_t k) {
  IntMatrix m(k, k);
  for (std::size_t i = 0; i < k; ++i) m(i, i) = 1;
  return m;
}

std::vector<BigInt> IntMatrix::column(std::size_t j) const {
  std::vector<BigInt> c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (cols_ != o.rows_) throw DimensionMismatch("IntMatrix: product shape mismatch");
  IntMatrix r(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      if ((*this)(i, k) == 0) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += (*this)(i, k) * o(k, j);
    }
  return r;
}

std::string IntMatrix::str() const {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    out << (i ? "; " : "");
    for (std::size_t j = 0; j < cols_; ++j) out << (j ? " " : "") << (*this)(i, j);
  }
  out << "]";
  return out.str();
}

namespace {

BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;  // truncates toward zero
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

using Column = std::vector<BigInt>;

void axpy(Column& y, const BigInt& c, const Column& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] -= c * x[i];
}

}  // namespace

IntMatrix hermite_normal_form(const IntMatrix& gens) {
  const std::size_t k = gens.rows();
  std::vector<Column> active;
  for (std::size_t j = 0; j < gens.cols(); ++j) active.push_back(gens.column(j));
  std::vector<Column> basis(k);
  for (std::size_t step = 0; step < k; ++step) {
    const std::size_t i = k - 1 - step;
    for (;;) {
      std::size_t piv = active.size();
      for (std::size_t c = 0; c < active.size(); ++c) {
        if (active[c][i] == 0) continue;
        if (piv == active.size() || abs(active[c][i]) < abs(active[piv][i])) piv = c;
      }
      if (piv == active.size()) throw InvalidArgument("hermite_normal_form: generators are rank deficient");
      bool others = false;
      for (std::size_t c = 0; c < active.size(); ++c) {
        if (c == piv || active[c][i] == 0) continue;
        axpy(active[c], active[c][i] / active[piv][i], active[piv]);
        others = others || active[c][i] != 0;
      }
      if (!others) {
        Column p = std::move(active[piv]);
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(piv));
        if (p[i] < 0) {
          for (auto& x : p) x = -x;
        }
        basis[i] = std::move(p);
        break;
      }
    }
  }
  for (std::size_t j = 1; j < k; ++j) {
    for (std::size_t step = 0; step < j; ++step) {
      const std::size_t i = j - 1 - step;
      const BigInt q = floor_div(basis[j][i], basis[i][i]);
      if (q != 0) axpy(basis[j], q, basis[i]);
    }
  }
  IntMatrix out(k, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < k; ++i) out(i, j) = basis[j][i];
  return out;
}

bool is_canonical(const IntMatrix& b) {
  if (b.rows() != b.cols()) return false;
  for (std::size_t i = 0; i < b.rows(); ++i) {
    if (b(i, i) <= 0) return false;
    for (std::size_t j = 0; j < b.cols(); ++j) {
      if (i > j && b(i, j) != 0) return false;
      if (i < j && (b(i, j) < 0 || b(i, j) >= b(i, i))) return false;
    }
  }
  return true;
}

bool lattice_contains(const IntMatrix& canonical, const std::vector<BigInt>& g) {
  const std::size_t k = canonical.rows();
  if (g.size() != k) throw DimensionMismatch("lattice_contains: vector length");
  Column r = g;
  for (std::size_t step = 0; step < k; ++step) {
    const std::size_t i = k - 1 - step;
    if (r[i] % canonical(i, i) != 0) return false;
    const BigInt x = r[i] / canonical(i, i);
    for (std::size_t row = 0; row <= i; ++row) r[row] -= x * canonical(row, i);
  }
  return true;
}

bool same_lattice(const IntMatrix& a, const IntMatrix& b) { return hermite_normal_form(a) == hermite_normal_form(b); }

BigInt determinant_of_canonical(const IntMatrix& b) {
  BigInt d = 1;
  for (std::size_t i = 0; i < b.rows(); ++i) d *= b(i, i);
  return d;
}

Character reduce_character(Character h) {
  for (auto& x : h) {
    const BigInt num = numerator(x), den = denominator(x);
    BigInt r = num % den;
    if (r < 0) r += den;
    x = BigRational(r, den);
  }
  return h;
}

bool character_annihilates(const Character& h, const std::vector<BigInt>& g) {
  if (h.size() != g.size()) throw DimensionMismatch("character_annihilates: length mismatch");
  BigRational s = 0;
  for (std::size_t j = 0; j < h.size(); ++j) s += h[j] * BigRational(g[j]);
  return denominator(s) == 1;
}

IntMatrix characters_to_lattice(const std::vector<Character>& samples, std::size_t k) {
  if (samples.empty()) throw InvalidArgument("characters_to_lattice: need at least one sample");
  BigInt q = 1;
  for (const auto& h : samples) {
    if (h.size() != k) throw DimensionMismatch("characters_to_lattice: character length differs from k");
    for (const auto& x : h) q = boost::multiprecision::lcm(q, BigInt(denominator(x)));
  }
  // Q·L* where L* = Z^k + Σ Z h is the dual lattice
  IntMatrix gens(k, k + samples.size());
  for (std::size_t i = 0; i < k; ++i) gens(i, i) = q;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    for (std::size_t i = 0; i < k; ++i) {
      const BigRational v = samples[s][i] * BigRational(q);
      gens(i, k + s) = numerator(v);
    }
  }
  const IntMatrix b = hermite_normal_form(gens);
  // inverse of the upper-triangular b, column by column
  std::vector<std::vector<BigRational>> inv(k, std::vector<BigRational>(k, 0));
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t step = 0; step < k; ++step) {
      const std::size_t i = k - 1 - step;
      BigRational s = (i == c) ? 1 : 0;
      for (std::size_t j = i + 1; j < k; ++j) s -= BigRational(b(i, j)) * inv[j][c];
      inv[i][c] = s / BigRational(b(i, i));
    }
  }
  // L = Q·(b^{-1})^T
  IntMatrix l(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const BigRational v = inv[j][i] * BigRational(q);
      if (denominator(v) != 1) throw Error("characters_to_lattice: dual basis is not integral");
      l(i, j) = numerator(v);
    }
  }
  return hermite_normal_form(l);
}

}  // namespace kitaev
