#pragma once

#include <cassert>
#include <cstddef>
#include <optional>
#include <vector>

#include "costab/field.hpp"

namespace costab {

/// Dense matrix over an exact field. Sizes here are tiny (chain-map systems
/// over small quiver algebras), so no attempt at sparsity is made.
template <class K>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, field_traits<K>::zero()) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = field_traits<K>::one();
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  K& operator()(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
  const K& operator()(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  Matrix operator*(const Matrix& o) const {
    assert(cols_ == o.rows_);
    Matrix out(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const K& x = (*this)(i, k);
        if (field_traits<K>::is_zero(x)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) out(i, j) += x * o(k, j);
      }
    return out;
  }

  Matrix operator+(const Matrix& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    Matrix out = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] += o.a_[i];
    return out;
  }

  Matrix operator-(const Matrix& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    Matrix out = *this;
    for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] -= o.a_[i];
    return out;
  }

  Matrix scaled(const K& c) const {
    Matrix out = *this;
    for (auto& x : out.a_) x *= c;
    return out;
  }

  bool is_zero() const {
    for (const auto& x : a_)
      if (!field_traits<K>::is_zero(x)) return false;
    return true;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<K> a_;
};

template <class K>
using Vec = std::vector<K>;

/// Row echelon data for a matrix: the reduced matrix, pivot columns, rank.
template <class K>
struct Echelon {
  Matrix<K> rref;
  std::vector<std::size_t> pivot_cols;
  std::size_t rank = 0;
};

template <class K>
Echelon<K> reduced_row_echelon(Matrix<K> m) {
  Echelon<K> e;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && field_traits<K>::is_zero(m(piv, c))) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    K inv = field_traits<K>::one() / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || field_traits<K>::is_zero(m(i, c))) continue;
      K f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    e.pivot_cols.push_back(c);
    ++r;
  }
  e.rank = r;
  e.rref = std::move(m);
  return e;
}

template <class K>
std::size_t rank(const Matrix<K>& m) {
  return reduced_row_echelon(m).rank;
}

/// Any solution of A x = b, or nullopt when inconsistent.
template <class K>
std::optional<Vec<K>> solve(const Matrix<K>& a, const Vec<K>& b) {
  assert(b.size() == a.rows());
  Matrix<K> aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  Echelon<K> e = reduced_row_echelon(std::move(aug));
  for (std::size_t p : e.pivot_cols)
    if (p == a.cols()) return std::nullopt;
  Vec<K> x(a.cols(), field_traits<K>::zero());
  for (std::size_t i = 0; i < e.pivot_cols.size(); ++i)
    x[e.pivot_cols[i]] = e.rref(i, a.cols());
  return x;
}

/// Basis of the kernel of A, one vector per non-pivot column.
template <class K>
std::vector<Vec<K>> kernel_basis(const Matrix<K>& a) {
  Echelon<K> e = reduced_row_echelon(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t p : e.pivot_cols) is_pivot[p] = true;
  std::vector<Vec<K>> out;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    if (is_pivot[c]) continue;
    Vec<K> v(a.cols(), field_traits<K>::zero());
    v[c] = field_traits<K>::one();
    for (std::size_t i = 0; i < e.pivot_cols.size(); ++i)
      v[e.pivot_cols[i]] = -e.rref(i, c);
    out.push_back(std::move(v));
  }
  return out;
}

/// Row space tool: maintains an echelonized spanning set, supports membership
/// tests and extension. Used for quotient-space bookkeeping.
template <class K>
class RowSpace {
 public:
  explicit RowSpace(std::size_t dim) : dim_(dim) {}

  std::size_t dim() const { return rows_.size(); }
  std::size_t ambient_dim() const { return dim_; }

  /// Reduces v against the current basis; returns the residue.
  Vec<K> residue(Vec<K> v) const {
    assert(v.size() == dim_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const K& c = v[lead_[i]];
      if (field_traits<K>::is_zero(c)) continue;
      K f = c;  // rows are normalized to leading 1
      for (std::size_t j = 0; j < dim_; ++j) v[j] -= f * rows_[i][j];
    }
    return v;
  }

  bool contains(const Vec<K>& v) const {
    Vec<K> r = residue(v);
    for (const auto& x : r)
      if (!field_traits<K>::is_zero(x)) return false;
    return true;
  }

  /// Adds v to the span. Returns true when the dimension grew.
  bool add(Vec<K> v) {
    v = residue(std::move(v));
    std::size_t lead = dim_;
    for (std::size_t j = 0; j < dim_; ++j)
      if (!field_traits<K>::is_zero(v[j])) { lead = j; break; }
    if (lead == dim_) return false;
    K inv = field_traits<K>::one() / v[lead];
    for (auto& x : v) x *= inv;
    // back-substitute into existing rows to keep the basis reduced
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      K c = rows_[i][lead];
      if (field_traits<K>::is_zero(c)) continue;
      for (std::size_t j = 0; j < dim_; ++j) rows_[i][j] -= c * v[j];
    }
    rows_.push_back(std::move(v));
    lead_.push_back(lead);
    return true;
  }

  const std::vector<Vec<K>>& rows() const { return rows_; }

 private:
  std::size_t dim_;
  std::vector<Vec<K>> rows_;
  std::vector<std::size_t> lead_;
};

}  // namespace costab
