#ifndef DGV_LINALG_HPP
#define DGV_LINALG_HPP

#include <optional>
#include <vector>

#include "dgv/ratfunc.hpp"

namespace dgv {

// Field glue so the same elimination code runs over exact rationals
// (pointwise computations) and over rational-function fields (generic,
// dense-open computations).
template <class F>
struct FieldOps;

template <>
struct FieldOps<Rational> {
  static Rational zero(const Rational&) { return Rational(0); }
  static bool is_zero(const Rational& x) { return x.is_zero(); }
};

template <>
struct FieldOps<RationalFunction> {
  static RationalFunction zero(const RationalFunction& model) {
    return RationalFunction(model.nvars());
  }
  static bool is_zero(const RationalFunction& x) { return x.is_zero(); }
};

template <class F>
using Vec = std::vector<F>;

// Dense matrix over an exact field.  Shapes with zero rows or columns are
// legal everywhere (0-dimensional base charts produce them).
template <class F>
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols, const F& fill)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  static Matrix identity(int n, const F& zero, const F& one) {
    Matrix m(n, n, zero);
    for (int i = 0; i < n; ++i) m.at(i, i) = one;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  F& at(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
  const F& at(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

  Matrix transposed() const {
    if (rows_ == 0 || cols_ == 0) {
      Matrix t;
      t.rows_ = cols_; t.cols_ = rows_;
      t.data_.clear();
      return t;
    }
    Matrix t(cols_, rows_, data_[0]);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  Vec<F> apply(const Vec<F>& v, const F& zero) const {
    Vec<F> out(rows_, zero);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out[i] = out[i] + at(i, j) * v[j];
    return out;
  }

  Matrix multiply(const Matrix& o, const F& zero) const {
    Matrix out(rows_, o.cols_, zero);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const F& a = at(i, k);
        if (FieldOps<F>::is_zero(a)) continue;
        for (int j = 0; j < o.cols_; ++j) out.at(i, j) = out.at(i, j) + a * o.at(k, j);
      }
    return out;
  }

  // Columns given by index list.
  Matrix select_columns(const std::vector<int>& idx, const F& zero) const {
    Matrix out(rows_, static_cast<int>(idx.size()), zero);
    for (int i = 0; i < rows_; ++i)
      for (size_t j = 0; j < idx.size(); ++j) out.at(i, static_cast<int>(j)) = at(i, idx[j]);
    return out;
  }

  Vec<F> column(int j) const {
    Vec<F> v;
    v.reserve(rows_);
    for (int i = 0; i < rows_; ++i) v.push_back(at(i, j));
    return v;
  }

  static Matrix from_columns(int rows, const std::vector<Vec<F>>& cols, const F& zero) {
    Matrix out(rows, static_cast<int>(cols.size()), zero);
    for (size_t j = 0; j < cols.size(); ++j)
      for (int i = 0; i < rows; ++i) out.at(i, static_cast<int>(j)) = cols[j][i];
    return out;
  }

  // Stacks this on top of o (same column count).
  Matrix stacked(const Matrix& o) const {
    Matrix out;
    out.rows_ = rows_ + o.rows_;
    out.cols_ = cols_;
    out.data_ = data_;
    out.data_.insert(out.data_.end(), o.data_.begin(), o.data_.end());
    return out;
  }

 private:
  int rows_, cols_;
  std::vector<F> data_;
};

// Result of Gaussian elimination to reduced row echelon form.
template <class F>
struct Echelon {
  Matrix<F> rref;
  std::vector<int> pivot_cols;
  int rank() const { return static_cast<int>(pivot_cols.size()); }
};

template <class F>
Echelon<F> echelon(Matrix<F> m, [[maybe_unused]] const F& zero, const F& one) {
  Echelon<F> out{std::move(m), {}};
  Matrix<F>& a = out.rref;
  int r = 0;
  for (int c = 0; c < a.cols() && r < a.rows(); ++c) {
    int piv = -1;
    for (int i = r; i < a.rows(); ++i) {
      if (!FieldOps<F>::is_zero(a.at(i, c))) { piv = i; break; }
    }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < a.cols(); ++j) std::swap(a.at(piv, j), a.at(r, j));
    F inv = one / a.at(r, c);
    for (int j = c; j < a.cols(); ++j) a.at(r, j) = a.at(r, j) * inv;
    for (int i = 0; i < a.rows(); ++i) {
      if (i == r || FieldOps<F>::is_zero(a.at(i, c))) continue;
      F f = a.at(i, c);
      for (int j = c; j < a.cols(); ++j) a.at(i, j) = a.at(i, j) - f * a.at(r, j);
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  return out;
}

template <class F>
int rank_of(const Matrix<F>& m, const F& zero, const F& one) {
  return echelon(m, zero, one).rank();
}

// Basis of the right null space, as columns.
template <class F>
std::vector<Vec<F>> null_space(const Matrix<F>& m, const F& zero, const F& one) {
  Echelon<F> e = echelon(m, zero, one);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : e.pivot_cols) is_pivot[c] = true;
  std::vector<Vec<F>> basis;
  for (int c = 0; c < m.cols(); ++c) {
    if (is_pivot[c]) continue;
    Vec<F> v(m.cols(), zero);
    v[c] = one;
    for (size_t r = 0; r < e.pivot_cols.size(); ++r)
      v[e.pivot_cols[r]] = zero - e.rref.at(static_cast<int>(r), c);
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class F>
struct LinearSolution {
  bool consistent = false;
  Vec<F> particular;              // one solution when consistent
  std::vector<Vec<F>> nullspace;  // basis of the homogeneous solutions
};

// Solves A x = b exactly.
template <class F>
LinearSolution<F> solve_linear(const Matrix<F>& a, const Vec<F>& b, const F& zero, const F& one) {
  Matrix<F> aug(a.rows(), a.cols() + 1, zero);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, a.cols()) = b[static_cast<size_t>(i)];
  }
  Echelon<F> e = echelon(aug, zero, one);
  LinearSolution<F> out;
  for (int c : e.pivot_cols)
    if (c == a.cols()) return out;  // inconsistent
  out.consistent = true;
  out.particular.assign(a.cols(), zero);
  for (size_t r = 0; r < e.pivot_cols.size(); ++r)
    out.particular[e.pivot_cols[r]] = e.rref.at(static_cast<int>(r), a.cols());
  std::vector<bool> is_pivot(a.cols(), false);
  for (int c : e.pivot_cols) is_pivot[c] = true;
  for (int c = 0; c < a.cols(); ++c) {
    if (is_pivot[c]) continue;
    Vec<F> v(a.cols(), zero);
    v[c] = one;
    for (size_t r = 0; r < e.pivot_cols.size(); ++r)
      v[e.pivot_cols[r]] = zero - e.rref.at(static_cast<int>(r), c);
    out.nullspace.push_back(std::move(v));
  }
  return out;
}

// Inverse of a square matrix; nullopt when singular.
template <class F>
std::optional<Matrix<F>> inverse_of(const Matrix<F>& m, const F& zero, const F& one) {
  if (m.rows() != m.cols()) return std::nullopt;
  int n = m.rows();
  Matrix<F> aug(n, 2 * n, zero);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = one;
  }
  Echelon<F> e = echelon(aug, zero, one);
  if (e.rank() < n) return std::nullopt;
  for (int r = 0; r < n; ++r)
    if (e.pivot_cols[r] != r) return std::nullopt;
  Matrix<F> inv(n, n, zero);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv.at(i, j) = e.rref.at(i, n + j);
  return inv;
}

template <class F>
F dot(const Vec<F>& a, const Vec<F>& b, const F& zero) {
  F acc = zero;
  for (size_t i = 0; i < a.size(); ++i) acc = acc + a[i] * b[i];
  return acc;
}

// Determinant by fraction-free-ish elimination over the field.
template <class F>
F determinant(Matrix<F> a, const F& zero, const F& one) {
  int n = a.rows();
  F det = one;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i)
      if (!FieldOps<F>::is_zero(a.at(i, c))) { piv = i; break; }
    if (piv < 0) return zero;
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(a.at(piv, j), a.at(c, j));
      det = zero - det;
    }
    det = det * a.at(c, c);
    F inv = one / a.at(c, c);
    for (int i = c + 1; i < n; ++i) {
      if (FieldOps<F>::is_zero(a.at(i, c))) continue;
      F f = a.at(i, c) * inv;
      for (int j = c; j < n; ++j) a.at(i, j) = a.at(i, j) - f * a.at(c, j);
    }
  }
  return det;
}

}  // namespace dgv

#endif
