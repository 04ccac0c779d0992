#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "efn/ratfun.hpp"

namespace efn {

/// Size heuristic used to pick elimination pivots; smaller is cheaper.
inline std::size_t pivot_weight(const Rat& r) {
  return mpz_sizeinbase(r.get_num_mpz_t(), 2) + mpz_sizeinbase(r.get_den_mpz_t(), 2);
}
inline std::size_t pivot_weight(const RatFun& f) {
  std::size_t w = 0;
  for (const auto& c : f.num().coeffs()) w += pivot_weight(c) + 64;
  for (const auto& c : f.den().coeffs()) w += pivot_weight(c) + 64;
  return w;
}

/// Dense row-major matrix over a field F (Rat or RatFun).
template <class F>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, F(0)) {}
  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = F(1);
    return m;
  }
  static Matrix from_rows(const std::vector<std::vector<F>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols_) fail(ErrorKind::InvalidArgument, "ragged matrix rows");
      for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  F& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const F& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::vector<F> row(std::size_t i) const {
    return std::vector<F>(a_.begin() + static_cast<long>(i * cols_),
                          a_.begin() + static_cast<long>((i + 1) * cols_));
  }
  void set_row(std::size_t i, const std::vector<F>& r) {
    for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = r[j];
  }
  void append_row(const std::vector<F>& r) {
    if (rows_ == 0 && cols_ == 0) cols_ = r.size();
    if (r.size() != cols_) fail(ErrorKind::InvalidArgument, "row length mismatch");
    a_.insert(a_.end(), r.begin(), r.end());
    ++rows_;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) fail(ErrorKind::InvalidArgument, "matrix shape mismatch");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (is_zero(a(i, k))) continue;
        for (std::size_t j = 0; j < b.cols_; ++j)
          if (!is_zero(b(k, j))) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    for (std::size_t k = 0; k < a.a_.size(); ++k) a.a_[k] += b.a_[k];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    for (std::size_t k = 0; k < a.a_.size(); ++k) a.a_[k] -= b.a_[k];
    return a;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

  bool is_zero_matrix() const {
    for (const auto& v : a_)
      if (!is_zero(v)) return false;
    return true;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<F> a_;
};

/// Row vector times matrix.
template <class F>
std::vector<F> row_times(const std::vector<F>& v, const Matrix<F>& m) {
  std::vector<F> out(m.cols(), F(0));
  for (std::size_t k = 0; k < m.rows(); ++k) {
    if (is_zero(v[k])) continue;
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!is_zero(m(k, j))) out[j] += v[k] * m(k, j);
  }
  return out;
}

template <class F>
struct Echelon {
  Matrix<F> reduced;                // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Gauss-Jordan elimination to reduced row echelon form.
template <class F>
Echelon<F> rref(Matrix<F> m) {
  Echelon<F> out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t best = m.rows();
    std::size_t best_w = 0;
    for (std::size_t i = r; i < m.rows(); ++i) {
      if (is_zero(m(i, c))) continue;
      std::size_t w = pivot_weight(m(i, c));
      if (best == m.rows() || w < best_w) {
        best = i;
        best_w = w;
      }
    }
    if (best == m.rows()) continue;
    if (best != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(best, j));
    F inv = F(1) / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j)
      if (!is_zero(m(r, j))) m(r, j) = m(r, j) * inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || is_zero(m(i, c))) continue;
      F f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!is_zero(m(r, j))) m(i, j) -= f * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

template <class F>
std::size_t rank(const Matrix<F>& m) {
  return rref(m).pivots.size();
}

/// Basis of {v : m v = 0}, one vector per free column (free entry set to 1).
template <class F>
std::vector<std::vector<F>> kernel(const Matrix<F>& m) {
  auto e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<std::vector<F>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<F> v(m.cols(), F(0));
    v[free] = F(1);
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Basis of {v : v m = 0}.
template <class F>
std::vector<std::vector<F>> left_kernel(const Matrix<F>& m) {
  return kernel(m.transpose());
}

/// Solves x m = b for the row vector x when a solution exists.
template <class F>
std::optional<std::vector<F>> solve_left(const Matrix<F>& m, const std::vector<F>& b) {
  // Augmented system on the transpose: m^T x^T = b^T.
  Matrix<F> aug(m.cols(), m.rows() + 1);
  for (std::size_t i = 0; i < m.cols(); ++i) {
    for (std::size_t j = 0; j < m.rows(); ++j) aug(i, j) = m(j, i);
    aug(i, m.rows()) = b[i];
  }
  auto e = rref(aug);
  std::vector<F> x(m.rows(), F(0));
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    if (e.pivots[r] == m.rows()) return std::nullopt;
    x[e.pivots[r]] = e.reduced(r, m.rows());
  }
  return x;
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& m) {
  const std::size_t n = m.rows();
  Matrix<F> aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = F(1);
  }
  auto e = rref(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] >= n) return std::nullopt;
  Matrix<F> inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

template <class F>
F determinant(Matrix<F> m) {
  const std::size_t n = m.rows();
  F det = F(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && is_zero(m(p, c))) ++p;
    if (p == n) return F(0);
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det = det * m(c, c);
    F inv = F(1) / m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (is_zero(m(i, c))) continue;
      F f = m(i, c) * inv;
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

/// Rank of a family of row vectors.
template <class F>
std::size_t rank_of_rows(const std::vector<std::vector<F>>& rows) {
  if (rows.empty()) return 0;
  return rank(Matrix<F>::from_rows(rows));
}

using QMatrix = Matrix<Rat>;
using RMatrix = Matrix<RatFun>;

}  // namespace efn
