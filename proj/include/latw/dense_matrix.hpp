#pragma once
// Small dense matrices over an exact or floating field. Sizes here are m <= ~8,
// so elimination is plain Gauss-Jordan.

#include <cstddef>
#include <span>
#include <vector>

#include "latw/errors.hpp"
#include "latw/scalar.hpp"

namespace latw {

template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, S(0)) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = S(1);
    return m;
  }

  /// Column-stacked construction: column k is cols[k].
  static Matrix from_columns(const std::vector<std::vector<S>>& cols) {
    int n = cols.empty() ? 0 : int(cols.front().size());
    Matrix m(n, int(cols.size()));
    for (int k = 0; k < int(cols.size()); ++k)
      for (int i = 0; i < n; ++i) m(i, k) = cols[k][i];
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  S& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
  const S& operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }

  std::vector<S> column(int j) const {
    std::vector<S> c(rows_);
    for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<S> row(int i) const {
    return std::vector<S>(data_.begin() + std::size_t(i) * cols_,
                          data_.begin() + std::size_t(i + 1) * cols_);
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  S trace() const {
    S t(0);
    for (int i = 0; i < rows_ && i < cols_; ++i) t += (*this)(i, i);
    return t;
  }

  Matrix& operator+=(const Matrix& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }
  Matrix& operator*=(const S& c) {
    for (auto& x : data_) x *= c;
    return *this;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const S& c) { return a *= c; }
  friend Matrix operator*(const S& c, Matrix a) { return a *= c; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int l = 0; l < a.cols_; ++l) {
        const S& ail = a(i, l);
        if (ail == S(0)) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += ail * b(l, j);
      }
    return c;
  }

  friend std::vector<S> operator*(const Matrix& a, const std::vector<S>& v) {
    std::vector<S> out(a.rows_, S(0));
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < a.cols_; ++j) out[i] += a(i, j) * v[j];
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::span<const S> data() const { return data_; }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<S> data_;
};

namespace detail {

template <class S>
int choose_pivot(const Matrix<S>& a, int col, int from) {
  int best = -1;
  double best_mag = 0.0;
  for (int r = from; r < a.rows(); ++r) {
    if (is_zero(a(r, col))) continue;
    if constexpr (scalar_traits<S>::exact) {
      return r;
    } else {
      double mag = std::fabs(to_double(a(r, col)));
      if (best < 0 || mag > best_mag) {
        best = r;
        best_mag = mag;
      }
    }
  }
  return best;
}

// Gauss-Jordan on [a | b]; b is overwritten with a^{-1} b.
template <class S>
void eliminate(Matrix<S> a, Matrix<S>& b) {
  const int n = a.rows();
  if (a.cols() != n) throw DomainError("elimination requires a square matrix");
  for (int c = 0; c < n; ++c) {
    int p = choose_pivot(a, c, c);
    if (p < 0) throw NotInvertible("singular matrix");
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      for (int j = 0; j < b.cols(); ++j) std::swap(b(p, j), b(c, j));
    }
    S inv = S(1) / a(c, c);
    for (int j = 0; j < n; ++j) a(c, j) *= inv;
    for (int j = 0; j < b.cols(); ++j) b(c, j) *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == c || a(r, c) == S(0)) continue;
      S f = a(r, c);
      for (int j = 0; j < n; ++j) a(r, j) -= f * a(c, j);
      for (int j = 0; j < b.cols(); ++j) b(r, j) -= f * b(c, j);
    }
  }
}

}  // namespace detail

template <class S>
Matrix<S> inverse(const Matrix<S>& a) {
  Matrix<S> b = Matrix<S>::identity(a.rows());
  detail::eliminate(a, b);
  return b;
}

template <class S>
std::vector<S> solve(const Matrix<S>& a, const std::vector<S>& rhs) {
  Matrix<S> b(int(rhs.size()), 1);
  for (int i = 0; i < int(rhs.size()); ++i) b(i, 0) = rhs[i];
  detail::eliminate(a, b);
  return b.column(0);
}

template <class S>
S determinant(Matrix<S> a) {
  const int n = a.rows();
  S det(1);
  for (int c = 0; c < n; ++c) {
    int p = detail::choose_pivot(a, c, c);
    if (p < 0) return S(0);
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      det = -det;
    }
    det *= a(c, c);
    S inv = S(1) / a(c, c);
    for (int r = c + 1; r < n; ++r) {
      if (a(r, c) == S(0)) continue;
      S f = a(r, c) * inv;
      for (int j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

template <class S>
double max_abs_diff(const Matrix<S>& a, const Matrix<S>& b) {
  double m = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      S d = a(i, j) - b(i, j);
      m = std::max(m, std::fabs(to_double(d)));
    }
  return m;
}

}  // namespace latw
