#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace gocheck {

template <class T>
using Vector = std::vector<T>;

/// Dense row-major matrix. Rows double as the storage format for spanning
/// sets: a Subspace keeps its basis as the rows of one of these.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  static Matrix from_rows(const std::vector<Vector<T>>& rows, std::size_t cols) {
    Matrix m(0, cols);
    for (const auto& r : rows) m.append_row(r);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t i, std::size_t j) {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }
  const T& operator()(std::size_t i, std::size_t j) const {
    assert(i < rows_ && j < cols_);
    return data_[i * cols_ + j];
  }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vector<T> row_vector(std::size_t i) const { return Vector<T>(row(i).begin(), row(i).end()); }

  Vector<T> col_vector(std::size_t j) const {
    Vector<T> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  void append_row(std::span<const T> r) {
    if (r.size() != cols_) throw std::invalid_argument("append_row: column count mismatch");
    data_.insert(data_.end(), r.begin(), r.end());
    ++rows_;
  }
  void append_row(const Vector<T>& r) { append_row(std::span<const T>(r)); }

  void append_rows(const Matrix& other) {
    if (other.rows_ == 0) return;
    if (other.cols_ != cols_) throw std::invalid_argument("append_rows: column count mismatch");
    data_.insert(data_.end(), other.data_.begin(), other.data_.end());
    rows_ += other.rows_;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_; }

  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// Products skip exact zeros; the structured matrices here are mostly sparse.

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: dimension mismatch");
  Matrix<T> c(a.rows(), b.cols());
  const T zero(0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (aik == zero) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        const T& bkj = b(k, j);
        if (bkj == zero) continue;
        c(i, j) += aik * bkj;
      }
    }
  return c;
}

template <class T>
Vector<T> operator*(const Matrix<T>& a, const Vector<T>& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matrix-vector product: dimension mismatch");
  Vector<T> y(a.rows(), T(0));
  const T zero(0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == zero || x[k] == zero) continue;
      y[i] += a(i, k) * x[k];
    }
  return y;
}

template <class T>
Matrix<T> operator+(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix sum: dimension mismatch");
  Matrix<T> c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

template <class T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix difference: dimension mismatch");
  Matrix<T> c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

template <class T>
Matrix<T> scaled(const Matrix<T>& a, const T& s) {
  Matrix<T> c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) *= s;
  return c;
}

template <class T>
T dot(std::span<const T> x, std::span<const T> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: dimension mismatch");
  T s(0);
  const T zero(0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == zero || y[i] == zero) continue;
    s += x[i] * y[i];
  }
  return s;
}

template <class T>
T dot(const Vector<T>& x, const Vector<T>& y) {
  return dot(std::span<const T>(x), std::span<const T>(y));
}

/// x^T A y
template <class T>
T bilinear(const Matrix<T>& a, const Vector<T>& x, const Vector<T>& y) {
  return dot(x, a * y);
}

template <class T>
Vector<T> add(const Vector<T>& x, const Vector<T>& y) {
  Vector<T> z = x;
  for (std::size_t i = 0; i < z.size(); ++i) z[i] += y[i];
  return z;
}

template <class T>
Vector<T> sub(const Vector<T>& x, const Vector<T>& y) {
  Vector<T> z = x;
  for (std::size_t i = 0; i < z.size(); ++i) z[i] -= y[i];
  return z;
}

template <class T>
Vector<T> scale(const Vector<T>& x, const T& s) {
  Vector<T> z = x;
  for (auto& v : z) v *= s;
  return z;
}

template <class T>
void axpy(Vector<T>& y, const T& a, std::span<const T> x) {
  const T zero(0);
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (x[i] == zero) continue;
    y[i] += a * x[i];
  }
}

template <class T>
void axpy(Vector<T>& y, const T& a, const Vector<T>& x) {
  axpy(y, a, std::span<const T>(x));
}

/// Linear combination sum_i c_i * rows(i).
template <class T>
Vector<T> combine_rows(const Matrix<T>& rows, const Vector<T>& coeffs) {
  if (rows.rows() != coeffs.size()) throw std::invalid_argument("combine_rows: dimension mismatch");
  Vector<T> v(rows.cols(), T(0));
  const T zero(0);
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    if (coeffs[i] == zero) continue;
    axpy(v, coeffs[i], rows.row(i));
  }
  return v;
}

template <class T>
Vector<T> unit_vector(std::size_t n, std::size_t i) {
  Vector<T> v(n, T(0));
  v[i] = T(1);
  return v;
}

}  // namespace gocheck
