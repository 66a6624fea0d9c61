#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "spacobi/errors.hpp"

namespace spacobi {

// Dense real matrix, row-major storage. Entries are checked for
// finiteness when the matrix is constructed from user-supplied data;
// in-place mutation through row()/operator() is unchecked.
class DenseMatrix {
 public:
  DenseMatrix() : rows_(0), cols_(0) {}

  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {
    if (!std::isfinite(fill)) throw NonFiniteError("fill value is not finite");
  }

  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
      throw DimensionMismatchError("entry count does not match rows*cols");
    for (double v : data_)
      if (!std::isfinite(v)) throw NonFiniteError("matrix entry is not finite");
  }

  // Rows given as nested braces, e.g. {{1,2},{3,4}}.
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_)
        throw DimensionMismatchError("ragged initializer rows");
      for (double v : r) {
        if (!std::isfinite(v)) throw NonFiniteError("matrix entry is not finite");
        data_.push_back(v);
      }
    }
  }

  static DenseMatrix identity(std::size_t k) {
    DenseMatrix m(k, k, 0.0);
    for (std::size_t i = 0; i < k; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) noexcept {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) noexcept {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<double> data() noexcept { return {data_.data(), data_.size()}; }
  std::span<const double> data() const noexcept {
    return {data_.data(), data_.size()};
  }

  bool same_shape(const DenseMatrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  // Writes the transpose into a preallocated buffer (hot-loop variant).
  void transpose_into(DenseMatrix& out) const {
    if (out.rows_ != cols_ || out.cols_ != rows_)
      throw DimensionMismatchError("transpose_into: bad output shape");
    for (std::size_t i = 0; i < rows_; ++i) {
      const double* src = data_.data() + i * cols_;
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = src[j];
    }
  }

  double frobenius_norm() const noexcept {
    double s = 0.0;
    for (double v : data_) s += v * v;
    return std::sqrt(s);
  }

  double max_abs() const noexcept {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::fabs(v));
    return m;
  }

  bool all_finite() const noexcept {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  DenseMatrix& operator+=(const DenseMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  DenseMatrix& operator-=(const DenseMatrix& o) {
    require_same_shape(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  DenseMatrix& operator*=(double s) noexcept {
    for (double& v : data_) v *= s;
    return *this;
  }

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) {
    a += b;
    return a;
  }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) {
    a -= b;
    return a;
  }
  friend DenseMatrix operator*(DenseMatrix a, double s) noexcept {
    a *= s;
    return a;
  }
  friend DenseMatrix operator*(double s, DenseMatrix a) noexcept {
    a *= s;
    return a;
  }

  void fill(double v) noexcept {
    for (double& x : data_) x = v;
  }

 private:
  void require_same_shape(const DenseMatrix& o) const {
    if (!same_shape(o)) throw DimensionMismatchError("shape mismatch");
  }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

inline DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionMismatchError("matmul: inner dimensions differ");
  DenseMatrix c(a.rows(), b.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      const double* brow = b.row(k).data();
      double* crow = c.row(i).data();
      for (std::size_t j = 0; j < b.cols(); ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

inline double frobenius_distance(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b))
    throw DimensionMismatchError("frobenius_distance: shape mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    s += d * d;
  }
  return std::sqrt(s);
}

// Euclidean helpers on raw spans, shared by the prox and weight kernels.
inline double squared_norm(std::span<const double> x) noexcept {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

inline double norm2(std::span<const double> x) noexcept {
  return std::sqrt(squared_norm(x));
}

inline double squared_distance(std::span<const double> a,
                               std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

}  // namespace spacobi
