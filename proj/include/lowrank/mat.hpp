// Copyright 2026 The lowrank Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LOWRANK_MAT_HPP_
#define LOWRANK_MAT_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lowrank/error.hpp"

namespace lowrank {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

// Dense complex m x n matrix, row-major. Real data is stored with zero
// imaginary parts; there is no separate real code path.
class Mat {
 public:
  Mat() = default;

  Mat(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  Mat(std::size_t rows, std::size_t cols, CVec entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw ShapeError("Mat: entry count " + std::to_string(data_.size()) +
                       " does not match " + std::to_string(rows_) + "x" +
                       std::to_string(cols_));
    }
  }

  static Mat zeros(std::size_t rows, std::size_t cols) { return Mat(rows, cols); }

  static Mat identity(std::size_t n) {
    Mat out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
  }

  // m x n matrix with `diag` on the main diagonal.
  static Mat diag(std::span<const double> diag, std::size_t rows, std::size_t cols) {
    Mat out(rows, cols);
    for (std::size_t i = 0; i < diag.size() && i < rows && i < cols; ++i) {
      out(i, i) = diag[i];
    }
    return out;
  }

  static Mat diag(std::initializer_list<double> diag) {
    const std::vector<double> d(diag);
    return Mat::diag(d, d.size(), d.size());
  }

  static Mat ones(std::size_t rows, std::size_t cols) {
    return Mat(rows, cols, CVec(rows * cols, Complex(1.0, 0.0)));
  }

  // Rank-one matrix u v^H.
  static Mat outer(std::span<const Complex> u, std::span<const Complex> v) {
    Mat out(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
      for (std::size_t j = 0; j < v.size(); ++j) out(i, j) = u[i] * std::conj(v[j]);
    }
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const Complex> entries() const { return data_; }
  std::span<Complex> entries() { return data_; }

  bool all_finite() const {
    for (const Complex& z : data_) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
  }

  bool same_shape(const Mat& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  CVec col(std::size_t j) const {
    CVec out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  void set_col(std::size_t j, std::span<const Complex> v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
  }

  // Hermitian transpose.
  Mat adjoint() const {
    Mat out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    }
    return out;
  }

  Mat conj() const {
    Mat out = *this;
    for (Complex& z : out.data_) z = std::conj(z);
    return out;
  }

  // First `k` columns.
  Mat leading_cols(std::size_t k) const {
    Mat out(rows_, k);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < k; ++j) out(i, j) = (*this)(i, j);
    }
    return out;
  }

  Mat& operator+=(const Mat& other) {
    require_same_shape(other, "+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
  }

  Mat& operator-=(const Mat& other) {
    require_same_shape(other, "-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
  }

  Mat& operator*=(Complex s) {
    for (Complex& z : data_) z *= s;
    return *this;
  }

  // this += s * other
  Mat& axpy(Complex s, const Mat& other) {
    require_same_shape(other, "axpy");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += s * other.data_[k];
    return *this;
  }

  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator*(Mat a, Complex s) { return a *= s; }
  friend Mat operator*(Complex s, Mat a) { return a *= s; }
  friend Mat operator*(Mat a, double s) { return a *= Complex(s, 0.0); }
  friend Mat operator*(double s, Mat a) { return a *= Complex(s, 0.0); }

  friend Mat operator*(const Mat& a, const Mat& b) {
    if (a.cols_ != b.rows_) {
      throw ShapeError("matmul: " + a.shape_string() + " * " + b.shape_string());
    }
    Mat out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex(0.0, 0.0)) continue;
        const Complex* brow = &b.data_[k * b.cols_];
        Complex* orow = &out.data_[i * out.cols_];
        for (std::size_t j = 0; j < b.cols_; ++j) orow[j] += aik * brow[j];
      }
    }
    return out;
  }

  friend bool operator==(const Mat&, const Mat&) = default;

  std::string shape_string() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
  }

 private:
  void require_same_shape(const Mat& other, const char* op) const {
    if (!same_shape(other)) {
      throw ShapeError(std::string(op) + ": " + shape_string() + " vs " +
                       other.shape_string());
    }
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  CVec data_;
};

// a^H b over C^n, following <x, y> = y^H x with x = b, y = a.
inline Complex vdot(std::span<const Complex> a, std::span<const Complex> b) {
  Complex acc(0.0, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

inline double vnorm(std::span<const Complex> v) {
  double scale = 0.0;
  for (const Complex& z : v) scale = std::max(scale, std::abs(z));
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (const Complex& z : v) acc += std::norm(z / scale);
  return scale * std::sqrt(acc);
}

inline CVec vsub(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() != b.size()) throw ShapeError("vsub: length mismatch");
  CVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

// Column-major vectorization: entry (i, j) lands at index i + j * rows.
inline CVec vec(const Mat& x) {
  CVec out(x.size());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) out[i + j * x.rows()] = x(i, j);
  }
  return out;
}

inline Mat unvec(std::span<const Complex> v, std::size_t rows, std::size_t cols) {
  if (v.size() != rows * cols) throw ShapeError("unvec: length mismatch");
  Mat out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = v[i + j * rows];
  }
  return out;
}

}  // namespace lowrank

#endif  // LOWRANK_MAT_HPP_
