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

#ifndef LOWRANK_MEASUREMENT_HPP_
#define LOWRANK_MEASUREMENT_HPP_

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "lowrank/error.hpp"
#include "lowrank/mat.hpp"
#include "lowrank/matops.hpp"
#include "lowrank/random.hpp"

namespace lowrank {

// Linear map A: C^{m x n} -> C^p stored as a dense p x (mn) matrix acting on
// the column-major vectorization of X.
class MeasOp {
 public:
  MeasOp(std::size_t m, std::size_t n, Mat op_matrix)
      : m_(m), n_(n), op_(std::move(op_matrix)) {
    if (m_ == 0 || n_ == 0 || op_.rows() == 0) {
      throw RangeError("MeasOp: m, n, p must be positive");
    }
    if (op_.cols() != m_ * n_) {
      throw ShapeError("MeasOp: op_matrix has " + std::to_string(op_.cols()) +
                       " columns, expected m*n = " + std::to_string(m_ * n_));
    }
    if (!op_.all_finite()) throw RangeError("MeasOp: non-finite op_matrix");
  }

  // p = mn, op_matrix = I.
  static MeasOp identity(std::size_t m, std::size_t n) {
    return MeasOp(m, n, Mat::identity(m * n));
  }

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  std::size_t p() const { return op_.rows(); }
  const Mat& op_matrix() const { return op_; }

  MeasOp scaled(Complex c) const { return MeasOp(m_, n_, op_ * c); }

 private:
  std::size_t m_;
  std::size_t n_;
  Mat op_;
};

inline CVec apply(const MeasOp& a, const Mat& x) {
  if (x.rows() != a.m() || x.cols() != a.n()) {
    throw ShapeError("apply: X is " + x.shape_string() + ", operator expects " +
                     std::to_string(a.m()) + "x" + std::to_string(a.n()));
  }
  const CVec v = vec(x);
  const Mat& op = a.op_matrix();
  CVec out(a.p(), Complex(0.0, 0.0));
  for (std::size_t k = 0; k < a.p(); ++k) {
    Complex acc(0.0, 0.0);
    for (std::size_t c = 0; c < v.size(); ++c) acc += op(k, c) * v[c];
    out[k] = acc;
  }
  return out;
}

// A^* y = unvec(op_matrix^H y).
inline Mat adjoint(const MeasOp& a, std::span<const Complex> y) {
  if (y.size() != a.p()) {
    throw ShapeError("adjoint: y has length " + std::to_string(y.size()) +
                     ", operator has p = " + std::to_string(a.p()));
  }
  const Mat& op = a.op_matrix();
  CVec v(op.cols(), Complex(0.0, 0.0));
  for (std::size_t k = 0; k < a.p(); ++k) {
    const Complex yk = y[k];
    if (yk == Complex(0.0, 0.0)) continue;
    for (std::size_t c = 0; c < v.size(); ++c) v[c] += std::conj(op(k, c)) * yk;
  }
  return unvec(v, a.m(), a.n());
}

// Entries i.i.d. zero-mean Gaussian with variance 1/p, so E||AX||^2 = ||X||_F^2.
inline MeasOp gaussian_op(std::size_t m, std::size_t n, std::size_t p, std::uint64_t seed,
                          Field field = Field::kComplex) {
  if (p == 0) throw RangeError("gaussian_op: p must be >= 1");
  Stream rng(seed, 0);
  return MeasOp(m, n, gaussian_mat(p, m * n, rng, field, 1.0 / static_cast<double>(p)));
}

// Noisy measurement b = AX + nu with ||nu||_2 = epsilon exactly.
struct Observation {
  CVec b;
  double epsilon = 0.0;
  std::uint64_t noise_seed = 0;
};

// nu is uniform on the radius-epsilon sphere of C^p.
inline Observation observe(const MeasOp& a, const Mat& x, double epsilon,
                           std::uint64_t seed) {
  if (!(epsilon >= 0.0)) throw RangeError("observe: epsilon must be nonnegative");
  Observation obs;
  obs.b = apply(a, x);
  obs.epsilon = epsilon;
  obs.noise_seed = seed;
  if (epsilon > 0.0) {
    Stream rng(seed, 1);
    CVec nu = gaussian_vec(a.p(), rng);
    const double scale = epsilon / vnorm(nu);
    for (std::size_t k = 0; k < nu.size(); ++k) obs.b[k] += scale * nu[k];
  }
  return obs;
}

}  // namespace lowrank

#endif  // LOWRANK_MEASUREMENT_HPP_
