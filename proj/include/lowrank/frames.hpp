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

// Synthesis/analysis operators over finite sets of matrices, the four-way
// split of matrix space induced by the top-r singular subspaces of a
// reference matrix, and the rank-r block partition of a tail matrix.

#ifndef LOWRANK_FRAMES_HPP_
#define LOWRANK_FRAMES_HPP_

#include <array>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "lowrank/error.hpp"
#include "lowrank/mat.hpp"
#include "lowrank/matops.hpp"

namespace lowrank {

inline constexpr double kFrameOrthoTol = 1e-10;

// Ordered set of same-shape atoms psi_1..psi_K. Orthonormality is checked
// once at construction.
class Frame {
 public:
  explicit Frame(std::vector<Mat> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw PreconditionError("Frame: no atoms");
    for (const Mat& a : atoms_) {
      if (!a.same_shape(atoms_.front())) {
        throw ShapeError("Frame: atoms of differing shape");
      }
      if (!a.all_finite()) throw RangeError("Frame: non-finite atom");
    }
    orthonormal_ = check_orthonormal();
  }

  // Rank-one atoms u_j v_j^H for the leading `count` singular triplets.
  static Frame from_svd(const Svd& s, std::size_t count) {
    std::vector<Mat> atoms;
    atoms.reserve(count);
    for (std::size_t j = 0; j < count; ++j) atoms.push_back(s.frame(j));
    return Frame(std::move(atoms));
  }

  std::size_t size() const { return atoms_.size(); }
  std::size_t rows() const { return atoms_.front().rows(); }
  std::size_t cols() const { return atoms_.front().cols(); }
  const Mat& atom(std::size_t k) const { return atoms_[k]; }
  const std::vector<Mat>& atoms() const { return atoms_; }
  bool orthonormal() const { return orthonormal_; }

 private:
  bool check_orthonormal() const {
    for (std::size_t j = 0; j < atoms_.size(); ++j) {
      for (std::size_t k = j; k < atoms_.size(); ++k) {
        const Complex ip = inner(atoms_[j], atoms_[k]);
        const double target = j == k ? 1.0 : 0.0;
        if (std::abs(ip - target) > kFrameOrthoTol) return false;
      }
    }
    return true;
  }

  std::vector<Mat> atoms_;
  bool orthonormal_ = false;
};

// L_Psi alpha = sum_k alpha_k psi_k.
inline Mat synthesize(const Frame& psi, std::span<const Complex> coeffs) {
  if (coeffs.size() != psi.size()) {
    throw ShapeError("synthesize: " + std::to_string(coeffs.size()) +
                     " coefficients for " + std::to_string(psi.size()) + " atoms");
  }
  Mat out(psi.rows(), psi.cols());
  for (std::size_t k = 0; k < psi.size(); ++k) out.axpy(coeffs[k], psi.atom(k));
  return out;
}

// (L_Psi^* X)_k = <X, psi_k>.
inline CVec analyze(const Frame& psi, const Mat& x) {
  if (x.rows() != psi.rows() || x.cols() != psi.cols()) {
    throw ShapeError("analyze: matrix " + x.shape_string() + " vs atoms " +
                     psi.atom(0).shape_string());
  }
  CVec out(psi.size());
  for (std::size_t k = 0; k < psi.size(); ++k) out[k] = inner(x, psi.atom(k));
  return out;
}

// P_Psi = L_Psi L_Psi^*; only defined for orthonormal frames.
inline Mat project(const Frame& psi, const Mat& x) {
  if (!psi.orthonormal()) throw PreconditionError("project: frame is not orthonormal");
  return synthesize(psi, analyze(psi, x));
}

// P1..P4 of the top-r left/right singular subspaces of a reference matrix,
// applied by action: P1 Z = P_U Z P_V, P2 Z = P_U^perp Z P_V,
// P3 Z = P_U Z P_V^perp, P4 Z = P_U^perp Z P_V^perp.
class SplitProjectors {
 public:
  SplitProjectors(const Svd& source, std::size_t r)
      : m_(source.left.rows()), n_(source.right.rows()), r_(r) {
    const std::size_t k = std::min(m_, n_);
    if (r < 1 || r >= k) {
      throw RangeError("split4: r = " + std::to_string(r) + " must satisfy 1 <= r < " +
                       std::to_string(k));
    }
    ur_ = source.left.leading_cols(r);
    vr_ = source.right.leading_cols(r);
    ur_h_ = ur_.adjoint();
    vr_h_ = vr_.adjoint();
  }

  std::size_t r() const { return r_; }

  std::array<Mat, 4> apply(const Mat& z) const {
    if (z.rows() != m_ || z.cols() != n_) {
      throw ShapeError("split4: Z is " + z.shape_string() + ", expected " +
                       std::to_string(m_) + "x" + std::to_string(n_));
    }
    const Mat pu_z = ur_ * (ur_h_ * z);
    const Mat w = z - pu_z;
    Mat p1 = (pu_z * vr_) * vr_h_;
    Mat p3 = pu_z - p1;
    Mat p2 = (w * vr_) * vr_h_;
    Mat p4 = w - p2;
    return {std::move(p1), std::move(p2), std::move(p3), std::move(p4)};
  }

  // Projection of Z onto the orthogonal complement of the tangent space
  // (block 4 alone); handy for subdifferential checks.
  Mat p4(const Mat& z) const { return apply(z)[3]; }

 private:
  std::size_t m_;
  std::size_t n_;
  std::size_t r_;
  Mat ur_, vr_, ur_h_, vr_h_;
};

inline std::array<Mat, 4> split4(const Svd& x_svd, std::size_t r, const Mat& z) {
  return SplitProjectors(x_svd, r).apply(z);
}

// Consecutive rank-r pieces Q_1 T, Q_2 T, ... of T in decreasing sigma order.
struct TailBlocks {
  std::vector<Mat> blocks;
  std::vector<std::vector<double>> block_sigmas;
  std::size_t r = 0;

  std::size_t size() const { return blocks.size(); }
};

// Blocks cover the numerical rank of T (sigma > 1e-10 sigma_1); a zero T
// yields no blocks.
inline TailBlocks tail_blocks(const Mat& t, std::size_t r) {
  if (r < 1) throw RangeError("tail_blocks: r must be >= 1");
  const Svd s = svd(t);
  const std::size_t rank = numerical_rank(s);
  TailBlocks out;
  out.r = r;
  for (std::size_t start = 0; start < rank; start += r) {
    const std::size_t stop = std::min(start + r, rank);
    Mat block(t.rows(), t.cols());
    std::vector<double> sig;
    for (std::size_t j = start; j < stop; ++j) {
      sig.push_back(s.sigmas[j]);
      block.axpy(s.sigmas[j], s.frame(j));
    }
    out.blocks.push_back(std::move(block));
    out.block_sigmas.push_back(std::move(sig));
  }
  return out;
}

}  // namespace lowrank

#endif  // LOWRANK_FRAMES_HPP_
