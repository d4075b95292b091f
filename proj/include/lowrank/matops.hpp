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

// Dense complex matrix kernel: one-sided Jacobi SVD, the Frobenius/nuclear/
// spectral norms, the trace inner product, Eckart-Young truncation and
// singular value soft-thresholding.

#ifndef LOWRANK_MATOPS_HPP_
#define LOWRANK_MATOPS_HPP_

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "lowrank/error.hpp"
#include "lowrank/mat.hpp"

namespace lowrank {

// Thin SVD: source = left * diag(sigmas) * right^H, k = min(m, n).
struct Svd {
  Mat left;                   // m x k, orthonormal columns
  std::vector<double> sigmas;  // nonincreasing, >= 0
  Mat right;                  // n x k, orthonormal columns

  std::size_t k() const { return sigmas.size(); }

  CVec left_vec(std::size_t j) const { return left.col(j); }
  CVec right_vec(std::size_t j) const { return right.col(j); }

  // psi_j = u_j v_j^H
  Mat frame(std::size_t j) const { return Mat::outer(left.col(j), right.col(j)); }
};

namespace svd_params {
inline constexpr double kRotationTol = 1e-13;
inline constexpr int kMaxSweeps = 60;
inline constexpr double kRankTol = 1e-10;
}  // namespace svd_params

namespace detail {

// Orthonormal columns of a column-major m x k block; columns with
// needs_fill[j] set are replaced by unit vectors orthogonal to the rest.
inline void complete_basis(std::vector<CVec>& cols, const std::vector<bool>& needs_fill) {
  if (cols.empty()) return;
  const std::size_t m = cols.front().size();
  std::size_t candidate = 0;
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (!needs_fill[j]) continue;
    while (true) {
      if (candidate >= m) throw Error("complete_basis: ran out of candidates");
      CVec v(m, Complex(0.0, 0.0));
      v[candidate++] = 1.0;
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t q = 0; q < cols.size(); ++q) {
          if (q == j || (needs_fill[q] && q > j)) continue;
          const Complex c = vdot(cols[q], v);
          for (std::size_t i = 0; i < m; ++i) v[i] -= c * cols[q][i];
        }
      }
      const double nv = vnorm(v);
      if (nv > 0.5) {
        for (Complex& z : v) z /= nv;
        cols[j] = std::move(v);
        break;
      }
    }
  }
}

// Rotate so the largest-modulus entry of each left vector is real >= 0; the
// conjugate phase goes into the matching right vector.
inline void fix_phases(Mat& left, Mat& right) {
  for (std::size_t j = 0; j < left.cols(); ++j) {
    std::size_t best = 0;
    double best_abs = -1.0;
    for (std::size_t i = 0; i < left.rows(); ++i) {
      const double a = std::abs(left(i, j));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (best_abs <= 0.0) continue;
    const Complex phase = std::conj(left(best, j)) / best_abs;
    for (std::size_t i = 0; i < left.rows(); ++i) left(i, j) *= phase;
    left(best, j) = Complex(left(best, j).real(), 0.0);
    for (std::size_t i = 0; i < right.rows(); ++i) right(i, j) *= phase;
  }
}

// Hestenes one-sided Jacobi for m >= n.
inline Svd jacobi_tall(const Mat& x) {
  const std::size_t m = x.rows();
  const std::size_t n = x.cols();
  std::vector<CVec> a(n, CVec(m));
  std::vector<CVec> v(n, CVec(n, Complex(0.0, 0.0)));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) a[j][i] = x(i, j);
    v[j][j] = 1.0;
  }

  bool converged = n < 2;
  double off = 0.0;
  for (int sweep = 0; sweep < svd_params::kMaxSweeps && !converged; ++sweep) {
    bool rotated = false;
    off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        Complex gamma(0.0, 0.0);
        for (std::size_t i = 0; i < m; ++i) {
          alpha += std::norm(a[p][i]);
          beta += std::norm(a[q][i]);
          gamma += std::conj(a[p][i]) * a[q][i];
        }
        const double g = std::abs(gamma);
        if (alpha == 0.0 || beta == 0.0 || g == 0.0) continue;
        const double rel = g / std::sqrt(alpha * beta);
        off = std::max(off, rel);
        if (rel <= svd_params::kRotationTol) continue;
        rotated = true;
        // Phase-align column q so that a_p^H a_q is real positive, then apply
        // the real symmetric Jacobi rotation.
        const Complex phase = std::conj(gamma) / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const Complex ap = a[p][i];
          const Complex aq = a[q][i] * phase;
          a[p][i] = c * ap - s * aq;
          a[q][i] = s * ap + c * aq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const Complex vp = v[p][i];
          const Complex vq = v[q][i] * phase;
          v[p][i] = c * vp - s * vq;
          v[q][i] = s * vp + c * vq;
        }
      }
    }
    converged = !rotated;
  }
  if (!converged) {
    throw FactorizationError("svd: Jacobi sweeps did not converge (off-diagonal " +
                                 std::to_string(off) + ")",
                             off);
  }

  std::vector<double> norms(n);
  for (std::size_t j = 0; j < n; ++j) norms[j] = vnorm(a[j]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t l, std::size_t r) { return norms[l] > norms[r]; });

  std::vector<CVec> ucols(n);
  std::vector<bool> fill(n, false);
  Svd out;
  out.sigmas.resize(n);
  out.right = Mat(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    const double s = norms[j];
    out.sigmas[k] = s;
    if (s > 1e-280) {
      ucols[k] = a[j];
      for (Complex& z : ucols[k]) z /= s;
    } else {
      out.sigmas[k] = 0.0;
      ucols[k] = CVec(m, Complex(0.0, 0.0));
      fill[k] = true;
    }
    for (std::size_t i = 0; i < n; ++i) out.right(i, k) = v[j][i];
  }
  complete_basis(ucols, fill);
  out.left = Mat(m, n);
  for (std::size_t k = 0; k < n; ++k) out.left.set_col(k, ucols[k]);
  return out;
}

}  // namespace detail

// Thin SVD by one-sided Jacobi. Deterministic: singular values sorted
// nonincreasing (stable on ties) and each left vector's largest-modulus entry
// made real nonnegative.
inline Svd svd(const Mat& x) {
  if (!x.all_finite()) throw RangeError("svd: non-finite entries");
  if (x.rows() == 0 || x.cols() == 0) throw ShapeError("svd: empty matrix");
  Svd out;
  if (x.rows() >= x.cols()) {
    out = detail::jacobi_tall(x);
  } else {
    Svd t = detail::jacobi_tall(x.adjoint());
    out.left = std::move(t.right);
    out.right = std::move(t.left);
    out.sigmas = std::move(t.sigmas);
  }
  detail::fix_phases(out.left, out.right);
  return out;
}

inline std::vector<double> singular_values(const Mat& x) { return svd(x).sigmas; }

inline Mat reconstruct(const Svd& s, std::size_t count) {
  const std::size_t m = s.left.rows();
  const std::size_t n = s.right.rows();
  Mat out(m, n);
  for (std::size_t k = 0; k < count && k < s.k(); ++k) {
    const double sk = s.sigmas[k];
    if (sk == 0.0) continue;
    for (std::size_t i = 0; i < m; ++i) {
      const Complex u = s.left(i, k) * sk;
      for (std::size_t j = 0; j < n; ++j) out(i, j) += u * std::conj(s.right(j, k));
    }
  }
  return out;
}

inline Mat reconstruct(const Svd& s) { return reconstruct(s, s.k()); }

// Number of sigmas above kRankTol * sigma_1.
inline std::size_t numerical_rank(std::span<const double> sigmas) {
  if (sigmas.empty() || sigmas.front() <= 0.0) return 0;
  const double cut = svd_params::kRankTol * sigmas.front();
  std::size_t r = 0;
  while (r < sigmas.size() && sigmas[r] > cut) ++r;
  return r;
}

inline std::size_t numerical_rank(const Svd& s) { return numerical_rank(s.sigmas); }
inline std::size_t numerical_rank(const Mat& x) { return numerical_rank(svd(x)); }

enum class NormKind { kFrobenius, kNuclear, kSpectral };

inline double frobenius_norm(const Mat& x) { return vnorm(x.entries()); }

inline double nuclear_norm(const Svd& s) {
  return std::accumulate(s.sigmas.begin(), s.sigmas.end(), 0.0);
}

inline double norm(const Mat& x, NormKind kind) {
  if (!x.all_finite()) throw RangeError("norm: non-finite entries");
  switch (kind) {
    case NormKind::kFrobenius:
      return frobenius_norm(x);
    case NormKind::kNuclear:
      return nuclear_norm(svd(x));
    case NormKind::kSpectral:
      return svd(x).sigmas.front();
  }
  return 0.0;
}

inline double nuclear_norm(const Mat& x) { return norm(x, NormKind::kNuclear); }
inline double spectral_norm(const Mat& x) { return norm(x, NormKind::kSpectral); }

// <X, Y> = Tr(Y^H X).
inline Complex inner(const Mat& x, const Mat& y) {
  if (!x.same_shape(y)) {
    throw ShapeError("inner: " + x.shape_string() + " vs " + y.shape_string());
  }
  return vdot(y.entries(), x.entries());
}

// X_r = sum_{j <= r} sigma_j u_j v_j^H. Ties at sigma_r keep the SVD order.
inline Mat best_rank_r(const Svd& s, std::size_t r) {
  if (r < 1 || r > s.k()) {
    throw RangeError("best_rank_r: r = " + std::to_string(r) + " outside [1, " +
                     std::to_string(s.k()) + "]");
  }
  return reconstruct(s, r);
}

inline Mat best_rank_r(const Mat& x, std::size_t r) { return best_rank_r(svd(x), r); }

// ||X - X_r||_F from the singular value tail.
inline double tail_error(const Svd& s, std::size_t r) {
  double acc = 0.0;
  for (std::size_t j = r; j < s.k(); ++j) acc += s.sigmas[j] * s.sigmas[j];
  return std::sqrt(acc);
}

// Result of singular value soft-thresholding together with the nuclear norm
// of the output, which the proximal solvers need for their objective.
struct Thresholded {
  Mat value;
  double nuclear = 0.0;
  std::size_t rank = 0;
};

inline Thresholded svt_full(const Mat& x, double tau) {
  if (!(tau >= 0.0)) throw RangeError("svt: tau must be nonnegative");
  Svd s = svd(x);
  Thresholded out;
  for (double& sigma : s.sigmas) {
    sigma = std::max(sigma - tau, 0.0);
    out.nuclear += sigma;
    if (sigma > 0.0) ++out.rank;
  }
  out.value = reconstruct(s, out.rank);
  return out;
}

// U * diag(max(sigma - tau, 0)) * V^H: the proximal map of tau * ||.||_*.
inline Mat svt(const Mat& x, double tau) {
  if (tau == 0.0) return x;
  return svt_full(x, tau).value;
}

}  // namespace lowrank

#endif  // LOWRANK_MATOPS_HPP_
