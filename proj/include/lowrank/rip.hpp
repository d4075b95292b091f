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

// Rank-restricted isometry constant of a measurement operator,
//
//   delta_r(A) = min { d : (1 - d)||X||_F^2 <= ||AX||_2^2 <= (1 + d)||X||_F^2
//                          for all X with rank(X) <= r },
//
// and the restricted orthogonality quantities for matrices with mutually
// orthogonal singular frames.
//
// Computing delta_r exactly is intractable in general. delta_mc and
// delta_local return lower bounds (certified_upper = false). delta_full
// returns the unrestricted constant from the extreme singular values of the
// operator matrix, which upper-bounds delta_r for every r.

#ifndef LOWRANK_RIP_HPP_
#define LOWRANK_RIP_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lowrank/error.hpp"
#include "lowrank/frames.hpp"
#include "lowrank/mat.hpp"
#include "lowrank/matops.hpp"
#include "lowrank/measurement.hpp"
#include "lowrank/random.hpp"

namespace lowrank {

enum class RipMethod { kMonteCarlo, kLocalSearch, kExactFull };

inline const char* to_string(RipMethod m) {
  switch (m) {
    case RipMethod::kMonteCarlo:
      return "monte_carlo";
    case RipMethod::kLocalSearch:
      return "local_search";
    case RipMethod::kExactFull:
      return "exact_full";
  }
  return "?";
}

struct RipEstimate {
  std::size_t r = 0;
  double delta_hat = 0.0;
  RipMethod method = RipMethod::kMonteCarlo;
  std::size_t samples_or_restarts = 0;
  bool certified_upper = false;
  // Local search only: every restart met the Rayleigh stopping tolerance.
  bool converged = true;
  std::uint64_t seed = 0;
};

struct LocalSearchOptions {
  std::size_t restarts = 16;
  std::size_t max_iters = 200;
  // Monte Carlo samples drawn first; the best ones seed restart 0.
  std::size_t mc_samples = 2000;
  double tol = 1e-10;
};

namespace detail {

inline void check_rank_level(const MeasOp& a, std::size_t r) {
  const std::size_t k = std::min(a.m(), a.n());
  if (r < 1 || r > k) {
    throw RangeError("rip: r = " + std::to_string(r) + " outside [1, " +
                     std::to_string(k) + "]");
  }
}

// ||A(U V^H)||^2 / ||U V^H||_F^2.
inline double rayleigh(const MeasOp& a, const Mat& u, const Mat& v) {
  const Mat x = u * v.adjoint();
  const double nx = frobenius_norm(x);
  if (nx == 0.0) return 1.0;
  const double ax = vnorm(apply(a, x));
  return (ax * ax) / (nx * nx);
}

struct Factors {
  Mat u;
  Mat v;
  double value = 0.0;
};

struct McScan {
  double delta = 0.0;
  Factors hi;  // largest ||AX||^2
  Factors lo;  // smallest ||AX||^2
};

inline McScan mc_scan(const MeasOp& a, std::size_t r, std::size_t n_samples,
                      std::uint64_t seed) {
  McScan out;
  bool first = true;
  for (std::size_t i = 0; i < n_samples; ++i) {
    Stream rng(seed, i);
    Mat g = gaussian_mat(a.m(), r, rng);
    const Mat h = gaussian_mat(a.n(), r, rng);
    const double nx = frobenius_norm(g * h.adjoint());
    if (nx == 0.0) continue;
    g *= Complex(1.0 / nx, 0.0);
    const double val = rayleigh(a, g, h);
    out.delta = std::max(out.delta, std::abs(val - 1.0));
    if (first || val > out.hi.value) out.hi = {g, h, val};
    if (first || val < out.lo.value) out.lo = {g, h, val};
    first = false;
  }
  return out;
}

using EMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using EMapCol = Eigen::Map<const EMat>;

inline EMat to_eigen(const Mat& x) {
  EMat out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(i, j);
  }
  return out;
}

// Top (maximize) or bottom eigenpair of the Hermitian PSD Gram B^H B.
inline std::pair<double, Eigen::VectorXcd> extreme_eig(const EMat& b, bool maximize) {
  EMat gram = EMat::Zero(b.cols(), b.cols());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(b.adjoint());
  const Eigen::SelfAdjointEigenSolver<EMat> es(gram);
  if (es.info() != Eigen::Success) throw FactorizationError("rip: Gram eigensolve failed", 0.0);
  const Eigen::Index j = maximize ? gram.cols() - 1 : 0;
  return {es.eigenvalues()(j), es.eigenvectors().col(j)};
}

// Row `row` of the operator as the m x n matrix it pairs with.
inline EMapCol op_row(const MeasOp& a, std::size_t row) {
  const std::size_t mn = a.m() * a.n();
  return EMapCol(a.op_matrix().entries().data() + row * mn, a.m(), a.n());
}

// Fix V (orthonormal columns), optimize over U.
inline double step_left(const MeasOp& a, Mat& u, const Mat& v, bool maximize) {
  const std::size_t m = a.m(), k = v.cols();
  const EMat vc = to_eigen(v).conjugate();
  EMat b(a.p(), m * k);
  for (std::size_t row = 0; row < a.p(); ++row) {
    const EMat blk = op_row(a, row) * vc;
    b.row(row) = Eigen::Map<const Eigen::RowVectorXcd>(blk.data(), m * k);
  }
  auto [value, w] = extreme_eig(b, maximize);
  u = Mat(m, k);
  for (std::size_t l = 0; l < k; ++l) {
    for (std::size_t i = 0; i < m; ++i) u(i, l) = w(i + l * m);
  }
  return value;
}

// Fix U (orthonormal columns), optimize over conj(V).
inline double step_right(const MeasOp& a, const Mat& u, Mat& v, bool maximize) {
  const std::size_t n = a.n(), k = u.cols();
  const EMat ue = to_eigen(u);
  EMat c(a.p(), n * k);
  for (std::size_t row = 0; row < a.p(); ++row) {
    const EMat blk = op_row(a, row).transpose() * ue;
    c.row(row) = Eigen::Map<const Eigen::RowVectorXcd>(blk.data(), n * k);
  }
  auto [value, w] = extreme_eig(c, maximize);
  v = Mat(n, k);
  for (std::size_t l = 0; l < k; ++l) {
    for (std::size_t j = 0; j < n; ++j) v(j, l) = std::conj(w(j + l * n));
  }
  return value;
}

// Rewrite U V^H = U' V'^H with orthonormal V' (or U' when `left`).
inline void orthonormalize(Mat& u, Mat& v, bool left) {
  Mat& target = left ? u : v;
  Mat& other = left ? v : u;
  const Svd s = svd(target);  // target = L S R^H
  Mat rs = s.right;
  for (std::size_t i = 0; i < rs.rows(); ++i) {
    for (std::size_t j = 0; j < rs.cols(); ++j) rs(i, j) *= s.sigmas[j];
  }
  other = other * rs;
  target = s.left;
}

struct LocalResult {
  double value = 0.0;
  bool converged = false;
};

inline LocalResult alternate(const MeasOp& a, Factors start, bool maximize,
                             const LocalSearchOptions& opts) {
  Mat u = std::move(start.u);
  Mat v = std::move(start.v);
  LocalResult out{start.value, false};
  double prev = start.value;
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    orthonormalize(u, v, /*left=*/false);
    step_left(a, u, v, maximize);
    orthonormalize(u, v, /*left=*/true);
    const double value = step_right(a, u, v, maximize);
    out.value = maximize ? std::max(out.value, value) : std::min(out.value, value);
    if (std::abs(value - prev) < opts.tol) {
      out.converged = true;
      break;
    }
    prev = value;
  }
  return out;
}

}  // namespace detail

// Max over n_samples random unit-Frobenius rank-r X = G H^H / ||G H^H||_F of
// | ||AX||^2 - 1 |. Sample i uses stream (seed, i), so estimates over nested
// sample counts are nondecreasing.
inline RipEstimate delta_mc(const MeasOp& a, std::size_t r, std::size_t n_samples,
                            std::uint64_t seed) {
  detail::check_rank_level(a, r);
  RipEstimate est;
  est.r = r;
  est.method = RipMethod::kMonteCarlo;
  est.samples_or_restarts = n_samples;
  est.seed = seed;
  est.delta_hat = detail::mc_scan(a, r, n_samples, seed).delta;
  return est;
}

// Alternating maximization and minimization of the Rayleigh quotient
// ||A(U V^H)||^2 / ||U V^H||_F^2 over factor pairs (U: m x r, V: n x r).
// Restart 0 starts from the extreme Monte Carlo samples, so the result is
// never below delta_mc(a, r, opts.mc_samples, seed).
inline RipEstimate delta_local(const MeasOp& a, std::size_t r, std::uint64_t seed,
                               const LocalSearchOptions& opts = {}) {
  detail::check_rank_level(a, r);
  RipEstimate est;
  est.r = r;
  est.method = RipMethod::kLocalSearch;
  est.samples_or_restarts = opts.restarts;
  est.seed = seed;

  const detail::McScan scan = detail::mc_scan(a, r, opts.mc_samples, seed);
  double delta = scan.delta;
  bool converged = true;
  const std::uint64_t restart_seed = derive_seed(seed, 0x5e57a27ULL);
  for (std::size_t rs = 0; rs < opts.restarts; ++rs) {
    for (bool maximize : {true, false}) {
      detail::Factors start;
      if (rs == 0 && opts.mc_samples > 0) {
        start = maximize ? scan.hi : scan.lo;
      } else {
        Stream rng(restart_seed, 2 * rs + (maximize ? 0 : 1));
        start.u = gaussian_mat(a.m(), r, rng);
        start.v = gaussian_mat(a.n(), r, rng);
        start.value = detail::rayleigh(a, start.u, start.v);
      }
      const detail::LocalResult res = detail::alternate(a, std::move(start), maximize, opts);
      converged = converged && res.converged;
      delta = std::max(delta, std::abs(res.value - 1.0));
    }
  }
  est.delta_hat = delta;
  est.converged = converged;
  return est;
}

inline RipEstimate delta_local(const MeasOp& a, std::size_t r, std::size_t restarts,
                               std::size_t max_iters, std::uint64_t seed) {
  LocalSearchOptions opts;
  opts.restarts = restarts;
  opts.max_iters = max_iters;
  return delta_local(a, r, seed, opts);
}

// Unrestricted isometry constant max(smax^2 - 1, 1 - smin^2) of op_matrix;
// smin is 0 when p < mn. Upper-bounds delta_r for every r.
inline RipEstimate delta_full(const MeasOp& a) {
  const std::vector<double> s = singular_values(a.op_matrix());
  const double smax = s.front();
  const double smin = a.p() < a.m() * a.n() ? 0.0 : s.back();
  RipEstimate est;
  est.r = std::min(a.m(), a.n());
  est.method = RipMethod::kExactFull;
  est.samples_or_restarts = 0;
  est.certified_upper = true;
  est.delta_hat = std::max(smax * smax - 1.0, 1.0 - smin * smin);
  return est;
}

struct RopCheck {
  double lhs = 0.0;             // |<AX, AY>|
  double submatrix_norm = 0.0;  // smax(L_Y^* A^* A L_X)
  double gram_dev = 0.0;        // smax(L^* A^* A L - I) over the union frame
  double product_bound = 0.0;   // submatrix_norm * ||X||_F ||Y||_F
  double gram_bound = 0.0;      // gram_dev * ||X||_F ||Y||_F
};

// Restricted orthogonality for X, Y whose rank-one singular frames are
// mutually orthogonal.
inline RopCheck rop_check(const MeasOp& a, const Mat& x, const Mat& y) {
  const Svd sx = svd(x);
  const Svd sy = svd(y);
  const std::size_t rx = numerical_rank(sx);
  const std::size_t ry = numerical_rank(sy);
  std::vector<Mat> atoms;
  for (std::size_t j = 0; j < rx; ++j) atoms.push_back(sx.frame(j));
  for (std::size_t k = 0; k < ry; ++k) atoms.push_back(sy.frame(k));
  for (std::size_t j = 0; j < rx; ++j) {
    for (std::size_t k = 0; k < ry; ++k) {
      const double ip = std::abs(inner(atoms[j], atoms[rx + k]));
      if (ip > kFrameOrthoTol) {
        throw PreconditionError("rop_check: frames not orthogonal at (psi_" +
                                std::to_string(j + 1) + ", psi'_" +
                                std::to_string(k + 1) + "), |<.,.>| = " +
                                std::to_string(ip));
      }
    }
  }

  RopCheck out;
  out.lhs = std::abs(vdot(apply(a, y), apply(a, x)));
  if (atoms.empty()) return out;

  // Columns A psi for the union frame; Gram = (A L)^H (A L).
  Mat al(a.p(), atoms.size());
  for (std::size_t c = 0; c < atoms.size(); ++c) al.set_col(c, apply(a, atoms[c]));
  Mat gram = al.adjoint() * al;
  if (rx > 0 && ry > 0) {
    Mat block(ry, rx);
    for (std::size_t k = 0; k < ry; ++k) {
      for (std::size_t j = 0; j < rx; ++j) block(k, j) = gram(rx + k, j);
    }
    out.submatrix_norm = singular_values(block).front();
  }
  for (std::size_t c = 0; c < atoms.size(); ++c) gram(c, c) -= 1.0;
  out.gram_dev = singular_values(gram).front();
  const double scale = frobenius_norm(x) * frobenius_norm(y);
  out.product_bound = out.submatrix_norm * scale;
  out.gram_bound = out.gram_dev * scale;
  return out;
}

}  // namespace lowrank

#endif  // LOWRANK_RIP_HPP_
