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

// Randomized property batteries for the norm inequalities and restricted
// orthogonality facts the error bound is built from. Every battery is a pure
// function of (seed, cases).

#ifndef LOWRANK_BATTERIES_HPP_
#define LOWRANK_BATTERIES_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "lowrank/guarantee.hpp"
#include "lowrank/io.hpp"
#include "lowrank/mat.hpp"
#include "lowrank/matops.hpp"
#include "lowrank/measurement.hpp"
#include "lowrank/random.hpp"
#include "lowrank/rip.hpp"

namespace lowrank {

struct CheckOutcome {
  std::string id;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

inline std::string format_check(const CheckOutcome& c) {
  return std::string(c.pass ? "PASS" : "FAIL") + " [" + c.id + "] " + c.name + ": " + c.detail;
}

namespace battery {

inline constexpr double kRelTol = 1e-9;

namespace detail {

inline std::size_t draw_size(Stream& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.uniform() * static_cast<double>(hi - lo + 1));
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline std::string sci(double x) {
  std::ostringstream out;
  out.precision(3);
  out << std::scientific << x;
  return out.str();
}

// Columns [first, first + count) of a unitary.
inline Mat cols_range(const Mat& u, std::size_t first, std::size_t count) {
  Mat out(u.rows(), count);
  for (std::size_t i = 0; i < u.rows(); ++i) {
    for (std::size_t j = 0; j < count; ++j) out(i, j) = u(i, first + j);
  }
  return out;
}

// U diag(s) V^H for orthonormal-column U, V and positive weights s.
inline Mat weighted(const Mat& u, const Mat& v, const std::vector<double>& s) {
  Mat us = u;
  for (std::size_t i = 0; i < us.rows(); ++i) {
    for (std::size_t j = 0; j < us.cols(); ++j) us(i, j) *= s[j];
  }
  return us * v.adjoint();
}

inline std::vector<double> positive_weights(std::size_t k, Stream& rng) {
  std::vector<double> s(k);
  for (double& x : s) x = 0.1 + 2.0 * rng.uniform();
  return s;
}

}  // namespace detail

// ||X||_F <= ||X||_* <= sqrt(rank X) ||X||_F on random complex matrices of
// random size (up to 12 x 9) and rank.
inline CheckOutcome nuclear_sandwich(std::uint64_t seed, std::size_t cases) {
  detail::Timer timer;
  std::size_t failures = 0;
  double worst = 0.0;
  for (std::size_t c = 0; c < cases; ++c) {
    Stream rng(seed, c);
    const std::size_t m = detail::draw_size(rng, 1, 12);
    const std::size_t n = detail::draw_size(rng, 1, 9);
    const std::size_t k = detail::draw_size(rng, 1, std::min(m, n));
    const Mat x = random_low_rank(m, n, k, rng);
    const Svd s = svd(x);
    const double fro = frobenius_norm(x);
    const double nuc = nuclear_norm(s);
    const double rank = static_cast<double>(numerical_rank(s));
    const double lower = (fro - nuc) / fro;
    const double upper = (nuc - std::sqrt(rank) * fro) / fro;
    worst = std::max({worst, lower, upper});
    if (lower > kRelTol || upper > kRelTol) ++failures;
  }
  return {"sandwich", "||X||_F <= ||X||_* <= sqrt(rank) ||X||_F", failures == 0,
          std::to_string(cases - failures) + "/" + std::to_string(cases) +
              " cases, worst relative excess " + detail::sci(worst),
          timer.seconds()};
}

// Re Tr(U^H X V) <= ||X||_* for random orthonormal-column U, V, with
// equality at the singular frames.
inline CheckOutcome variational(std::uint64_t seed, std::size_t cases) {
  detail::Timer timer;
  std::size_t failures = 0;
  double worst = 0.0;
  for (std::size_t c = 0; c < cases; ++c) {
    Stream rng(seed, c);
    const std::size_t m = detail::draw_size(rng, 1, 12);
    const std::size_t n = detail::draw_size(rng, 1, 9);
    const std::size_t k = std::min(m, n);
    const Mat x = gaussian_mat(m, n, rng);
    const double nuc = nuclear_norm(x);
    const Mat u = random_unitary(m, rng).leading_cols(k);
    const Mat v = random_unitary(n, rng).leading_cols(k);
    Complex tr(0.0, 0.0);
    const Mat prod = u.adjoint() * x * v;
    for (std::size_t j = 0; j < k; ++j) tr += prod(j, j);
    const Svd s = svd(x);
    Complex tr_opt(0.0, 0.0);
    const Mat prod_opt = s.left.adjoint() * x * s.right;
    for (std::size_t j = 0; j < k; ++j) tr_opt += prod_opt(j, j);
    const double excess = (tr.real() - nuc) / nuc;
    const double gap = std::abs(tr_opt.real() - nuc) / nuc;
    worst = std::max({worst, excess, gap});
    if (excess > kRelTol || gap > kRelTol) ++failures;
  }
  return {"variational", "Re Tr(U^H X V) <= ||X||_*, attained at singular frames",
          failures == 0,
          std::to_string(cases - failures) + "/" + std::to_string(cases) +
              " cases, worst relative excess " + detail::sci(worst),
          timer.seconds()};
}

// ||X + Y||_* = ||X||_* + ||Y||_* when X Y^H = 0 and X^H Y = 0. Pairs are
// built on disjoint column blocks of random unitaries.
inline CheckOutcome nuclear_additivity(std::uint64_t seed, std::size_t cases) {
  detail::Timer timer;
  std::size_t failures = 0;
  double worst = 0.0;
  double worst_orth = 0.0;
  for (std::size_t c = 0; c < cases; ++c) {
    Stream rng(seed, c);
    const std::size_t m = detail::draw_size(rng, 2, 12);
    const std::size_t n = detail::draw_size(rng, 2, 9);
    const std::size_t k = std::min(m, n);
    const std::size_t kx = detail::draw_size(rng, 1, k - 1);
    const std::size_t ky = detail::draw_size(rng, 1, k - kx);
    const Mat u = random_unitary(m, rng);
    const Mat v = random_unitary(n, rng);
    const Mat x = detail::weighted(detail::cols_range(u, 0, kx), detail::cols_range(v, 0, kx),
                                   detail::positive_weights(kx, rng));
    const Mat y = detail::weighted(detail::cols_range(u, kx, ky),
                                   detail::cols_range(v, kx, ky),
                                   detail::positive_weights(ky, rng));
    const double scale = frobenius_norm(x) * frobenius_norm(y);
    worst_orth = std::max({worst_orth, frobenius_norm(x * y.adjoint()) / scale,
                           frobenius_norm(x.adjoint() * y) / scale});
    const double nx = nuclear_norm(x);
    const double ny = nuclear_norm(y);
    const double rel = std::abs(nuclear_norm(x + y) - nx - ny) / (nx + ny);
    worst = std::max(worst, rel);
    if (rel > kRelTol) ++failures;
  }
  return {"additivity", "||X + Y||_* = ||X||_* + ||Y||_* for XY^H = 0 = X^H Y",
          failures == 0,
          std::to_string(cases - failures) + "/" + std::to_string(cases) +
              " pairs, worst relative gap " + detail::sci(worst) +
              ", worst orthogonality residual " + detail::sci(worst_orth),
          timer.seconds()};
}

// Restricted orthogonality chain on random (A, X, Y) whose singular frames
// are mutually orthogonal:
//   |<AX, AY>| <= smax(off-diagonal Gram block) ||X||_F ||Y||_F
//   smax(off-diagonal Gram block) <= smax(Gram - I).
inline CheckOutcome restricted_orthogonality(std::uint64_t seed, std::size_t cases) {
  detail::Timer timer;
  std::size_t failures = 0;
  double worst_first = -1e300, worst_second = -1e300;
  for (std::size_t c = 0; c < cases; ++c) {
    Stream rng(seed, c);
    const std::size_t m = detail::draw_size(rng, 2, 8);
    const std::size_t n = detail::draw_size(rng, 2, 8);
    const std::size_t k = std::min(m, n);
    const std::size_t kx = detail::draw_size(rng, 1, k - 1);
    const std::size_t ky = detail::draw_size(rng, 1, k - kx);
    const std::size_t p = detail::draw_size(rng, 4, 3 * m * n);
    const MeasOp a = gaussian_op(m, n, p, rng());
    const Mat u = random_unitary(m, rng);
    const Mat v = random_unitary(n, rng);
    const Mat x = detail::weighted(detail::cols_range(u, 0, kx), detail::cols_range(v, 0, kx),
                                   detail::positive_weights(kx, rng));
    const Mat y = detail::weighted(detail::cols_range(u, kx, ky),
                                   detail::cols_range(v, kx, ky),
                                   detail::positive_weights(ky, rng));
    const RopCheck rc = rop_check(a, x, y);
    // Left side recomputed here from the raw operator.
    const double lhs = std::abs(vdot(apply(a, y), apply(a, x)));
    const double first = lhs - rc.product_bound;
    const double second = rc.submatrix_norm - rc.gram_dev;
    worst_first = std::max(worst_first, first);
    worst_second = std::max(worst_second, second);
    if (first > kRelTol || second > kRelTol) ++failures;
  }
  return {"restricted-orthogonality",
          "|<AX,AY>| <= smax(block) ||X|| ||Y|| and smax(block) <= smax(Gram - I)",
          failures == 0,
          std::to_string(cases - failures) + "/" + std::to_string(cases) +
              " cases, max(lhs - bound) " + detail::sci(worst_first) +
              ", max(block - gram) " + detail::sci(worst_second),
          timer.seconds()};
}

struct UnitCircleReport {
  std::vector<Lemma37Result> rows;
  CheckOutcome outcome;
};

// max of x + alpha y on the unit circle against sqrt(1 + alpha^2), and the
// kPaper value for alpha = sqrt(2).
inline UnitCircleReport unit_circle_max() {
  detail::Timer timer;
  UnitCircleReport rep;
  const double alphas[] = {0.5, 1.0, std::numbers::sqrt2, 3.0};
  bool ok = true;
  double worst = 0.0;
  for (double alpha : alphas) {
    const Lemma37Result res = lemma37_max(alpha);
    const double gap = std::abs(res.numeric_max - std::sqrt(1.0 + alpha * alpha));
    worst = std::max(worst, gap);
    ok = ok && gap <= 1e-6;
    rep.rows.push_back(res);
  }
  const Lemma37Result& r2 = rep.rows[2];
  const bool erratum = r2.numeric_max > r2.paper_value;
  ok = ok && erratum;
  rep.outcome = {"unit-circle-max",
                 "max x + a y on x^2 + y^2 = 1 equals sqrt(1 + a^2); paper_value is low",
                 ok,
                 "worst |numeric - sqrt(1+a^2)| " + detail::sci(worst) +
                     "; a = sqrt(2): numeric_max " + io::format_real(r2.numeric_max) +
                     " > paper_value " + io::format_real(r2.paper_value) + " is " +
                     (erratum ? "true" : "false"),
                 timer.seconds()};
  return rep;
}

}  // namespace battery
}  // namespace lowrank

#endif  // LOWRANK_BATTERIES_HPP_
