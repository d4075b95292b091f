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

// Nuclear norm minimization with an ellipsoidal constraint,
//
//   minimize ||X||_*  subject to  ||AX - b||_2 <= epsilon,
//
// solved through the penalized surrogate lambda ||X||_* + 1/2 ||AX - b||^2
// (accelerated proximal gradient, prox = singular value thresholding) and a
// bisection on lambda until the residual lands on the constraint boundary.
// epsilon = 0 is the affine case AX = b, handled by geometric continuation.

#ifndef LOWRANK_SOLVER_HPP_
#define LOWRANK_SOLVER_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "lowrank/error.hpp"
#include "lowrank/mat.hpp"
#include "lowrank/matops.hpp"
#include "lowrank/measurement.hpp"

namespace lowrank {

struct SolveOptions {
  std::size_t max_outer = 100;   // lambda bisection / continuation steps
  std::size_t max_inner = 5000;  // proximal iterations per lambda
  double feas_rtol = 1e-4;
  double step_rtol = 1e-8;
  bool continuation = true;
};

struct SolveResult {
  Mat x_star;
  double residual = 0.0;  // ||A x_star - b||_2
  double nuclear = 0.0;   // ||x_star||_*
  std::size_t iterations = 0;
  double lambda_final = 0.0;
  bool converged = false;
  double subopt_witness = 0.0;  // subgrad_residual of optimality_report
};

struct OptimalityReport {
  double feasibility_gap = 0.0;
  double subgrad_residual = 0.0;
  double multiplier = 0.0;  // mu for epsilon > 0, ||y|| for the affine case
};

namespace detail {

inline double residual_norm(std::span<const Complex> ax, std::span<const Complex> b) {
  return vnorm(vsub(ax, b));
}

// L = smax(op_matrix)^2, the Lipschitz constant of X -> A^*(AX - b).
inline double lipschitz(const MeasOp& a) {
  const double s = spectral_norm(a.op_matrix());
  return s * s;
}

struct ProxRun {
  Mat x;
  std::size_t iterations = 0;
  bool converged = false;
  double objective = 0.0;
  std::size_t restarts = 0;
};

// FISTA on lambda ||X||_* + 1/2 ||AX - b||^2 from x0, step 1/L. On an
// objective increase the momentum is reset and a plain proximal step is taken
// from the current iterate instead, so the objective never increases.
inline ProxRun fista(const MeasOp& a, std::span<const Complex> b, double lambda, double lip,
                     const SolveOptions& opts, Mat x0) {
  ProxRun run;
  Mat x = std::move(x0);
  CVec ax = apply(a, x);
  const double step = 1.0 / lip;
  auto objective = [&](double nuclear, const CVec& av) {
    const double res = residual_norm(av, b);
    return lambda * nuclear + 0.5 * res * res;
  };
  double fx = objective(frobenius_norm(x) == 0.0 ? 0.0 : nuclear_norm(x), ax);

  Mat y = x;
  CVec ay = ax;
  double t = 1.0;
  auto prox_from = [&](const Mat& base, const CVec& abase) {
    Mat g = adjoint(a, vsub(abase, b));
    Mat arg = base;
    arg.axpy(-step, g);
    return svt_full(arg, lambda * step);
  };

  for (std::size_t it = 0; it < opts.max_inner; ++it) {
    Thresholded xn = prox_from(y, ay);
    CVec axn = apply(a, xn.value);
    double fn = objective(xn.nuclear, axn);
    if (fn > fx) {
      ++run.restarts;
      t = 1.0;
      xn = prox_from(x, ax);
      axn = apply(a, xn.value);
      fn = objective(xn.nuclear, axn);
    }
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / tn;
    Mat dx = xn.value - x;
    y = xn.value;
    y.axpy(beta, dx);
    ay = axn;
    for (std::size_t k = 0; k < ay.size(); ++k) ay[k] += beta * (axn[k] - ax[k]);

    const double change = frobenius_norm(dx);
    x = std::move(xn.value);
    ax = std::move(axn);
    fx = fn;
    t = tn;
    run.iterations = it + 1;
    const double scale = std::max(frobenius_norm(x), std::numeric_limits<double>::min());
    if (change <= opts.step_rtol * scale) {
      run.converged = true;
      break;
    }
  }
  run.x = std::move(x);
  run.objective = fx;
  return run;
}

inline double lambda_max(const MeasOp& a, std::span<const Complex> b) {
  return spectral_norm(adjoint(a, b));
}

// X = U S V^H restricted to its numerical rank.
struct RankSubspaces {
  Mat u, v;
  std::size_t rank = 0;
};

inline RankSubspaces rank_subspaces(const Mat& x) {
  const Svd s = svd(x);
  RankSubspaces out;
  out.rank = numerical_rank(s);
  out.u = s.left.leading_cols(out.rank);
  out.v = s.right.leading_cols(out.rank);
  return out;
}

// (I - U U^H) Z (I - V V^H)
inline Mat normal_part(const RankSubspaces& t, const Mat& z) {
  if (t.rank == 0) return z;
  Mat w = z - t.u * (t.u.adjoint() * z);
  return w - (w * t.v) * t.v.adjoint();
}

// Distance from Z to the subdifferential {U V^H + W : W in the normal
// space, ||W||_2 <= 1} of the nuclear norm at X.
inline double subdifferential_distance(const RankSubspaces& t, const Mat& z) {
  const Mat normal = normal_part(t, z);
  double acc = 0.0;
  if (t.rank > 0) {
    Mat tangent_gap = z - normal;
    tangent_gap -= t.u * t.v.adjoint();
    const double g = frobenius_norm(tangent_gap);
    acc += g * g;
  }
  if (frobenius_norm(normal) > 0.0) {
    for (double s : singular_values(normal)) {
      const double over = std::max(s - 1.0, 0.0);
      acc += over * over;
    }
  }
  return std::sqrt(acc);
}

}  // namespace detail

// KKT diagnostics for problem P at X. For epsilon > 0 the multiplier mu >= 0
// on the residual direction is fitted by least squares on the tangent part;
// for epsilon = 0 a general multiplier y with -A^* y in the subdifferential
// is fitted the same way.
inline OptimalityReport optimality_report(const MeasOp& a, std::span<const Complex> b,
                                          double epsilon, const Mat& x) {
  if (b.size() != a.p()) throw ShapeError("optimality_report: b length mismatch");
  OptimalityReport rep;
  const CVec r = vsub(apply(a, x), b);
  const double nr = vnorm(r);
  rep.feasibility_gap = std::max(0.0, nr - epsilon);

  const detail::RankSubspaces t = detail::rank_subspaces(x);
  if (t.rank == 0) {
    // The subdifferential at 0 is the whole spectral unit ball; mu = 0 fits.
    return rep;
  }
  const Mat uvh = t.u * t.v.adjoint();

  if (epsilon > 0.0) {
    if (nr == 0.0) {
      rep.subgrad_residual = detail::subdifferential_distance(t, Mat(x.rows(), x.cols()));
      return rep;
    }
    Mat g = adjoint(a, r);
    g *= Complex(-1.0 / nr, 0.0);  // direction of -A^*(AX - b)
    const Mat g_tan = g - detail::normal_part(t, g);
    const double den = std::pow(frobenius_norm(g_tan), 2);
    double mu = den > 0.0 ? inner(uvh, g_tan).real() / den : 0.0;
    mu = std::max(mu, 0.0);
    rep.multiplier = mu;
    rep.subgrad_residual = detail::subdifferential_distance(t, g * mu);
    return rep;
  }

  // Affine case: least squares for P_T(-A^* y) = U V^H over y in C^p.
  const std::size_t mn = x.rows() * x.cols();
  Mat lin(mn, a.p());
  CVec e(a.p(), Complex(0.0, 0.0));
  for (std::size_t k = 0; k < a.p(); ++k) {
    e[k] = -1.0;
    Mat col = adjoint(a, e);
    col -= detail::normal_part(t, col);
    e[k] = 0.0;
    const CVec vcol = vec(col);
    for (std::size_t i = 0; i < mn; ++i) lin(i, k) = vcol[i];
  }
  const Svd ls = svd(lin);
  const CVec rhs = vec(uvh);
  const double cut = 1e-12 * ls.sigmas.front();
  CVec y(a.p(), Complex(0.0, 0.0));
  for (std::size_t j = 0; j < ls.k(); ++j) {
    if (ls.sigmas[j] <= cut) break;
    const Complex c = vdot(ls.left.col(j), rhs) / ls.sigmas[j];
    for (std::size_t k = 0; k < a.p(); ++k) y[k] += c * ls.right(k, j);
  }
  rep.multiplier = vnorm(y);
  Mat z = adjoint(a, y);
  z *= Complex(-1.0, 0.0);
  rep.subgrad_residual = detail::subdifferential_distance(t, z);
  return rep;
}

// Approximate minimizer of lambda ||X||_* + 1/2 ||AX - b||^2. With
// opts.continuation the solve walks lambda down from ||A^* b||_2 by halving,
// warm-starting each stage.
inline Mat solve_lagrangian(const MeasOp& a, std::span<const Complex> b, double lambda,
                            const SolveOptions& opts = {}) {
  if (!(lambda > 0.0)) throw RangeError("solve_lagrangian: lambda must be positive");
  if (b.size() != a.p()) throw ShapeError("solve_lagrangian: b length mismatch");
  const double lip = detail::lipschitz(a);
  Mat x(a.m(), a.n());
  if (opts.continuation) {
    const double lam0 = detail::lambda_max(a, b);
    for (double stage = 0.5 * lam0; stage > lambda; stage *= 0.5) {
      x = detail::fista(a, b, stage, lip, opts, std::move(x)).x;
    }
  }
  return detail::fista(a, b, lambda, lip, opts, std::move(x)).x;
}

namespace detail {

inline SolveResult finish(const MeasOp& a, std::span<const Complex> b, double epsilon,
                          Mat x, double lambda, std::size_t iterations, bool converged) {
  SolveResult out;
  out.residual = residual_norm(apply(a, x), b);
  out.nuclear = frobenius_norm(x) == 0.0 ? 0.0 : nuclear_norm(x);
  out.iterations = iterations;
  out.lambda_final = lambda;
  out.converged = converged;
  out.subopt_witness = optimality_report(a, b, epsilon, x).subgrad_residual;
  out.x_star = std::move(x);
  return out;
}

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

// X + A^+ (b - AX): the nearest point of the affine set, kept only when it
// lowers the residual. Moves X by about the residual, so ||X||_* barely
// changes while AX = b holds to rounding.
inline Mat polish_feasibility(const MeasOp& a, std::span<const Complex> b, Mat x) {
  using EMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  using EVec = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
  const Mat& op = a.op_matrix();
  EMat e(op.rows(), op.cols());
  for (std::size_t i = 0; i < op.rows(); ++i) {
    for (std::size_t j = 0; j < op.cols(); ++j) e(i, j) = op(i, j);
  }
  const CVec r = vsub(b, apply(a, x));
  const EVec rv = Eigen::Map<const EVec>(r.data(), static_cast<Eigen::Index>(r.size()));
  const EVec d = e.completeOrthogonalDecomposition().solve(rv);
  if (!d.allFinite()) return x;
  Mat y = x + unvec(std::span<const Complex>(d.data(), static_cast<std::size_t>(d.size())),
                    a.m(), a.n());
  return residual_norm(apply(a, y), b) < vnorm(r) ? y : x;
}

}  // namespace detail

// minimize ||X||_* s.t. AX = b, via lambda_k = lambda_0 / 2^k until the
// residual drops below max(feas_rtol ||b||, 1e-10).
inline SolveResult solve_affine(const MeasOp& a, std::span<const Complex> b,
                                const SolveOptions& opts = {}) {
  if (b.size() != a.p()) throw ShapeError("solve_affine: b length mismatch");
  const double nb = vnorm(b);
  if (nb == 0.0) return detail::finish(a, b, 0.0, Mat(a.m(), a.n()), 0.0, 0, true);

  const double tol = std::max(opts.feas_rtol * nb, 1e-10);
  const double lip = detail::lipschitz(a);
  const double lam0 = detail::lambda_max(a, b);
  Mat x(a.m(), a.n());
  std::size_t iterations = 0;
  double lambda = lam0;
  double best = nb;
  for (std::size_t k = 1; k <= opts.max_outer; ++k) {
    lambda = lam0 * std::pow(0.5, static_cast<double>(k));
    detail::ProxRun run = detail::fista(a, b, lambda, lip, opts, std::move(x));
    iterations += run.iterations;
    x = std::move(run.x);
    const double res = detail::residual_norm(apply(a, x), b);
    best = std::min(best, res);
    if (res < tol) {
      x = detail::polish_feasibility(a, b, std::move(x));
      return detail::finish(a, b, 0.0, std::move(x), lambda, iterations, true);
    }
  }
  x = detail::polish_feasibility(a, b, std::move(x));
  const double polished = detail::residual_norm(apply(a, x), b);
  if (polished < tol) return detail::finish(a, b, 0.0, std::move(x), lambda, iterations, true);
  best = std::min(best, polished);
  throw InfeasibleError("solve_affine: residual stalled at " + detail::sci(best) +
                            " above tolerance " + detail::sci(tol) +
                            " (b outside the range of A, or budget exhausted)",
                        best);
}

// Problem P. Bisection on lambda in [1e-8 lambda_0, lambda_0] (geometric
// midpoints) until the residual lies in [epsilon (1 - feas_rtol), epsilon];
// only the feasible side of the bracket is ever returned.
inline SolveResult solve_ellipsoid(const MeasOp& a, std::span<const Complex> b,
                                   double epsilon, const SolveOptions& opts = {}) {
  if (!(epsilon >= 0.0)) throw RangeError("solve_ellipsoid: epsilon must be nonnegative");
  if (b.size() != a.p()) throw ShapeError("solve_ellipsoid: b length mismatch");
  if (epsilon == 0.0) return solve_affine(a, b, opts);

  const double nb = vnorm(b);
  const double lam0 = detail::lambda_max(a, b);
  if (nb <= epsilon) {
    return detail::finish(a, b, epsilon, Mat(a.m(), a.n()), lam0, 0, true);
  }

  const double lip = detail::lipschitz(a);
  const double floor = epsilon * (1.0 - opts.feas_rtol);
  double lo = 1e-8 * lam0;
  double hi = lam0;
  Mat warm(a.m(), a.n());
  Mat feasible;
  double feasible_lambda = 0.0;
  bool have_feasible = false;
  double min_residual = nb;
  std::size_t iterations = 0;

  for (std::size_t step = 0; step < opts.max_outer; ++step) {
    const double mid = std::sqrt(lo * hi);
    detail::ProxRun run = detail::fista(a, b, mid, lip, opts, warm);
    iterations += run.iterations;
    const double res = detail::residual_norm(apply(a, run.x), b);
    min_residual = std::min(min_residual, res);
    warm = run.x;
    if (res > epsilon) {
      hi = mid;
    } else {
      feasible = std::move(run.x);
      feasible_lambda = mid;
      have_feasible = true;
      if (res >= floor) {
        return detail::finish(a, b, epsilon, std::move(feasible), mid, iterations, true);
      }
      lo = mid;
    }
    if (hi / lo - 1.0 < 1e-14) break;
  }
  if (have_feasible) {
    return detail::finish(a, b, epsilon, std::move(feasible), feasible_lambda, iterations,
                          false);
  }
  throw InfeasibleError("solve_ellipsoid: residual never reached epsilon = " +
                            detail::sci(epsilon) + " (min " +
                            detail::sci(min_residual) + ")",
                        min_residual);
}

}  // namespace lowrank

#endif  // LOWRANK_SOLVER_HPP_
