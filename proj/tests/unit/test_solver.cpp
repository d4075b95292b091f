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

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "lowrank/solver.hpp"
#include "lowrank/random.hpp"

namespace lowrank {
namespace {

// min sum x_i s.t. sum (x_i - s_i)^2 <= eps^2, x_i >= 0: x_i = max(s_i - tau, 0)
// with tau found by bisection on sum min(s_i, tau)^2 = eps^2.
std::vector<double> diagonal_kkt(const std::vector<double>& s, double eps) {
  double lo = 0.0, hi = *std::max_element(s.begin(), s.end());
  for (int it = 0; it < 200; ++it) {
    const double tau = 0.5 * (lo + hi);
    double acc = 0.0;
    for (double x : s) acc += std::min(x, tau) * std::min(x, tau);
    (acc < eps * eps ? lo : hi) = tau;
  }
  std::vector<double> out;
  for (double x : s) out.push_back(std::max(x - 0.5 * (lo + hi), 0.0));
  return out;
}

TEST(Lagrangian, LargeLambdaGivesZero) {
  const MeasOp a = gaussian_op(4, 4, 12, 61);
  Stream rng(61, 1);
  const CVec b = gaussian_vec(12, rng);
  const double lam0 = spectral_norm(adjoint(a, b));
  EXPECT_EQ(frobenius_norm(solve_lagrangian(a, b, lam0 * 1.01)), 0.0);
}

TEST(Lagrangian, IdentityIsSvt) {
  Stream rng(62, 0);
  const Mat x = gaussian_mat(4, 3, rng);
  const Mat got = solve_lagrangian(MeasOp::identity(4, 3), vec(x), 0.8);
  EXPECT_LE(frobenius_norm(got - svt(x, 0.8)), 1e-10);
}

TEST(Lagrangian, ZeroDataAndBadLambda) {
  const MeasOp a = gaussian_op(3, 3, 8, 63);
  EXPECT_EQ(frobenius_norm(solve_lagrangian(a, CVec(8), 0.1)), 0.0);
  EXPECT_THROW(solve_lagrangian(a, CVec(8), 0.0), RangeError);
}

TEST(Lagrangian, FirstOrderConditionAtSolution) {
  const MeasOp a = gaussian_op(4, 4, 14, 64);
  Stream rng(64, 1);
  const CVec b = apply(a, random_low_rank(4, 4, 1, rng));
  const double lambda = 0.05 * spectral_norm(adjoint(a, b));
  SolveOptions o;
  o.max_inner = 20000;
  o.step_rtol = 1e-12;
  const Mat x = solve_lagrangian(a, b, lambda, o);
  // -A^*(Ax - b) / lambda must lie in the subdifferential of ||.||_* at x.
  Mat g = adjoint(a, vsub(apply(a, x), b));
  g *= Complex(-1.0 / lambda, 0.0);
  const Svd s = svd(x);
  const std::size_t k = numerical_rank(s);
  ASSERT_GE(k, 1u);
  const Mat u = s.left.leading_cols(k), v = s.right.leading_cols(k);
  const Mat tangent = u * (u.adjoint() * g) + (g * v) * v.adjoint() - u * (u.adjoint() * g * v) * v.adjoint();
  EXPECT_LE(frobenius_norm(tangent - u * v.adjoint()), 1e-5);
  EXPECT_LE(spectral_norm(g - tangent), 1.0 + 1e-5);
}

TEST(Ellipsoid, SmallDataGivesZero) {
  const MeasOp a = gaussian_op(3, 3, 8, 65);
  Stream rng(65, 1);
  CVec b = gaussian_vec(8, rng);
  const double nb = vnorm(b);
  const SolveResult res = solve_ellipsoid(a, b, nb * 1.5);
  EXPECT_EQ(res.nuclear, 0.0);
  EXPECT_EQ(frobenius_norm(res.x_star), 0.0);
  EXPECT_TRUE(res.converged);
}

TEST(Ellipsoid, IdentityDiagonalMatchesKktOracle) {
  const std::vector<double> s = {3.0, 1.0};
  const SolveResult res = solve_ellipsoid(MeasOp::identity(2, 2), vec(Mat::diag({3.0, 1.0})), 1.0);
  const std::vector<double> want = diagonal_kkt(s, 1.0);
  EXPECT_LE(frobenius_norm(res.x_star - Mat::diag({want[0], want[1]})), 1e-4);
  EXPECT_LE(res.residual, 1.0);
  EXPECT_GE(res.residual, 1.0 - 1e-4);
}

TEST(Ellipsoid, IdentityRandomSpectraMatchKktOracle) {
  for (std::uint64_t c = 0; c < 10; ++c) {
    Stream rng(66, c);
    std::vector<double> s(4);
    for (double& x : s) x = 0.2 + 3.0 * rng.uniform();
    std::sort(s.rbegin(), s.rend());
    const double eps = 0.1 + rng.uniform();
    const Mat u = random_unitary(4, rng), v = random_unitary(4, rng);
    const Mat x0 = u * Mat::diag({s[0], s[1], s[2], s[3]}) * v.adjoint();
    const SolveResult res = solve_ellipsoid(MeasOp::identity(4, 4), vec(x0), eps);
    const auto w = diagonal_kkt(s, eps);
    const Mat want = u * Mat::diag({w[0], w[1], w[2], w[3]}) * v.adjoint();
    EXPECT_LE(frobenius_norm(res.x_star - want), 1e-4);
  }
}

TEST(Ellipsoid, NoiselessGaussianRecovery) {
  const MeasOp a = gaussian_op(10, 10, 120, 67);
  Stream rng(67, 1);
  Mat x = random_low_rank(10, 10, 1, rng);
  x *= Complex(1.0 / frobenius_norm(x), 0.0);
  const SolveResult res = solve_ellipsoid(a, apply(a, x), 0.0);
  EXPECT_TRUE(res.converged);
  EXPECT_LE(frobenius_norm(res.x_star - x), 1e-3);
}

TEST(Ellipsoid, NoisyRecoveryProperties) {
  for (std::uint64_t c = 0; c < 5; ++c) {
    const MeasOp a = gaussian_op(6, 6, 40, 68 + c);
    Stream rng(68, c);
    Mat x = random_low_rank(6, 6, 1, rng);
    x *= Complex(1.0 / frobenius_norm(x), 0.0);
    const double eps = 0.05;
    const Observation obs = observe(a, x, eps, c);
    const SolveOptions o;
    const SolveResult res = solve_ellipsoid(a, obs.b, eps, o);
    ASSERT_TRUE(res.converged);
    EXPECT_LE(res.residual, eps * (1.0 + o.feas_rtol));
    EXPECT_LE(res.nuclear, nuclear_norm(x) * (1.0 + 1e-6));
    EXPECT_LE(vnorm(apply(a, res.x_star - x)), 2.0 * eps * (1.0 + 1e-6));
    EXPECT_LE(res.subopt_witness, 1e-3);
  }
}

TEST(Ellipsoid, BadEpsilonRejected) {
  const MeasOp a = MeasOp::identity(2, 2);
  EXPECT_THROW(solve_ellipsoid(a, CVec(4), -1.0), RangeError);
  EXPECT_THROW(solve_ellipsoid(a, CVec(3), 1.0), ShapeError);
}

TEST(Affine, IdentityAndZero) {
  Stream rng(69, 0);
  const Mat x = gaussian_mat(3, 3, rng);
  const SolveResult res = solve_affine(MeasOp::identity(3, 3), vec(x));
  EXPECT_TRUE(res.converged);
  EXPECT_LE(vnorm(vsub(apply(MeasOp::identity(3, 3), res.x_star), vec(x))),
            std::max(1e-4 * frobenius_norm(x), 1e-10));
  const SolveResult zero = solve_affine(MeasOp::identity(3, 3), CVec(9));
  EXPECT_EQ(frobenius_norm(zero.x_star), 0.0);
}

TEST(Affine, IdentityTightTolerance) {
  Stream rng(69, 1);
  const Mat x = gaussian_mat(3, 3, rng);
  SolveOptions o;
  o.feas_rtol = 1e-10;
  o.max_outer = 200;
  const SolveResult res = solve_affine(MeasOp::identity(3, 3), vec(x), o);
  EXPECT_LE(frobenius_norm(res.x_star - x), 1e-8);
}

TEST(Affine, OutOfRangeDataIsInfeasible) {
  // Two identical rows with different right-hand sides.
  Mat op(2, 4);
  op(0, 0) = 1.0;
  op(1, 0) = 1.0;
  const CVec b = {Complex(1.0, 0.0), Complex(-1.0, 0.0)};
  SolveOptions o;
  o.max_outer = 20;
  o.max_inner = 200;
  try {
    solve_affine(MeasOp(2, 2, op), b, o);
    FAIL() << "expected InfeasibleError";
  } catch (const InfeasibleError& e) {
    EXPECT_NEAR(e.min_residual(), std::sqrt(2.0), 1e-6);
  }
}

TEST(Optimality, ZeroInsideBall) {
  const MeasOp a = gaussian_op(3, 3, 6, 70);
  Stream rng(70, 1);
  const CVec b = gaussian_vec(6, rng);
  const OptimalityReport rep = optimality_report(a, b, vnorm(b) * 2.0, Mat(3, 3));
  EXPECT_EQ(rep.feasibility_gap, 0.0);
  EXPECT_EQ(rep.subgrad_residual, 0.0);
}

TEST(Optimality, TruthIsFeasibleForNoiselessData) {
  const MeasOp a = gaussian_op(4, 4, 12, 71);
  Stream rng(71, 1);
  const Mat x = random_low_rank(4, 4, 1, rng);
  EXPECT_LE(optimality_report(a, apply(a, x), 0.0, x).feasibility_gap, 1e-12);
}

TEST(Optimality, ReportsInfeasibility) {
  const CVec b = vec(Mat::diag({3.0, 1.0}));
  const OptimalityReport rep = optimality_report(MeasOp::identity(2, 2), b, 0.5, Mat(2, 2));
  EXPECT_NEAR(rep.feasibility_gap, std::sqrt(10.0) - 0.5, 1e-12);
}

TEST(Bisection, ResidualNondecreasingInLambda) {
  const MeasOp a = gaussian_op(5, 5, 20, 72);
  Stream rng(72, 1);
  const CVec b = apply(a, random_low_rank(5, 5, 2, rng));
  const double lam0 = spectral_norm(adjoint(a, b));
  SolveOptions o;
  o.max_inner = 20000;
  o.step_rtol = 1e-12;
  double prev = -1.0;
  for (double f : {0.01, 0.03, 0.1, 0.3, 0.6, 0.9}) {
    const double res = vnorm(vsub(apply(a, solve_lagrangian(a, b, f * lam0, o)), b));
    EXPECT_GE(res, prev - 1e-6);
    prev = res;
  }
}

TEST(Fista, ObjectiveNonincreasingAlongIterations) {
  const MeasOp a = gaussian_op(5, 4, 18, 73);
  Stream rng(73, 1);
  const CVec b = gaussian_vec(18, rng);
  const double lambda = 0.1 * spectral_norm(adjoint(a, b));
  const double lip = detail::lipschitz(a);
  SolveOptions o;
  o.step_rtol = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= 60; ++k) {
    o.max_inner = k;
    const double obj = detail::fista(a, b, lambda, lip, o, Mat(5, 4)).objective;
    EXPECT_LE(obj, prev * (1.0 + 1e-12));
    prev = obj;
  }
}

}  // namespace
}  // namespace lowrank
