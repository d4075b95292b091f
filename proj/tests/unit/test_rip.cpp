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

#include <gtest/gtest.h>

#include "lowrank/rip.hpp"
#include "oracle.hpp"

namespace lowrank {
namespace {

LocalSearchOptions quick_opts() {
  LocalSearchOptions o;
  o.restarts = 4;
  o.max_iters = 100;
  o.mc_samples = 200;
  return o;
}

TEST(DeltaFull, IdentityAndScaledIdentity) {
  EXPECT_NEAR(delta_full(MeasOp::identity(3, 3)).delta_hat, 0.0, 1e-12);
  EXPECT_NEAR(delta_full(MeasOp::identity(3, 3).scaled(2.0)).delta_hat, 3.0, 1e-12);
  EXPECT_NEAR(delta_full(MeasOp::identity(2, 3).scaled(0.5)).delta_hat, 0.75, 1e-12);
  EXPECT_TRUE(delta_full(MeasOp::identity(2, 2)).certified_upper);
}

TEST(DeltaFull, OrthonormalRowsBelowFullRankGiveOne) {
  // p < mn rows of a unitary: the Gram matrix is a rank-p projector.
  Stream rng(51, 0);
  const Mat u = random_unitary(9, rng);
  Mat rows(5, 9);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 9; ++j) rows(i, j) = u(i, j);
  }
  EXPECT_NEAR(delta_full(MeasOp(3, 3, rows)).delta_hat, 1.0, 1e-10);
}

TEST(DeltaFull, MatchesEigenOracle) {
  for (std::uint64_t c = 0; c < 10; ++c) {
    const MeasOp a = gaussian_op(3, 3, 9 + c * 3, 52 + c);
    const auto [lmin, lmax] = oracle::gram_extremes(a.op_matrix());
    EXPECT_NEAR(delta_full(a).delta_hat, std::max(lmax - 1.0, 1.0 - lmin), 1e-10);
  }
}

TEST(DeltaFull, CertifiesEveryLowRankMatrix) {
  const MeasOp a = gaussian_op(5, 4, 30, 53);
  const double d = delta_full(a).delta_hat;
  for (std::uint64_t c = 0; c < 100; ++c) {
    Stream rng(53, c);
    const Mat x = random_low_rank(5, 4, 1 + c % 3, rng);
    const double fx = std::pow(frobenius_norm(x), 2);
    const double ax = std::pow(vnorm(apply(a, x)), 2);
    EXPECT_LE(std::abs(ax - fx), d * fx * (1.0 + 1e-9));
  }
}

TEST(DeltaMc, LowerBoundsFull) {
  for (std::uint64_t c = 0; c < 10; ++c) {
    const MeasOp a = gaussian_op(4, 4, 30, 54 + c);
    const double full = delta_full(a).delta_hat;
    for (std::size_t r = 1; r <= 4; ++r) {
      const RipEstimate e = delta_mc(a, r, 100, c);
      EXPECT_FALSE(e.certified_upper);
      EXPECT_LE(e.delta_hat, full + 1e-12);
    }
  }
}

TEST(DeltaMc, MoreSamplesNeverDecrease) {
  const MeasOp a = gaussian_op(5, 5, 40, 55);
  double prev = 0.0;
  for (std::size_t n : {10u, 50u, 200u, 800u}) {
    const double d = delta_mc(a, 2, n, 7).delta_hat;
    EXPECT_GE(d, prev);
    prev = d;
  }
}

TEST(DeltaMc, Deterministic) {
  const MeasOp a = gaussian_op(4, 4, 20, 56);
  EXPECT_EQ(delta_mc(a, 2, 100, 3).delta_hat, delta_mc(a, 2, 100, 3).delta_hat);
}

TEST(DeltaLocal, IdentityIsIsometry) {
  EXPECT_NEAR(delta_local(MeasOp::identity(4, 4), 2, 0, quick_opts()).delta_hat, 0.0, 1e-10);
}

TEST(DeltaLocal, FullRankLevelMatchesFull) {
  for (std::uint64_t c = 0; c < 6; ++c) {
    const std::size_t m = 3, n = 2 + c % 2;
    const MeasOp a = gaussian_op(m, n, 4 * m * n, 57 + c);
    const RipEstimate e = delta_local(a, std::min(m, n), c, quick_opts());
    EXPECT_NEAR(e.delta_hat, delta_full(a).delta_hat, 1e-8);
  }
}

TEST(DeltaLocal, NeverBelowMonteCarloSeed) {
  for (std::uint64_t c = 0; c < 20; ++c) {
    const MeasOp a = gaussian_op(4, 3, 20, 58 + c);
    LocalSearchOptions o = quick_opts();
    o.restarts = 1;
    const double local = delta_local(a, 1, c, o).delta_hat;
    const double mc = delta_mc(a, 1, o.mc_samples, c).delta_hat;
    EXPECT_GE(local, mc - 1e-12);
    EXPECT_LE(local, delta_full(a).delta_hat + 1e-10);
  }
}

TEST(DeltaLocal, RankRangeChecked) {
  const MeasOp a = MeasOp::identity(3, 2);
  EXPECT_THROW(delta_local(a, 0, 0, quick_opts()), RangeError);
  EXPECT_THROW(delta_mc(a, 3, 10, 0), RangeError);
}

TEST(RopCheck, IdentityOnOrthogonalPair) {
  Mat x(3, 3), y(3, 3);
  x(0, 0) = 2.0;
  y(1, 1) = 3.0;
  const RopCheck rc = rop_check(MeasOp::identity(3, 3), x, y);
  EXPECT_NEAR(rc.lhs, 0.0, 1e-15);
  EXPECT_NEAR(rc.submatrix_norm, 0.0, 1e-15);
  EXPECT_NEAR(rc.gram_dev, 0.0, 1e-15);
}

TEST(RopCheck, ChainHoldsForGaussianOperators) {
  for (std::uint64_t c = 0; c < 30; ++c) {
    Stream rng(59, c);
    const Mat u = random_unitary(5, rng), v = random_unitary(4, rng);
    const Mat x = Mat::outer(u.col(0), v.col(0)) * 1.5 + Mat::outer(u.col(1), v.col(1));
    const Mat y = Mat::outer(u.col(2), v.col(2)) * 0.7;
    const MeasOp a = gaussian_op(5, 4, 25, c);
    const RopCheck rc = rop_check(a, x, y);
    EXPECT_LE(rc.lhs, rc.product_bound * (1.0 + 1e-9));
    EXPECT_LE(rc.submatrix_norm, rc.gram_dev * (1.0 + 1e-9));
    EXPECT_LE(rc.product_bound, rc.gram_bound * (1.0 + 1e-9));
  }
}

TEST(RopCheck, OverlappingFramesRejected) {
  const Mat x = Mat::diag({1.0, 0.0});
  EXPECT_THROW(rop_check(MeasOp::identity(2, 2), x, x), PreconditionError);
}

}  // namespace
}  // namespace lowrank
