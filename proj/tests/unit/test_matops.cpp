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

#include "lowrank/matops.hpp"
#include "lowrank/random.hpp"
#include "oracle.hpp"

namespace lowrank {
namespace {

double orth_defect(const Mat& q) {
  return frobenius_norm(q.adjoint() * q - Mat::identity(q.cols()));
}

TEST(Svd, DiagonalExample) {
  const Svd s = svd(Mat::diag({3.0, 4.0}));
  ASSERT_EQ(s.k(), 2u);
  EXPECT_NEAR(s.sigmas[0], 4.0, 1e-14);
  EXPECT_NEAR(s.sigmas[1], 3.0, 1e-14);
}

TEST(Svd, ZeroMatrix) {
  const Svd s = svd(Mat(3, 2));
  EXPECT_EQ(s.sigmas, (std::vector<double>{0.0, 0.0}));
  EXPECT_LE(orth_defect(s.left), 1e-10);
  EXPECT_LE(orth_defect(s.right), 1e-10);
}

TEST(Svd, RandomReconstructionAndOrthonormality) {
  for (std::uint64_t c = 0; c < 40; ++c) {
    Stream rng(11, c);
    const std::size_t m = 1 + c % 7, n = 1 + (c * 3) % 6;
    const Mat x = gaussian_mat(m, n, rng);
    const Svd s = svd(x);
    ASSERT_EQ(s.k(), std::min(m, n));
    EXPECT_LE(frobenius_norm(reconstruct(s) - x) / frobenius_norm(x), 1e-10);
    EXPECT_LE(orth_defect(s.left), 1e-10);
    EXPECT_LE(orth_defect(s.right), 1e-10);
    for (std::size_t j = 1; j < s.k(); ++j) EXPECT_GE(s.sigmas[j - 1], s.sigmas[j]);
  }
}

TEST(Svd, FiveByFourReconstruction) {
  Stream rng(5, 4);
  const Mat x = gaussian_mat(5, 4, rng);
  EXPECT_LE(frobenius_norm(reconstruct(svd(x)) - x) / frobenius_norm(x), 1e-10);
}

TEST(Svd, SingularValuesMatchEigenOracle) {
  for (std::uint64_t c = 0; c < 20; ++c) {
    Stream rng(12, c);
    const Mat x = gaussian_mat(2 + c % 9, 2 + (c * 5) % 7, rng);
    const auto got = singular_values(x);
    const auto want = oracle::singular_values(x);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t j = 0; j < got.size(); ++j) EXPECT_NEAR(got[j], want[j], 1e-12 * want[0]);
  }
}

TEST(Svd, RankDeficientInputStillOrthonormal) {
  Stream rng(13, 0);
  const Mat x = random_low_rank(8, 6, 2, rng);
  const Svd s = svd(x);
  EXPECT_EQ(numerical_rank(s), 2u);
  EXPECT_LE(orth_defect(s.left), 1e-10);
  EXPECT_LE(orth_defect(s.right), 1e-10);
  EXPECT_LE(frobenius_norm(reconstruct(s) - x) / frobenius_norm(x), 1e-10);
}

TEST(Svd, PhaseConventionIsDeterministic) {
  Stream rng(14, 0);
  const Mat x = gaussian_mat(6, 4, rng);
  const Svd a = svd(x);
  const Svd b = svd(x);
  EXPECT_EQ(a.left, b.left);
  EXPECT_EQ(a.right, b.right);
  for (std::size_t j = 0; j < a.k(); ++j) {
    std::size_t arg = 0;
    for (std::size_t i = 1; i < a.left.rows(); ++i) {
      if (std::abs(a.left(i, j)) > std::abs(a.left(arg, j))) arg = i;
    }
    EXPECT_GE(a.left(arg, j).real(), 0.0);
    EXPECT_NEAR(a.left(arg, j).imag(), 0.0, 1e-15);
  }
}

TEST(Svd, NonFiniteInputRejected) {
  Mat x(2, 2);
  x(0, 0) = Complex(std::numeric_limits<double>::infinity(), 0.0);
  EXPECT_THROW(svd(x), RangeError);
}

TEST(Norms, DiagonalExamples) {
  const Mat x = Mat::diag({3.0, 4.0});
  EXPECT_NEAR(norm(x, NormKind::kFrobenius), 5.0, 1e-14);
  EXPECT_NEAR(norm(x, NormKind::kNuclear), 7.0, 1e-14);
  EXPECT_NEAR(norm(x, NormKind::kSpectral), 4.0, 1e-14);
}

TEST(Norms, UnitaryInvariance) {
  for (std::uint64_t c = 0; c < 20; ++c) {
    Stream rng(15, c);
    const Mat x = gaussian_mat(5, 3, rng);
    const Mat u = random_unitary(5, rng);
    const Mat v = random_unitary(3, rng);
    const Mat y = u * x * v.adjoint();
    for (NormKind k : {NormKind::kFrobenius, NormKind::kNuclear, NormKind::kSpectral}) {
      EXPECT_NEAR(norm(y, k), norm(x, k), 1e-9 * norm(x, k));
    }
  }
}

TEST(Norms, SandwichBetweenFrobeniusAndRootRank) {
  for (std::uint64_t c = 0; c < 200; ++c) {
    Stream rng(16, c);
    const std::size_t m = 1 + c % 12, n = 1 + (c / 12) % 9;
    const std::size_t r = 1 + c % std::min(m, n);
    const Mat x = random_low_rank(m, n, r, rng);
    const double f = frobenius_norm(x), nuc = nuclear_norm(x);
    const double rank = static_cast<double>(numerical_rank(x));
    EXPECT_LE(f, nuc * (1.0 + 1e-9));
    EXPECT_LE(nuc, std::sqrt(rank) * f * (1.0 + 1e-9));
  }
}

TEST(Norms, VariationalPrinciple) {
  for (std::uint64_t c = 0; c < 50; ++c) {
    Stream rng(17, c);
    const Mat x = gaussian_mat(4, 6, rng);
    const Mat u = random_unitary(4, rng);
    const Mat v = random_unitary(6, rng).leading_cols(4);
    const Mat p = u.adjoint() * x * v;
    double tr = 0.0;
    for (std::size_t j = 0; j < 4; ++j) tr += p(j, j).real();
    EXPECT_LE(tr, nuclear_norm(x) * (1.0 + 1e-9));
  }
}

TEST(Norms, NuclearAdditivityOnOrthogonalPairs) {
  for (std::uint64_t c = 0; c < 50; ++c) {
    Stream rng(18, c);
    const Mat u = random_unitary(6, rng);
    const Mat v = random_unitary(5, rng);
    const Mat x = Mat::outer(u.col(0), v.col(0)) * 2.0 + Mat::outer(u.col(1), v.col(1));
    const Mat y = Mat::outer(u.col(2), v.col(2)) * 0.5 + Mat::outer(u.col(3), v.col(3)) * 3.0;
    ASSERT_LE(frobenius_norm(x * y.adjoint()), 1e-12);
    ASSERT_LE(frobenius_norm(x.adjoint() * y), 1e-12);
    const double nx = nuclear_norm(x), ny = nuclear_norm(y);
    EXPECT_LE(std::abs(nuclear_norm(x + y) - nx - ny), 1e-9 * (nx + ny));
  }
}

TEST(Inner, Examples) {
  EXPECT_EQ(inner(Mat::identity(2), Mat::identity(2)), Complex(2.0, 0.0));
  Mat e12(2, 2), e21(2, 2);
  e12(0, 1) = 1.0;
  e21(1, 0) = 1.0;
  EXPECT_EQ(inner(e12, e21), Complex(0.0, 0.0));
  Stream rng(19, 0);
  const Mat x = gaussian_mat(3, 3, rng);
  const Complex xx = inner(x, x);
  EXPECT_NEAR(xx.imag(), 0.0, 1e-14);
  EXPECT_NEAR(xx.real(), std::pow(frobenius_norm(x), 2), 1e-12);
  EXPECT_THROW(inner(x, Mat(2, 3)), ShapeError);
}

TEST(Inner, IsTraceOfYHX) {
  Stream rng(20, 0);
  const Mat x = gaussian_mat(3, 4, rng), y = gaussian_mat(3, 4, rng);
  const Mat p = y.adjoint() * x;
  Complex tr(0.0, 0.0);
  for (std::size_t j = 0; j < 4; ++j) tr += p(j, j);
  EXPECT_NEAR(std::abs(inner(x, y) - tr), 0.0, 1e-12);
}

TEST(BestRankR, Examples) {
  EXPECT_LE(frobenius_norm(best_rank_r(Mat::diag({3.0, 1.0}), 1) - Mat::diag({3.0, 0.0})),
            1e-14);
  Stream rng(21, 0);
  const Mat x = random_low_rank(5, 4, 2, rng);
  EXPECT_LE(frobenius_norm(best_rank_r(x, 3) - x), 1e-10 * frobenius_norm(x));
  EXPECT_NEAR(tail_error(svd(Mat::diag({5.0, 4.0, 3.0})), 2), 3.0, 1e-14);
  EXPECT_THROW(best_rank_r(x, 0), RangeError);
  EXPECT_THROW(best_rank_r(x, 5), RangeError);
}

TEST(BestRankR, TailErrorMatchesResidual) {
  Stream rng(22, 0);
  const Mat x = gaussian_mat(6, 5, rng);
  const Svd s = svd(x);
  for (std::size_t r = 1; r <= 5; ++r) {
    EXPECT_NEAR(frobenius_norm(x - best_rank_r(s, r)), tail_error(s, r), 1e-10);
  }
}

TEST(BestRankR, EckartYoungSpotCheck) {
  Stream rng(23, 0);
  const Mat x = gaussian_mat(6, 5, rng);
  const double best = tail_error(svd(x), 2);
  for (int c = 0; c < 100; ++c) {
    const Mat z = random_low_rank(6, 5, 2, rng);
    EXPECT_GE(frobenius_norm(x - z), best - 1e-9);
  }
}

TEST(Svt, Examples) {
  EXPECT_LE(frobenius_norm(svt(Mat::diag({3.0, 1.0}), 2.0) - Mat::diag({1.0, 0.0})), 1e-14);
  Stream rng(24, 0);
  const Mat x = gaussian_mat(4, 3, rng);
  EXPECT_EQ(svt(x, 0.0), x);
  EXPECT_EQ(frobenius_norm(svt(x, spectral_norm(x))), 0.0);
  EXPECT_THROW(svt(x, -1.0), RangeError);
}

TEST(Svt, DiagonalClosedForm) {
  const Mat x = Mat::diag({5.0, 2.5, 1.0, 0.25});
  const Mat got = svt(x, 1.5);
  const Mat want = Mat::diag({3.5, 1.0, 0.0, 0.0});
  EXPECT_LE(frobenius_norm(got - want), 1e-14);
}

TEST(Svt, IsProximalMapOfNuclearNorm) {
  // The prox minimizes tau ||Z||_* + 1/2 ||Z - X||_F^2; random perturbations
  // never do better.
  Stream rng(25, 0);
  const Mat x = gaussian_mat(5, 4, rng);
  const double tau = 0.7;
  auto obj = [&](const Mat& z) {
    return tau * nuclear_norm(z) + 0.5 * std::pow(frobenius_norm(z - x), 2);
  };
  const Mat p = svt(x, tau);
  const double best = obj(p);
  for (int c = 0; c < 100; ++c) {
    Mat z = p + gaussian_mat(5, 4, rng) * 1e-2;
    EXPECT_GE(obj(z), best - 1e-12);
  }
}

}  // namespace
}  // namespace lowrank
