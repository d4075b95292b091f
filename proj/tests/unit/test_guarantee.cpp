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

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "lowrank/guarantee.hpp"
#include "lowrank/solver.hpp"

namespace lowrank {
namespace {

const double kS2 = std::sqrt(2.0);
const double kS3 = std::sqrt(3.0);

TEST(Constants, PaperModeAtZero) {
  const GuaranteeConstants c = constants(0.0, BoundMode::kPaper);
  EXPECT_NEAR(c.k0, 4.0 * kS2 / kS3, 1e-12);
  EXPECT_NEAR(c.k0, 3.26599, 1e-5);
  EXPECT_NEAR(c.k1, 2.0 * (kS3 + 2.0 * kS2) / kS3, 1e-12);
  EXPECT_NEAR(c.k1, 5.26599, 1e-5);
  EXPECT_NEAR(c.gamma, 2.0 * kS2 / kS3, 1e-15);
}

TEST(Constants, PaperModeAtOneTenth) {
  const GuaranteeConstants c = constants(0.1, BoundMode::kPaper);
  EXPECT_NEAR(c.k0, 5.0837, 1e-4);
  EXPECT_NEAR(c.k1, 8.2549, 1e-4);
}

TEST(Constants, Thresholds) {
  EXPECT_NEAR(bound_threshold(BoundMode::kPaper), 0.302169, 5e-7);
  EXPECT_NEAR(bound_threshold(BoundMode::kCorrected), 0.289898, 5e-7);
  EXPECT_NEAR(bound_threshold(BoundMode::kCorrected), 1.0 / (1.0 + std::sqrt(6.0)), 1e-15);
  EXPECT_EQ(bound_gamma(BoundMode::kCorrected), kS3);
}

TEST(Constants, ConditionViolatedQuotesHypothesis) {
  try {
    constants(0.31, BoundMode::kPaper);
    FAIL() << "expected ConditionViolated";
  } catch (const ConditionViolated& e) {
    EXPECT_NE(std::string(e.what()).find("δ3r(A) < 1/(1 + 4/√3)"), std::string::npos);
  }
  EXPECT_THROW(constants(0.29, BoundMode::kCorrected), ConditionViolated);
  EXPECT_NO_THROW(constants(0.29, BoundMode::kPaper));
  EXPECT_THROW(constants(-0.01, BoundMode::kPaper), RangeError);
}

TEST(Constants, ValuesAtZeroMatchGamma) {
  for (BoundMode mode : {BoundMode::kPaper, BoundMode::kCorrected}) {
    const GuaranteeConstants c = constants(0.0, mode);
    EXPECT_NEAR(c.k0, 2.0 * c.gamma, 1e-12);
    EXPECT_NEAR(c.k1, 2.0 * (1.0 + c.gamma), 1e-12);
  }
}

TEST(Constants, StrictlyIncreasingAndDivergent) {
  for (BoundMode mode : {BoundMode::kPaper, BoundMode::kCorrected}) {
    const double th = bound_threshold(mode);
    double k0 = 0.0, k1 = 0.0;
    for (int i = 0; i < 100; ++i) {
      const GuaranteeConstants c = constants(th * i / 100.0, mode);
      EXPECT_GT(c.k0, k0);
      EXPECT_GT(c.k1, k1);
      k0 = c.k0;
      k1 = c.k1;
    }
    EXPECT_GT(constants(th * (1.0 - 1e-9), mode).k0, 1e6);
  }
}

TEST(Constants, PrintedFormulasMatchProofChain) {
  const double gamma = 2.0 * kS2 / kS3;
  for (int i = 0; i < 50; ++i) {
    const double d = bound_threshold(BoundMode::kPaper) * i / 50.0;
    const GuaranteeConstants c = constants(d, BoundMode::kPaper);
    const double rho = kS2 * d / (1.0 - d);
    const double alpha = 2.0 * std::sqrt(1.0 + d) / (1.0 - d);
    EXPECT_NEAR(c.k0, 2.0 * gamma * (1.0 + rho) / (1.0 - gamma * rho), 1e-12 * c.k0);
    EXPECT_NEAR(c.k1, (1.0 + gamma) * alpha / (1.0 - gamma * rho), 1e-12 * c.k1);
  }
}

TEST(ErrorBound, Examples) {
  const GuaranteeConstants c = constants(0.0, BoundMode::kPaper);
  EXPECT_EQ(error_bound(c, 0.0, 0.0), 0.0);
  EXPECT_NEAR(error_bound(c, 1.0, 0.0), 3.26599, 1e-5);
  EXPECT_NEAR(error_bound(c, 0.0, 2.0), 10.53197, 1e-5);
}

TEST(UnitCircle, AlphaOne) {
  const Lemma37Result r = lemma37_max(1.0);
  EXPECT_NEAR(r.paper_value, kS2, 1e-12);
  EXPECT_NEAR(r.numeric_max, kS2, 1e-9);
}

TEST(UnitCircle, AlphaRootTwo) {
  const Lemma37Result r = lemma37_max(kS2);
  EXPECT_NEAR(r.paper_value, 2.0 * kS2 / kS3, 1e-12);
  EXPECT_NEAR(r.numeric_max, kS3, 1e-9);
  EXPECT_NEAR(r.argmax_x, 1.0 / kS3, 1e-6);
  EXPECT_NEAR(r.argmax_y, kS2 / kS3, 1e-6);
  EXPECT_GT(r.numeric_max, r.paper_value);
}

TEST(UnitCircle, SmallAlphaTendsToOne) {
  EXPECT_NEAR(lemma37_max(1e-8).numeric_max, 1.0, 1e-7);
  EXPECT_THROW(lemma37_max(0.0), RangeError);
}

TEST(UnitCircle, ClosedFormAndCauchySchwarz) {
  for (double alpha : {0.5, 1.0, std::numbers::sqrt2, 3.0}) {
    const Lemma37Result r = lemma37_max(alpha);
    const double cs = std::sqrt(1.0 + alpha * alpha);
    EXPECT_NEAR(r.numeric_max, cs, 1e-6);
    EXPECT_LE(r.numeric_max, cs * (1.0 + 1e-12));
    EXPECT_NEAR(r.argmax_x * r.argmax_x + r.argmax_y * r.argmax_y, 1.0, 1e-12);
  }
}

RipEstimate exact_delta(const MeasOp& a) { return delta_full(a); }

TEST(Certify, ZeroErrorPassesEverything) {
  const MeasOp a = gaussian_op(5, 5, 60, 81);
  Stream rng(81, 1);
  const Mat x = random_low_rank(5, 5, 1, rng);
  const ProofCertificate cert =
      certify(a, x, x, apply(a, x), 0.0, 1, delta_mc(a, 3, 50, 0), BoundMode::kCorrected);
  for (const auto& rec : cert.records) {
    EXPECT_LE(rec.lhs, 1e-12) << rec.label;
    EXPECT_TRUE(rec.pass) << rec.label;
  }
}

TEST(Certify, IdentitySolveUnconditionalRecordsPass) {
  const MeasOp a = MeasOp::identity(5, 5);
  Stream rng(82, 1);
  const Mat x = random_low_rank(5, 5, 1, rng);
  const CVec b = apply(a, x);
  const SolveResult res = solve_affine(a, b);
  ASSERT_TRUE(res.converged);
  const ProofCertificate cert =
      certify(a, x, res.x_star, b, 0.0, 1, exact_delta(a), BoundMode::kCorrected);
  EXPECT_TRUE(cert.delta_certified);
  for (const auto& rec : cert.records) {
    if (rec.flag == cert_flag::kUnconditional) {
      EXPECT_TRUE(rec.pass) << rec.label;
      EXPECT_GE(rec.slack, -1e-9 * std::max(1.0, rec.rhs)) << rec.label;
    }
  }
}

TEST(Certify, TailBlockInstance) {
  const Mat x = Mat::diag({10.0, 9.0, 0.0, 0.0, 0.0, 0.0, 0.0});
  const Mat e = Mat::diag({0.0, 0.0, 5.0, 4.0, 3.0, 2.0, 1.0});
  const MeasOp a = MeasOp::identity(7, 7);
  const Mat xs = x + e;
  const ProofCertificate cert =
      certify(a, x, xs, apply(a, xs), 0.0, 2, exact_delta(a), BoundMode::kCorrected);
  const InequalityRecord* eq12 = cert.find("Eq12");
  ASSERT_NE(eq12, nullptr);
  EXPECT_NEAR(eq12->lhs, std::sqrt(13.0) + 1.0, 1e-10);
  EXPECT_NEAR(eq12->rhs, 15.0 / std::sqrt(2.0), 1e-10);
  EXPECT_TRUE(eq12->pass);
  EXPECT_NE(cert.find("Eq18_3"), nullptr);
  EXPECT_EQ(cert.find("Eq18_4"), nullptr);
}

TEST(Certify, LabelsAppearExactlyOnce) {
  const MeasOp a = gaussian_op(6, 6, 50, 83);
  Stream rng(83, 1);
  const Mat x = random_low_rank(6, 6, 1, rng);
  const Mat xs = x + gaussian_mat(6, 6, rng) * 0.1;
  const ProofCertificate cert = certify(a, x, xs, apply(a, xs), 0.5, 1,
                                        delta_mc(a, 3, 50, 1), BoundMode::kCorrected);
  std::map<std::string, int> count;
  for (const auto& rec : cert.records) ++count[rec.label];
  for (const char* label : {"Eq11", "Eq12", "Eq13", "Eq14", "Eq15", "AE≤2eps", "Eq17",
                            "Eq18_consolidation", "Eq19", "Eq20", "Final(4)"}) {
    EXPECT_EQ(count[label], 1) << label;
  }
  // Full-rank P4 E with r = 1 gives five blocks, so Eq18_2 .. Eq18_5.
  for (int k = 2; k <= 5; ++k) EXPECT_EQ(count["Eq18_" + std::to_string(k)], 1) << k;
  for (const auto& [label, n] : count) EXPECT_EQ(n, 1) << label;
  EXPECT_FALSE(cert.delta_certified);
  EXPECT_EQ(cert.find("Eq17")->flag, cert_flag::kHeuristicDelta);
  EXPECT_EQ(cert.find("Eq14")->flag, "gamma-corrected");
  EXPECT_EQ(cert.find("Eq12")->flag, cert_flag::kUnconditional);
}

TEST(Certify, VacuousFinalAboveThreshold) {
  const MeasOp a = MeasOp::identity(3, 3).scaled(2.0);
  const Mat x = Mat::diag({1.0, 0.0, 0.0});
  const ProofCertificate cert =
      certify(a, x, x, apply(a, x), 0.0, 1, exact_delta(a), BoundMode::kCorrected);
  const InequalityRecord* fin = cert.find("Final(4)");
  ASSERT_NE(fin, nullptr);
  EXPECT_EQ(fin->flag, cert_flag::kVacuous);
  EXPECT_TRUE(std::isinf(fin->rhs));
}

TEST(Certify, PassRuleAndCsv) {
  EXPECT_TRUE(certificate_pass(1.0 + 5e-10, 1.0));
  EXPECT_FALSE(certificate_pass(1.0 + 2e-9, 1.0));
  EXPECT_TRUE(certificate_pass(5e-10, 0.0));
  ProofCertificate cert;
  cert.records.push_back({"Eq12", 1.0, 2.0, 1.0, true, "unconditional"});
  std::ostringstream out;
  write_certificate_csv(out, cert);
  EXPECT_EQ(out.str(), "label,lhs,rhs,slack,pass,flag\nEq12,1,2,1,true,unconditional\n");
}

TEST(Certify, PreconditionsChecked) {
  const MeasOp a = MeasOp::identity(3, 3);
  const Mat x = Mat::identity(3);
  EXPECT_THROW(certify(a, x, Mat(3, 2), CVec(9), 0.0, 1, exact_delta(a), BoundMode::kPaper),
               ShapeError);
  EXPECT_THROW(certify(a, x, x, CVec(9), 0.0, 3, exact_delta(a), BoundMode::kPaper),
               RangeError);
}

}  // namespace
}  // namespace lowrank
