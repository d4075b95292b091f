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

// Recovery guarantee for nuclear norm minimization with an ellipsoidal
// constraint:
//
//   ||X* - X||_F <= K0 ||X - X_r||_F + K1 epsilon,   if delta_3r(A) < threshold,
//
// with K0 = 2 gamma (1 + rho) / (1 - gamma rho), K1 = (1 + gamma) alpha /
// (1 - gamma rho), alpha = 2 sqrt(1 + delta) / (1 - delta) and
// rho = sqrt(2) delta / (1 - delta).
//
// gamma bounds x + sqrt(2) y on the unit circle. BoundMode::kPaper keeps the
// closed-form constants with gamma = 2 sqrt(2) / sqrt(3), which is below the
// true maximum sqrt(3). BoundMode::kCorrected uses gamma = sqrt(3) and
// threshold 1 / (1 + sqrt(6)).

#ifndef LOWRANK_GUARANTEE_HPP_
#define LOWRANK_GUARANTEE_HPP_

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "lowrank/error.hpp"
#include "lowrank/frames.hpp"
#include "lowrank/io.hpp"
#include "lowrank/mat.hpp"
#include "lowrank/matops.hpp"
#include "lowrank/measurement.hpp"
#include "lowrank/rip.hpp"

namespace lowrank {

enum class BoundMode { kPaper, kCorrected };

inline const char* to_string(BoundMode m) {
  return m == BoundMode::kPaper ? "paper" : "corrected";
}

inline double bound_gamma(BoundMode mode) {
  return mode == BoundMode::kPaper ? 2.0 * std::numbers::sqrt2 / std::numbers::sqrt3
                                   : std::numbers::sqrt3;
}

// 1 / (1 + 4/sqrt(3)) for kPaper, 1 / (1 + sqrt(6)) for kCorrected; in both
// cases the point where gamma * rho reaches 1.
inline double bound_threshold(BoundMode mode) {
  return mode == BoundMode::kPaper ? 1.0 / (1.0 + 4.0 / std::numbers::sqrt3)
                                   : 1.0 / (1.0 + std::sqrt(6.0));
}

struct GuaranteeConstants {
  double delta3r = 0.0;
  BoundMode mode = BoundMode::kCorrected;
  double gamma = 0.0;
  double alpha = 0.0;
  double rho = 0.0;
  double k0 = 0.0;
  double k1 = 0.0;
  double threshold = 0.0;
};

inline GuaranteeConstants constants(double delta3r, BoundMode mode) {
  const double threshold = bound_threshold(mode);
  if (!(delta3r >= 0.0)) throw RangeError("constants: delta3r must be nonnegative");
  if (delta3r >= threshold) {
    const char* condition = mode == BoundMode::kPaper ? "δ3r(A) < 1/(1 + 4/√3)"
                                                      : "δ3r(A) < 1/(1 + √6)";
    throw ConditionViolated(std::string("constants: condition ") + condition +
                            " violated by delta3r = " + io::format_real(delta3r));
  }
  const double d = delta3r;
  GuaranteeConstants c;
  c.delta3r = d;
  c.mode = mode;
  c.threshold = threshold;
  c.gamma = bound_gamma(mode);
  c.alpha = 2.0 * std::sqrt(1.0 + d) / (1.0 - d);
  c.rho = std::numbers::sqrt2 * d / (1.0 - d);
  if (mode == BoundMode::kPaper) {
    // Closed forms kept verbatim.
    const double sqrt2 = std::numbers::sqrt2;
    const double sqrt3 = std::numbers::sqrt3;
    const double den = 1.0 - (1.0 + 4.0 / sqrt3) * d;
    c.k0 = (4.0 * sqrt2 / sqrt3) * (1.0 + (sqrt2 - 1.0) * d) / den;
    c.k1 = ((sqrt3 + 2.0 * sqrt2) / sqrt3) * 2.0 * std::sqrt(1.0 + d) / den;
  } else {
    const double den = 1.0 - c.gamma * c.rho;
    c.k0 = 2.0 * c.gamma * (1.0 + c.rho) / den;
    c.k1 = (1.0 + c.gamma) * c.alpha / den;
  }
  return c;
}

inline double error_bound(const GuaranteeConstants& c, double tail_err, double epsilon) {
  return c.k0 * tail_err + c.k1 * epsilon;
}

// max of x + alpha y on x^2 + y^2 = 1: the kPaper value 2a/sqrt(a^2+1)
// next to a numeric maximum (1e6-point angle grid, then golden-section
// refinement) and the closed form sqrt(1 + a^2).
struct Lemma37Result {
  double alpha = 0.0;
  double paper_value = 0.0;
  double numeric_max = 0.0;
  double closed_form = 0.0;
  double argmax_x = 0.0;
  double argmax_y = 0.0;
  double paper_argmax_x = 0.0;
  double paper_argmax_y = 0.0;
};

inline Lemma37Result lemma37_max(double alpha_c) {
  if (!(alpha_c > 0.0)) throw RangeError("lemma37_max: alpha must be positive");
  constexpr std::size_t kGrid = 1000000;
  const double two_pi = 2.0 * std::numbers::pi;
  auto f = [&](double th) { return std::cos(th) + alpha_c * std::sin(th); };

  std::size_t best = 0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < kGrid; ++i) {
    const double v = f(two_pi * static_cast<double>(i) / kGrid);
    if (v > best_val) {
      best_val = v;
      best = i;
    }
  }
  const double h = two_pi / kGrid;
  double lo = two_pi * static_cast<double>(best) / kGrid - h;
  double hi = lo + 2.0 * h;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double c = hi - inv_phi * (hi - lo);
    const double d = lo + inv_phi * (hi - lo);
    if (f(c) > f(d)) {
      hi = d;
    } else {
      lo = c;
    }
  }
  const double th = 0.5 * (lo + hi);

  Lemma37Result out;
  out.alpha = alpha_c;
  out.numeric_max = std::max(best_val, f(th));
  out.argmax_x = std::cos(th);
  out.argmax_y = std::sin(th);
  out.closed_form = std::sqrt(1.0 + alpha_c * alpha_c);
  const double s = std::sqrt(alpha_c * alpha_c + 1.0);
  out.paper_value = 2.0 * alpha_c / s;
  out.paper_argmax_x = alpha_c / s;
  out.paper_argmax_y = 1.0 / s;
  return out;
}

inline constexpr double kCertSlack = 1e-9;

struct InequalityRecord {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool pass = false;
  std::string flag;
};

inline bool certificate_pass(double lhs, double rhs) {
  return lhs <= rhs + kCertSlack * std::max(1.0, rhs);
}

struct ProofCertificate {
  std::vector<InequalityRecord> records;
  double delta_used = 0.0;
  RipMethod delta_method = RipMethod::kMonteCarlo;
  bool delta_certified = false;
  BoundMode mode = BoundMode::kCorrected;
  // ||P1 E + P2 E + P3 E + P4 E - E||_F / ||E||_F (0 when E = 0).
  double split_identity_residual = 0.0;

  std::size_t pass_count() const {
    std::size_t n = 0;
    for (const auto& rec : records) n += rec.pass ? 1 : 0;
    return n;
  }
  bool all_pass() const { return pass_count() == records.size(); }
  const InequalityRecord* find(const std::string& label) const {
    for (const auto& rec : records) {
      if (rec.label == label) return &rec;
    }
    return nullptr;
  }
};

namespace cert_flag {
inline constexpr const char* kUnconditional = "unconditional";
inline constexpr const char* kHeuristicDelta = "heuristic-delta";
inline constexpr const char* kCertifiedDelta = "certified-delta";
inline constexpr const char* kVacuous = "vacuous-delta-above-threshold";
}  // namespace cert_flag

inline bool is_delta_dependent(const InequalityRecord& rec) {
  return rec.flag == cert_flag::kHeuristicDelta || rec.flag == cert_flag::kCertifiedDelta ||
         rec.flag == cert_flag::kVacuous;
}

// Evaluates both sides of every inequality in the error-bound argument on one
// instance, with E = x_star - X, P1..P4 from the SVD of X, and Q_k the rank-r
// blocks of P4 E. D = E - (P4 E - Q1 E) = (P1 + P2 + P3) E + Q1 E below.
inline ProofCertificate certify(const MeasOp& a, const Mat& x, const Mat& x_star,
                                std::span<const Complex> b, double epsilon, std::size_t r,
                                const RipEstimate& delta_est, BoundMode mode) {
  if (!x.same_shape(x_star) || x.rows() != a.m() || x.cols() != a.n()) {
    throw ShapeError("certify: X, X* and the operator disagree on shape");
  }
  if (b.size() != a.p()) throw ShapeError("certify: b length mismatch");
  if (!(epsilon >= 0.0)) throw RangeError("certify: epsilon must be nonnegative");

  const Svd sx = svd(x);
  const SplitProjectors proj(sx, r);  // validates 1 <= r < min(m, n)
  const double delta = delta_est.delta_hat;
  const double sqrt_r = std::sqrt(static_cast<double>(r));
  const double gamma = bound_gamma(mode);

  ProofCertificate cert;
  cert.delta_used = delta;
  cert.delta_method = delta_est.method;
  cert.delta_certified = delta_est.certified_upper;
  cert.mode = mode;
  const std::string delta_flag =
      delta_est.certified_upper ? cert_flag::kCertifiedDelta : cert_flag::kHeuristicDelta;
  const std::string gamma_flag = std::string("gamma-") + to_string(mode);
  auto add = [&](std::string label, double lhs, double rhs, const std::string& flag) {
    cert.records.push_back(
        {std::move(label), lhs, rhs, rhs - lhs, certificate_pass(lhs, rhs), flag});
  };

  const Mat e = x_star - x;
  const auto pe = proj.apply(e);
  {
    Mat sum = pe[0] + pe[1] + pe[2] + pe[3];
    const double ne = frobenius_norm(e);
    cert.split_identity_residual = ne > 0.0 ? frobenius_norm(sum - e) / ne : 0.0;
  }
  auto nuc = [](const Mat& m) { return frobenius_norm(m) == 0.0 ? 0.0 : nuclear_norm(m); };

  // Nuclear additivity across the P1/P4 blocks, on X + E = X*.
  {
    const auto pz = proj.apply(x_star);
    const double sum = nuc(pz[0]) + nuc(pz[3]);
    add("Eq11", std::abs(nuc(pz[0] + pz[3]) - sum), kCertSlack * sum,
        cert_flag::kUnconditional);
  }

  const TailBlocks tb = tail_blocks(pe[3], r);
  const Mat q1e = tb.size() > 0 ? tb.blocks[0] : Mat(x.rows(), x.cols());
  const Mat t = pe[3] - q1e;                    // sum_{k>=2} Q_k E
  const Mat d = pe[0] + pe[1] + pe[2] + q1e;    // E - t
  const double nuc_p4e = nuc(pe[3]);
  const double tail = tail_error(sx, r);
  const double d_f = frobenius_norm(d);
  const double t_f = frobenius_norm(t);

  double sum_qk = 0.0;
  for (std::size_t k = 1; k < tb.size(); ++k) sum_qk += frobenius_norm(tb.blocks[k]);
  add("Eq12", sum_qk, nuc_p4e / sqrt_r, cert_flag::kUnconditional);
  add("Eq13", t_f, nuc_p4e / sqrt_r, cert_flag::kUnconditional);
  add("Eq14", nuc_p4e, gamma * sqrt_r * d_f + 2.0 * gamma * sqrt_r * tail, gamma_flag);
  add("Eq15", t_f, gamma * d_f + 2.0 * gamma * tail, gamma_flag);

  const CVec ae = apply(a, e);
  const CVec ad = apply(a, d);
  const double ae_norm = vnorm(ae);
  const double ad_norm = vnorm(ad);
  add("AE≤2eps", ae_norm, 2.0 * epsilon, cert_flag::kUnconditional);

  const double iso = std::sqrt(1.0 + delta);
  add("Eq17", std::abs(vdot(ae, ad)), 2.0 * epsilon * iso * d_f, delta_flag);

  add("Eq18_consolidation", frobenius_norm(pe[0] + q1e) + frobenius_norm(pe[1] + pe[2]),
      std::numbers::sqrt2 * d_f, cert_flag::kUnconditional);
  for (std::size_t k = 1; k < tb.size(); ++k) {
    const CVec aq = apply(a, tb.blocks[k]);
    add("Eq18_" + std::to_string(k + 1), std::abs(vdot(aq, ad)),
        std::numbers::sqrt2 * delta * d_f * frobenius_norm(tb.blocks[k]), delta_flag);
  }

  add("Eq19", ad_norm * ad_norm,
      d_f * (2.0 * epsilon * iso + std::numbers::sqrt2 * delta * nuc_p4e / sqrt_r),
      delta_flag);
  add("Eq20", (1.0 - delta) * d_f * d_f, ad_norm * ad_norm, delta_flag);

  const double err = frobenius_norm(e);
  if (delta < bound_threshold(mode)) {
    const GuaranteeConstants c = constants(delta, mode);
    add("Final(4)", err, error_bound(c, tail, epsilon), delta_flag);
  } else {
    add("Final(4)", err, std::numeric_limits<double>::infinity(), cert_flag::kVacuous);
  }
  return cert;
}

inline void write_certificate_csv(std::ostream& out, const ProofCertificate& cert) {
  out << "label,lhs,rhs,slack,pass,flag\n";
  for (const auto& rec : cert.records) {
    out << rec.label << ',' << io::format_real(rec.lhs) << ',' << io::format_real(rec.rhs)
        << ',' << io::format_real(rec.slack) << ',' << (rec.pass ? "true" : "false") << ','
        << rec.flag << '\n';
  }
}

}  // namespace lowrank

#endif  // LOWRANK_GUARANTEE_HPP_
