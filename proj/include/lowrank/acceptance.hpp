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

// End-to-end acceptance suite, shared by the acceptance test binary and the
// `selftest` CLI subcommand. Each criterion yields one CheckOutcome.
//
// Reference values are computed here without the library's own routines
// where possible: the identity-operator oracle uses Eigen's SVD, the
// constants are typed in from their closed forms, and the conic cross-check
// reads solutions frozen from an external SDP solver.

#ifndef LOWRANK_ACCEPTANCE_HPP_
#define LOWRANK_ACCEPTANCE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lowrank/batteries.hpp"
#include "lowrank/guarantee.hpp"
#include "lowrank/harness.hpp"
#include "lowrank/io.hpp"
#include "lowrank/mat.hpp"
#include "lowrank/matops.hpp"
#include "lowrank/measurement.hpp"
#include "lowrank/random.hpp"
#include "lowrank/rip.hpp"
#include "lowrank/solver.hpp"

namespace lowrank::acceptance {

struct SuiteOptions {
  std::uint64_t seed = 7;
  std::string sdp_data_dir;
  // Trials for the bound and certificate criteria.
  std::size_t bound_trials = 100;
};

namespace detail {

using battery::detail::sci;
using battery::detail::Timer;

inline CheckOutcome timed(CheckOutcome c, double limit_s) {
  const bool in_time = c.seconds < limit_s;
  c.detail += "; " + sci(c.seconds) + " s (limit " + std::to_string(static_cast<int>(limit_s)) +
              " s)";
  c.pass = c.pass && in_time;
  return c;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// min ||X||_* s.t. ||X - B||_F <= eps: soft-threshold the singular values of
// B at tau with sum_i min(s_i, tau)^2 = eps^2.
inline Mat water_filling_oracle(const Mat& b, double eps) {
  using EMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  EMat e(b.rows(), b.cols());
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) e(i, j) = b(i, j);
  }
  const Eigen::JacobiSVD<EMat> sv(e, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd s = sv.singularValues();  // nonincreasing
  const Eigen::Index k = s.size();
  if (s.squaredNorm() <= eps * eps) return Mat(b.rows(), b.cols());
  double tau = 0.0;
  for (Eigen::Index top = 1; top <= k; ++top) {
    double tail = 0.0;
    for (Eigen::Index i = top; i < k; ++i) tail += s(i) * s(i);
    const double t2 = (eps * eps - tail) / static_cast<double>(top);
    if (t2 < 0.0) continue;
    const double t = std::sqrt(t2);
    const double below = top < k ? s(top) : 0.0;
    if (t <= s(top - 1) && t >= below) {
      tau = t;
      break;
    }
  }
  Eigen::VectorXd shrunk = (s.array() - tau).max(0.0).matrix();
  const EMat x = sv.matrixU() * shrunk.cast<Complex>().asDiagonal() * sv.matrixV().adjoint();
  Mat out(b.rows(), b.cols());
  for (std::size_t i = 0; i < b.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = x(i, j);
  }
  return out;
}

}  // namespace detail

// 1-4: property batteries.
inline CheckOutcome criterion1(const SuiteOptions& o) {
  CheckOutcome c = battery::nuclear_sandwich(o.seed, 1000);
  c.id = "1";
  return detail::timed(c, 10.0);
}

inline CheckOutcome criterion2(const SuiteOptions& o) {
  CheckOutcome c = battery::nuclear_additivity(o.seed, 200);
  c.id = "2";
  return c;
}

inline CheckOutcome criterion3(const SuiteOptions& o) {
  CheckOutcome c = battery::restricted_orthogonality(o.seed, 100);
  c.id = "3";
  return c;
}

inline CheckOutcome criterion4(const SuiteOptions&) {
  CheckOutcome c = battery::unit_circle_max().outcome;
  c.id = "4";
  return c;
}

// 5: closed-form constants, thresholds and the gamma/rho/alpha identity.
inline CheckOutcome criterion5(const SuiteOptions&) {
  detail::Timer timer;
  const double s2 = std::sqrt(2.0), s3 = std::sqrt(3.0);
  const GuaranteeConstants c0 = constants(0.0, BoundMode::kPaper);
  double worst = 0.0;
  worst = std::max(worst, detail::rel_err(c0.k0, 4.0 * s2 / s3));
  worst = std::max(worst, detail::rel_err(c0.k1, 2.0 * (s3 + 2.0 * s2) / s3));
  worst = std::max(worst, detail::rel_err(bound_threshold(BoundMode::kPaper), 1.0 / (1.0 + 4.0 / s3)));
  worst = std::max(worst, detail::rel_err(bound_threshold(BoundMode::kCorrected),
                                          1.0 / (1.0 + std::sqrt(6.0))));
  const bool literal = std::abs(bound_threshold(BoundMode::kPaper) - 0.302169) < 5e-7 &&
                       std::abs(bound_threshold(BoundMode::kCorrected) - 0.289898) < 5e-7;
  double worst_grid = 0.0;
  for (BoundMode mode : {BoundMode::kPaper, BoundMode::kCorrected}) {
    const double thr = bound_threshold(mode);
    const double gamma = mode == BoundMode::kPaper ? 2.0 * s2 / s3 : s3;
    for (int i = 0; i < 50; ++i) {
      const double d = thr * static_cast<double>(i) / 50.0;
      const GuaranteeConstants c = constants(d, mode);
      const double rho = s2 * d / (1.0 - d);
      const double alpha = 2.0 * std::sqrt(1.0 + d) / (1.0 - d);
      const double k0 = 2.0 * gamma * (1.0 + rho) / (1.0 - gamma * rho);
      const double k1 = (1.0 + gamma) * alpha / (1.0 - gamma * rho);
      worst_grid = std::max({worst_grid, detail::rel_err(c.k0, k0), detail::rel_err(c.k1, k1)});
    }
  }
  const bool pass = worst <= 1e-12 && worst_grid <= 1e-12 && literal;
  return {"5", "constants at delta = 0, thresholds, and the K0/K1 identity on a 50-point grid",
          pass,
          "closed forms worst rel err " + detail::sci(worst) + ", grid worst rel err " +
              detail::sci(worst_grid) + ", thresholds " +
              io::format_real(bound_threshold(BoundMode::kPaper)) + " / " +
              io::format_real(bound_threshold(BoundMode::kCorrected)),
          timer.seconds()};
}

// 6: identity operator against the water-filling oracle.
inline CheckOutcome criterion6(const SuiteOptions& o) {
  detail::Timer timer;
  std::size_t failures = 0;
  double worst = 0.0;
  for (std::size_t c = 0; c < 50; ++c) {
    Stream rng(derive_seed(o.seed, 6), c);
    const std::size_t m = battery::detail::draw_size(rng, 1, 8);
    const std::size_t n = battery::detail::draw_size(rng, 1, 8);
    Mat x0 = gaussian_mat(m, n, rng);
    x0 *= Complex(1.0 / frobenius_norm(x0), 0.0);
    const double eps = 0.05 + 0.45 * rng.uniform();
    const MeasOp a = MeasOp::identity(m, n);
    const CVec b = vec(x0);
    const SolveResult res = solve_ellipsoid(a, b, eps);
    const Mat want = detail::water_filling_oracle(x0, eps);
    const double diff = frobenius_norm(res.x_star - want);
    worst = std::max(worst, diff);
    if (!(diff <= 1e-4)) ++failures;
  }
  CheckOutcome out{"6", "identity-operator ellipsoid solve vs water-filling oracle",
                   failures == 0,
                   std::to_string(50 - failures) + "/50 within 1e-4, worst Frobenius gap " +
                       detail::sci(worst),
                   timer.seconds()};
  return detail::timed(out, 30.0);
}

// 7: noiseless exact recovery.
inline CheckOutcome criterion7(const SuiteOptions& o) {
  detail::Timer timer;
  std::size_t good = 0;
  double worst = 0.0;
  for (std::size_t t = 0; t < 100; ++t) {
    const std::uint64_t key = derive_seed(derive_seed(o.seed, 7), t);
    const MeasOp a = gaussian_op(10, 10, 120, derive_seed(key, 0));
    Stream rng(key, 1);
    Mat x = random_low_rank(10, 10, 1, rng);
    x *= Complex(1.0 / frobenius_norm(x), 0.0);
    const Observation obs = observe(a, x, 0.0, derive_seed(key, 2));
    double rel = std::numeric_limits<double>::infinity();
    try {
      const SolveResult res = solve_affine(a, obs.b);
      rel = frobenius_norm(res.x_star - x) / frobenius_norm(x);
    } catch (const Error&) {
    }
    worst = std::max(worst, rel);
    if (rel <= 1e-3) ++good;
  }
  CheckOutcome out{"7", "noiseless recovery m = n = 10, r = 1, p = 120", good >= 95,
                   std::to_string(good) + "/100 trials with relative error <= 1e-3 (need 95), "
                                          "worst " + detail::sci(worst),
                   timer.seconds()};
  return detail::timed(out, 120.0);
}

inline ExperimentConfig bound_config(const SuiteOptions& o) {
  ExperimentConfig c;
  c.m = 10;
  c.n = 10;
  c.r = 1;
  c.p = 140;
  c.epsilon_grid = {0.01, 0.05};
  c.tail_mode = TailMode::kExactRank;
  c.trials = o.bound_trials;
  c.base_seed = derive_seed(o.seed, 8);
  c.mode = BoundMode::kCorrected;
  c.delta_method = DeltaMethod::kLocal;
  return c;
}

// 8: err <= K1(delta_hat) eps on trials with delta_hat below the corrected
// threshold; rows at or above it are reported only.
inline CheckOutcome bound_check(const std::string& id, const std::string& name,
                                const ExperimentResult& res) {
  std::size_t qualifying = 0, held = 0, vacuous = 0, errors = 0;
  double min_delta = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  for (const TrialRecord& r : res.records) {
    if (r.status.rfind("error", 0) == 0) {
      ++errors;
      continue;
    }
    min_delta = std::min(min_delta, r.delta_hat);
    if (r.delta_hat >= bound_threshold(res.config.mode)) {
      ++vacuous;
      continue;
    }
    ++qualifying;
    max_ratio = std::max(max_ratio, r.bound_ratio);
    if (r.err <= r.bound) ++held;
  }
  std::string detail = std::to_string(held) + "/" + std::to_string(qualifying) +
                       " qualifying rows within the bound";
  if (qualifying > 0) detail += ", max err/bound " + detail::sci(max_ratio);
  detail += "; " + std::to_string(vacuous) + " rows with delta_hat >= threshold " +
            io::format_real(bound_threshold(res.config.mode)) + " reported, not counted";
  detail += " (min delta_hat " + io::format_real(min_delta) + ")";
  if (errors) detail += "; " + std::to_string(errors) + " rows with solver errors";
  if (qualifying == 0) detail += "; no qualifying rows, so the check is vacuous";
  return {id, name, held == qualifying && errors == 0, detail, 0.0};
}

// 9: certificate chain on every converged trial.
inline CheckOutcome certificate_check(const std::string& id, const ExperimentResult& res) {
  std::size_t rows = 0, uncond_fail = 0, delta_fail = 0, split_fail = 0, other_fail = 0;
  double worst_split = 0.0;
  std::vector<std::string> failed_labels;
  for (const TrialRecord& r : res.records) {
    if (!r.solver_converged || !r.certificate) continue;
    ++rows;
    const ProofCertificate& cert = *r.certificate;
    worst_split = std::max(worst_split, cert.split_identity_residual);
    if (!(cert.split_identity_residual <= 1e-12)) ++split_fail;
    for (const InequalityRecord& rec : cert.records) {
      if (rec.pass) continue;
      if (rec.flag == cert_flag::kUnconditional) {
        ++uncond_fail;
      } else if (is_delta_dependent(rec)) {
        ++delta_fail;
      } else {
        ++other_fail;
      }
      if (std::find(failed_labels.begin(), failed_labels.end(), rec.label) ==
          failed_labels.end()) {
        failed_labels.push_back(rec.label);
      }
    }
  }
  std::string detail = std::to_string(rows) + " converged rows; unconditional failures " +
                       std::to_string(uncond_fail) + ", delta-dependent failures " +
                       std::to_string(delta_fail) + ", split identity worst " +
                       detail::sci(worst_split);
  if (other_fail) detail += ", other (gamma-flagged) failures " + std::to_string(other_fail);
  if (!failed_labels.empty()) {
    detail += "; failing labels:";
    for (const auto& l : failed_labels) detail += " " + l;
  }
  return {id, "certificate chain on converged trials",
          rows > 0 && uncond_fail == 0 && delta_fail == 0 && split_fail == 0, detail, 0.0};
}

// 10: cross-check against frozen SDP solutions.
inline CheckOutcome criterion10(const SuiteOptions& o) {
  detail::Timer timer;
  namespace fs = std::filesystem;
  std::size_t good = 0, cases = 0;
  double worst = 0.0;
  std::string problem;
  for (int k = 0; k < 10; ++k) {
    const fs::path base = fs::path(o.sdp_data_dir) / ("case_" + std::to_string(k));
    try {
      const MeasOp a = io::load_operator(base.string() + ".op");
      const Observation obs = io::load_observation(base.string() + ".obs");
      const Mat want = io::load_matrix(base.string() + ".sol");
      ++cases;
      const SolveResult res = solve_ellipsoid(a, obs.b, obs.epsilon);
      const double diff = frobenius_norm(res.x_star - want);
      worst = std::max(worst, diff);
      if (diff <= 1e-3) ++good;
    } catch (const Error& e) {
      if (problem.empty()) problem = e.what();
    }
  }
  std::string detail = std::to_string(good) + "/10 instances within 1e-3 Frobenius of the SDP "
                       "solution, worst " + detail::sci(worst);
  if (!problem.empty()) detail += "; " + problem;
  return {"10", "m = n = 4, r = 1, p = 14 affine solve vs trace SDP", good == 10 && cases == 10,
          detail, timer.seconds()};
}

// 11: byte-identical CSV across repeated and multi-threaded runs.
inline CheckOutcome criterion11(const SuiteOptions& o) {
  detail::Timer timer;
  ExperimentConfig c;
  c.m = 6;
  c.n = 6;
  c.r = 1;
  c.p = 40;
  c.epsilon_grid = {0.0, 0.05};
  c.trials = 4;
  c.base_seed = derive_seed(o.seed, 11);
  c.delta_method = DeltaMethod::kLocal;
  c.restarts = 2;
  c.mc_samples = 200;
  auto csv = [](const ExperimentConfig& cfg) {
    std::ostringstream out;
    write_trial_csv(out, run_experiment(cfg).records, false);
    return out.str();
  };
  const std::string first = csv(c);
  const std::string second = csv(c);
  c.threads = 3;
  const std::string threaded = csv(c);
  const bool same = first == second && first == threaded;
  return {"11", "repeated and multi-threaded runs give byte-identical CSV", same,
          std::string(same ? "identical" : "differs") + " across serial, repeat and 3-thread runs (" +
              std::to_string(first.size()) + " bytes)",
          timer.seconds()};
}

// Supplementary: a regime where the certified (unrestricted) constant lies
// below the corrected threshold, so the bound and the delta-dependent
// certificate records are exercised non-vacuously.
inline ExperimentConfig certified_config(const SuiteOptions& o) {
  ExperimentConfig c;
  c.m = 6;
  c.n = 6;
  c.r = 1;
  c.p = 4000;
  c.epsilon_grid = {0.01, 0.05};
  c.trials = 10;
  c.base_seed = derive_seed(o.seed, 12);
  c.mode = BoundMode::kCorrected;
  c.delta_method = DeltaMethod::kFull;
  return c;
}

inline std::vector<CheckOutcome> run_suite(const SuiteOptions& o,
                                           const std::function<void(const CheckOutcome&)>& sink) {
  std::vector<CheckOutcome> out;
  auto emit = [&](CheckOutcome c) {
    if (sink) sink(c);
    out.push_back(std::move(c));
  };
  emit(criterion1(o));
  emit(criterion2(o));
  emit(criterion3(o));
  emit(criterion4(o));
  emit(criterion5(o));
  emit(criterion6(o));
  emit(criterion7(o));
  {
    detail::Timer timer;
    const ExperimentResult res = run_experiment(bound_config(o));
    CheckOutcome c8 = bound_check("8", "error bound, m = n = 10, r = 1, p = 140, local-search delta",
                                  res);
    c8.seconds = timer.seconds();
    emit(c8);
    emit(certificate_check("9", res));
  }
  emit(criterion10(o));
  emit(criterion11(o));
  {
    detail::Timer timer;
    const ExperimentResult res = run_experiment(certified_config(o));
    CheckOutcome s8 = bound_check("S8", "error bound, m = n = 6, r = 1, p = 4000, certified delta",
                                  res);
    s8.seconds = timer.seconds();
    emit(s8);
    CheckOutcome s9 = certificate_check("S9", res);
    s9.name += " (certified delta)";
    emit(s9);
  }
  return out;
}

}  // namespace lowrank::acceptance

#endif  // LOWRANK_ACCEPTANCE_HPP_
