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

// lowrank command line: recover, rip, verify-bound, certify, lemmas, selftest.
// Exit status 0 on success, 1 when a check fails, 2 on usage or input errors.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "lowrank/acceptance.hpp"
#include "lowrank/batteries.hpp"
#include "lowrank/guarantee.hpp"
#include "lowrank/harness.hpp"
#include "lowrank/io.hpp"
#include "lowrank/rip.hpp"
#include "lowrank/solver.hpp"

#ifndef LOWRANK_SOURCE_DIR
#define LOWRANK_SOURCE_DIR "."
#endif

namespace {

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

using lowrank::BoundMode;

BoundMode parse_mode(const std::string& s) {
  return s == "paper" ? BoundMode::kPaper : BoundMode::kCorrected;
}

// Output goes to `path`, or stdout when it is empty or "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary);
      if (!file_) throw lowrank::ParseError("cannot write '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct RecoverArgs {
  std::string op, obs, out;
};

int run_recover(const RecoverArgs& a) {
  const lowrank::MeasOp op = lowrank::io::load_operator(a.op);
  const lowrank::Observation obs = lowrank::io::load_observation(a.obs);
  if (obs.b.size() != op.p()) throw lowrank::ParseError("recover: observation length != p");
  const lowrank::SolveResult res = lowrank::solve_ellipsoid(op, obs.b, obs.epsilon);
  lowrank::io::save_matrix(a.out, res.x_star);
  std::cout << "residual,nuclear,iterations,lambda_final,converged,subopt_witness\n"
            << lowrank::io::format_real(res.residual) << ','
            << lowrank::io::format_real(res.nuclear) << ',' << res.iterations << ','
            << lowrank::io::format_real(res.lambda_final) << ','
            << (res.converged ? "true" : "false") << ','
            << lowrank::io::format_real(res.subopt_witness) << '\n';
  return kOk;
}

struct RipArgs {
  std::string op, method = "local";
  std::size_t r = 1;
  std::uint64_t seed = 0;
  std::size_t samples = 2000, restarts = 16, max_iters = 200;
};

int run_rip(const RipArgs& a) {
  const lowrank::MeasOp op = lowrank::io::load_operator(a.op);
  lowrank::RipEstimate est;
  std::size_t budget = 0;
  if (a.method == "mc") {
    est = lowrank::delta_mc(op, a.r, a.samples, a.seed);
    budget = a.samples;
  } else if (a.method == "full") {
    est = lowrank::delta_full(op);
    est.r = a.r;
    est.seed = a.seed;
  } else {
    lowrank::LocalSearchOptions opts;
    opts.restarts = a.restarts;
    opts.max_iters = a.max_iters;
    opts.mc_samples = a.samples;
    est = lowrank::delta_local(op, a.r, a.seed, opts);
    budget = a.restarts;
    if (!est.converged) std::cerr << "note: some restarts hit max_iters\n";
  }
  std::cout << est.r << ',' << lowrank::to_string(est.method) << ','
            << lowrank::io::format_real(est.delta_hat) << ','
            << (est.certified_upper ? "true" : "false") << ',' << budget << ',' << est.seed
            << '\n';
  return kOk;
}

struct VerifyArgs {
  std::string config, out, mode;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials, threads;
  bool timing = false;
};

int run_verify(const VerifyArgs& a) {
  lowrank::ExperimentConfig cfg = lowrank::load_config(a.config);
  if (a.seed) cfg.base_seed = *a.seed;
  if (a.trials) cfg.trials = *a.trials;
  if (a.threads) cfg.threads = *a.threads;
  if (!a.mode.empty()) cfg.mode = parse_mode(a.mode);
  if (!a.out.empty()) cfg.output_path = a.out;
  if (a.timing) cfg.timing = true;
  lowrank::validate(cfg);

  const lowrank::ExperimentResult res = lowrank::run_experiment(cfg);
  Sink sink(cfg.output_path);
  lowrank::write_trial_csv(sink.stream(), res.records, cfg.timing);

  std::size_t violations = 0, cert_failures = 0, errors = 0, vacuous = 0;
  for (const auto& r : res.records) {
    if (r.status.rfind("error", 0) == 0) {
      ++errors;
      continue;
    }
    if (r.status == "vacuous") {
      ++vacuous;
    } else if (!(r.err <= r.bound)) {
      ++violations;
    }
    if (r.certificate && r.solver_converged) {
      for (const auto& rec : r.certificate->records) {
        if (!rec.pass && rec.flag == lowrank::cert_flag::kUnconditional) ++cert_failures;
      }
    }
  }
  std::cerr << res.records.size() << " rows; " << vacuous
            << " with delta_hat at or above the threshold; " << violations
            << " bound violations; " << cert_failures << " unconditional certificate failures; "
            << errors << " solver errors\n";
  return violations == 0 && cert_failures == 0 ? kOk : kCheckFailed;
}

struct CertifyArgs {
  std::string op, x, xstar, obs, out, mode = "corrected", method = "local";
  std::size_t r = 1;
  std::uint64_t seed = 0;
};

int run_certify(const CertifyArgs& a) {
  const lowrank::MeasOp op = lowrank::io::load_operator(a.op);
  const lowrank::Mat x = lowrank::io::load_matrix(a.x);
  const lowrank::Mat xs = lowrank::io::load_matrix(a.xstar);
  const lowrank::Observation obs = lowrank::io::load_observation(a.obs);
  const std::size_t level = std::min(3 * a.r, std::min(op.m(), op.n()));
  lowrank::RipEstimate est;
  if (a.method == "mc") {
    est = lowrank::delta_mc(op, level, 2000, a.seed);
  } else if (a.method == "full") {
    est = lowrank::delta_full(op);
  } else {
    est = lowrank::delta_local(op, level, a.seed);
  }
  const lowrank::ProofCertificate cert =
      lowrank::certify(op, x, xs, obs.b, obs.epsilon, a.r, est, parse_mode(a.mode));
  Sink sink(a.out);
  lowrank::write_certificate_csv(sink.stream(), cert);
  std::cerr << cert.pass_count() << "/" << cert.records.size() << " records pass; delta "
            << lowrank::io::format_real(cert.delta_used) << " ("
            << lowrank::to_string(cert.delta_method) << ")\n";
  return cert.all_pass() ? kOk : kCheckFailed;
}

struct LemmaArgs {
  std::uint64_t seed = 7;
  std::size_t cases = 1000;
};

int run_lemmas(const LemmaArgs& a) {
  namespace bt = lowrank::battery;
  bool ok = true;
  auto report = [&](const lowrank::CheckOutcome& c) {
    std::cout << lowrank::format_check(c) << '\n';
    ok = ok && c.pass;
  };
  report(bt::variational(a.seed, a.cases));
  report(bt::nuclear_sandwich(a.seed, a.cases));
  report(bt::nuclear_additivity(a.seed, a.cases));
  report(bt::restricted_orthogonality(a.seed, a.cases));
  const bt::UnitCircleReport uc = bt::unit_circle_max();
  report(uc.outcome);
  std::cout << "unit-circle maximum of x + a y (published value 2a/sqrt(a^2+1)):\n";
  std::cout << "alpha,paper_value,numeric_max,closed_form,argmax_x,argmax_y\n";
  for (const auto& row : uc.rows) {
    std::cout << lowrank::io::format_real(row.alpha) << ','
              << lowrank::io::format_real(row.paper_value) << ','
              << lowrank::io::format_real(row.numeric_max) << ','
              << lowrank::io::format_real(row.closed_form) << ','
              << lowrank::io::format_real(row.argmax_x) << ','
              << lowrank::io::format_real(row.argmax_y) << '\n';
  }
  const auto& r2 = uc.rows[2];
  std::cout << "erratum: for alpha = sqrt(2) paper_value " << lowrank::io::format_real(r2.paper_value)
            << (r2.paper_value < r2.numeric_max ? " < " : " >= ") << "numeric_max "
            << lowrank::io::format_real(r2.numeric_max) << '\n';
  std::cout << (ok ? "all batteries passed" : "some batteries FAILED") << '\n';
  return ok ? kOk : kCheckFailed;
}

struct SelftestArgs {
  std::uint64_t seed = 7;
  std::string data_dir = std::string(LOWRANK_SOURCE_DIR) + "/tests/data/sdp";
  std::size_t trials = 100;
};

int run_selftest(const SelftestArgs& a) {
  lowrank::acceptance::SuiteOptions opts;
  opts.seed = a.seed;
  opts.sdp_data_dir = a.data_dir;
  opts.bound_trials = a.trials;
  bool ok = true;
  lowrank::acceptance::run_suite(opts, [&](const lowrank::CheckOutcome& c) {
    std::cout << lowrank::format_check(c) << std::endl;
    ok = ok && c.pass;
  });
  return ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank recovery by nuclear norm minimization: solver, RIP estimates, "
               "error bound verification"};
  app.require_subcommand(1);

  RecoverArgs rec;
  auto* recover = app.add_subcommand("recover", "solve for X from an operator and observation");
  recover->add_option("--op", rec.op, "operator file")->required();
  recover->add_option("--obs", rec.obs, "observation file (b and epsilon)")->required();
  recover->add_option("--out", rec.out, "solution matrix file")->required();

  RipArgs rip;
  auto* rip_cmd = app.add_subcommand("rip", "estimate the rank-restricted isometry constant");
  rip_cmd->add_option("--op", rip.op, "operator file")->required();
  rip_cmd->add_option("--r", rip.r, "rank level")->required();
  rip_cmd->add_option("--method", rip.method, "mc, local or full")
      ->check(CLI::IsMember({"mc", "local", "full"}));
  rip_cmd->add_option("--seed", rip.seed, "seed");
  rip_cmd->add_option("--samples", rip.samples, "Monte Carlo samples");
  rip_cmd->add_option("--restarts", rip.restarts, "local search restarts");
  rip_cmd->add_option("--max-iters", rip.max_iters, "local search iterations per restart");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify-bound", "run the Monte Carlo bound experiment");
  verify->add_option("--config", ver.config, "experiment config")->required();
  verify->add_option("--seed", ver.seed, "override base_seed");
  verify->add_option("--trials", ver.trials, "override trials");
  verify->add_option("--threads", ver.threads, "override threads");
  verify->add_option("--mode", ver.mode, "paper or corrected")
      ->check(CLI::IsMember({"paper", "corrected"}));
  verify->add_option("--out", ver.out, "CSV path (default: config output_path, else stdout)");
  verify->add_flag("--timing", ver.timing, "write measured runtime_ms instead of NA");

  CertifyArgs cer;
  auto* certify = app.add_subcommand("certify", "evaluate the proof inequalities on one instance");
  certify->add_option("--op", cer.op, "operator file")->required();
  certify->add_option("--x", cer.x, "ground truth matrix file")->required();
  certify->add_option("--xstar", cer.xstar, "recovered matrix file")->required();
  certify->add_option("--obs", cer.obs, "observation file (b and epsilon)")->required();
  certify->add_option("--r", cer.r, "rank level")->required();
  certify->add_option("--mode", cer.mode, "paper or corrected")
      ->check(CLI::IsMember({"paper", "corrected"}));
  certify->add_option("--method", cer.method, "delta estimator: mc, local or full")
      ->check(CLI::IsMember({"mc", "local", "full"}));
  certify->add_option("--seed", cer.seed, "seed for the delta estimate");
  certify->add_option("--out", cer.out, "certificate CSV (default stdout)");

  LemmaArgs lem;
  auto* lemmas = app.add_subcommand("lemmas", "run the norm and orthogonality batteries");
  lemmas->add_option("--seed", lem.seed, "seed");
  lemmas->add_option("--cases", lem.cases, "cases per battery")->check(CLI::PositiveNumber);

  SelftestArgs st;
  auto* selftest = app.add_subcommand("selftest", "run the full acceptance suite");
  selftest->add_option("--seed", st.seed, "seed");
  selftest->add_option("--data-dir", st.data_dir, "directory with the frozen SDP cases");
  selftest->add_option("--trials", st.trials, "trials for the bound criteria")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*recover) return run_recover(rec);
    if (*rip_cmd) return run_rip(rip);
    if (*verify) return run_verify(ver);
    if (*certify) return run_certify(cer);
    if (*lemmas) return run_lemmas(lem);
    if (*selftest) return run_selftest(st);
  } catch (const lowrank::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n' << app.help();
    return kUsage;
  } catch (const lowrank::ShapeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const lowrank::RangeError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kCheckFailed;
  }
  return kUsage;
}
