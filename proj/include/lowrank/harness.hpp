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

// Monte Carlo runner for the recovery error bound. Each trial samples an
// operator and a ground truth, then for every epsilon observes, solves,
// evaluates the bound and certifies the intermediate inequalities.
//
// Config files hold one `key = value` per line; `#` starts a comment.

#ifndef LOWRANK_HARNESS_HPP_
#define LOWRANK_HARNESS_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lowrank/error.hpp"
#include "lowrank/guarantee.hpp"
#include "lowrank/io.hpp"
#include "lowrank/mat.hpp"
#include "lowrank/matops.hpp"
#include "lowrank/measurement.hpp"
#include "lowrank/random.hpp"
#include "lowrank/rip.hpp"
#include "lowrank/solver.hpp"

namespace lowrank {

enum class TailMode { kExactRank, kPowerDecay };
enum class DeltaMethod { kMc, kLocal, kFull };

inline const char* to_string(DeltaMethod d) {
  switch (d) {
    case DeltaMethod::kMc:
      return "mc";
    case DeltaMethod::kLocal:
      return "local";
    case DeltaMethod::kFull:
      return "full";
  }
  return "?";
}

struct ExperimentConfig {
  std::size_t m = 10;
  std::size_t n = 10;
  std::size_t r = 1;
  std::size_t p = 140;
  std::vector<double> epsilon_grid{0.01, 0.05};
  TailMode tail_mode = TailMode::kExactRank;
  double tail_rate = 1.0;   // power_decay(rate)
  double tail_norm = 0.0;   // ||X - X_r||_F of the generated tail
  std::size_t trials = 1;
  std::uint64_t base_seed = 0;
  BoundMode mode = BoundMode::kCorrected;
  DeltaMethod delta_method = DeltaMethod::kLocal;
  std::string output_path;
  Field field = Field::kComplex;
  std::size_t threads = 1;
  bool certify = true;
  std::size_t mc_samples = 2000;
  std::size_t restarts = 16;
  std::size_t max_iters = 200;
  // Write measured runtimes; otherwise runtime_ms is NA so output is
  // reproducible byte for byte.
  bool timing = false;
};

inline void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& msg) { throw ParseError("config: " + msg); };
  if (c.m == 0 || c.n == 0 || c.p == 0) fail("m, n, p must be positive");
  if (c.r == 0 || c.r >= std::min(c.m, c.n)) fail("need 1 <= r < min(m, n)");
  if (c.certify && 3 * c.r > std::min(c.m, c.n)) fail("certification needs 3r <= min(m, n)");
  if (c.trials == 0) fail("trials must be >= 1");
  if (c.epsilon_grid.empty()) fail("epsilon_grid is empty");
  for (double e : c.epsilon_grid) {
    if (!(e >= 0.0) || !std::isfinite(e)) fail("epsilon values must be finite and >= 0");
  }
  if (c.tail_mode == TailMode::kPowerDecay && !(c.tail_rate > 0.0)) {
    fail("power_decay rate must be positive");
  }
  if (!(c.tail_norm >= 0.0)) fail("tail_norm must be >= 0");
  if (c.threads == 0) fail("threads must be >= 1");
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::size_t parse_size(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  unsigned long long out = 0;
  try {
    if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
    out = std::stoull(v, &used);
  } catch (const std::exception&) {
    throw ParseError("config: '" + key + "' expects a count, got '" + v + "'");
  }
  if (used != v.size()) throw ParseError("config: '" + key + "' expects a count, got '" + v + "'");
  return static_cast<std::size_t>(out);
}

inline double parse_double(const std::string& key, const std::string& v) {
  try {
    return io::detail::parse_real(v, v);
  } catch (const ParseError&) {
    throw ParseError("config: '" + key + "' expects a real, got '" + v + "'");
  }
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError("config: '" + key + "' expects true/false, got '" + v + "'");
}

inline std::vector<double> parse_grid(const std::string& v) {
  std::string s = v;
  for (char& ch : s) {
    if (ch == ',' || ch == '{' || ch == '}' || ch == '[' || ch == ']') ch = ' ';
  }
  std::vector<double> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(parse_double("epsilon_grid", tok));
  return out;
}

}  // namespace detail

inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  std::size_t lineno = 0;
  std::map<std::string, std::size_t> seen;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));
    if (val.empty()) throw ParseError("config line " + std::to_string(lineno) + ": empty value");
    if (seen.count(key)) {
      throw ParseError("config line " + std::to_string(lineno) + ": duplicate key '" + key +
                       "'");
    }
    seen[key] = lineno;

    if (key == "m") {
      c.m = detail::parse_size(key, val);
    } else if (key == "n") {
      c.n = detail::parse_size(key, val);
    } else if (key == "r") {
      c.r = detail::parse_size(key, val);
    } else if (key == "p") {
      c.p = detail::parse_size(key, val);
    } else if (key == "epsilon_grid") {
      c.epsilon_grid = detail::parse_grid(val);
    } else if (key == "tail_mode") {
      if (val == "exact_rank") {
        c.tail_mode = TailMode::kExactRank;
      } else if (val.rfind("power_decay(", 0) == 0 && val.back() == ')') {
        c.tail_mode = TailMode::kPowerDecay;
        c.tail_rate = detail::parse_double(key, val.substr(12, val.size() - 13));
      } else {
        throw ParseError("config: tail_mode must be exact_rank or power_decay(rate)");
      }
    } else if (key == "tail_norm") {
      c.tail_norm = detail::parse_double(key, val);
    } else if (key == "trials") {
      c.trials = detail::parse_size(key, val);
    } else if (key == "base_seed") {
      c.base_seed = detail::parse_size(key, val);
    } else if (key == "mode") {
      if (val == "paper") {
        c.mode = BoundMode::kPaper;
      } else if (val == "corrected") {
        c.mode = BoundMode::kCorrected;
      } else {
        throw ParseError("config: mode must be paper or corrected");
      }
    } else if (key == "delta_method") {
      if (val == "mc") {
        c.delta_method = DeltaMethod::kMc;
      } else if (val == "local") {
        c.delta_method = DeltaMethod::kLocal;
      } else if (val == "full") {
        c.delta_method = DeltaMethod::kFull;
      } else {
        throw ParseError("config: delta_method must be mc, local or full");
      }
    } else if (key == "output_path") {
      c.output_path = val;
    } else if (key == "field") {
      if (val == "real") {
        c.field = Field::kReal;
      } else if (val == "complex") {
        c.field = Field::kComplex;
      } else {
        throw ParseError("config: field must be real or complex");
      }
    } else if (key == "threads") {
      c.threads = detail::parse_size(key, val);
    } else if (key == "certify") {
      c.certify = detail::parse_bool(key, val);
    } else if (key == "mc_samples") {
      c.mc_samples = detail::parse_size(key, val);
    } else if (key == "restarts") {
      c.restarts = detail::parse_size(key, val);
    } else if (key == "max_iters") {
      c.max_iters = detail::parse_size(key, val);
    } else if (key == "timing") {
      c.timing = detail::parse_bool(key, val);
    } else {
      throw ParseError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  validate(c);
  return c;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path + "'");
  return parse_config(in);
}

struct TrialRecord {
  std::size_t trial_index = 0;
  double epsilon = 0.0;
  double tail_err = 0.0;
  double delta_hat = 0.0;
  double k0 = 0.0;
  double k1 = 0.0;
  double bound = 0.0;
  double err = 0.0;
  double bound_ratio = 0.0;
  std::size_t solver_iterations = 0;
  std::size_t cert_pass_count = 0;
  std::size_t cert_total = 0;
  double runtime_ms = 0.0;
  // ok | vacuous (delta_hat at or above the threshold) | error: <message>
  std::string status = "ok";
  std::string delta_method;
  bool solver_converged = false;

  // Kept in memory for callers; not part of the CSV.
  std::optional<ProofCertificate> certificate;
  bool delta_converged = true;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialRecord> records;  // sorted by (trial_index, epsilon)
};

inline constexpr const char* kTrialCsvHeader =
    "trial_index,epsilon,tail_err,delta_hat,k0,k1,bound,err,bound_ratio,solver_iterations,"
    "cert_pass_count,cert_total,runtime_ms,status,delta_method,solver_converged";

namespace detail {

// Ground truth for one trial: X_low = G H^H / ||G H^H||_F plus, for
// power_decay, a tail with singular values proportional to j^-rate for
// j > r on the orthogonal complement of X_low's singular frames, scaled to
// Frobenius norm tail_norm.
inline Mat sample_ground_truth(const ExperimentConfig& c, Stream& rng) {
  Mat low = random_low_rank(c.m, c.n, c.r, rng, c.field);
  low *= Complex(1.0 / frobenius_norm(low), 0.0);
  if (c.tail_mode == TailMode::kExactRank || c.tail_norm == 0.0) return low;

  const Mat rot_l = random_unitary(c.m, rng, c.field);
  const Mat rot_r = random_unitary(c.n, rng, c.field);
  const Svd s = svd(low);
  const std::size_t k = s.k();
  // Random orthonormal bases of the complements, via a random rotation of the
  // completed columns r..k-1.
  auto complement = [&](const Mat& basis, const Mat& rot) {
    Mat w = rot.leading_cols(k);
    for (std::size_t j = 0; j < c.r; ++j) {
      const CVec q = basis.col(j);
      for (std::size_t c2 = 0; c2 < k; ++c2) {
        const CVec col = w.col(c2);
        const Complex proj = vdot(q, col);
        CVec upd(col.size());
        for (std::size_t i = 0; i < col.size(); ++i) upd[i] = col[i] - proj * q[i];
        w.set_col(c2, upd);
      }
    }
    return svd(w).left;  // orthonormal, spans the complement (rank k - r)
  };
  const Mat cu = complement(s.left, rot_l);
  const Mat cv = complement(s.right, rot_r);
  std::vector<double> sig;
  double acc = 0.0;
  for (std::size_t j = c.r + 1; j <= k; ++j) {
    sig.push_back(std::pow(static_cast<double>(j), -c.tail_rate));
    acc += sig.back() * sig.back();
  }
  const double scale = c.tail_norm / std::sqrt(acc);
  Mat out = low;
  for (std::size_t j = 0; j < sig.size(); ++j) {
    out.axpy(Complex(scale * sig[j], 0.0), Mat::outer(cu.col(j), cv.col(j)));
  }
  return out;
}

inline RipEstimate estimate_delta(const ExperimentConfig& c, const MeasOp& a,
                                  std::uint64_t seed) {
  const std::size_t level = 3 * c.r <= std::min(c.m, c.n) ? 3 * c.r : std::min(c.m, c.n);
  switch (c.delta_method) {
    case DeltaMethod::kMc:
      return delta_mc(a, level, c.mc_samples, seed);
    case DeltaMethod::kFull:
      return delta_full(a);
    case DeltaMethod::kLocal:
      break;
  }
  LocalSearchOptions opts;
  opts.restarts = c.restarts;
  opts.max_iters = c.max_iters;
  opts.mc_samples = c.mc_samples;
  return delta_local(a, level, seed, opts);
}

inline std::vector<TrialRecord> run_trial(const ExperimentConfig& c, std::size_t t) {
  using Clock = std::chrono::steady_clock;
  const std::uint64_t key = derive_seed(c.base_seed, t);
  std::vector<TrialRecord> out;
  const auto start = Clock::now();

  MeasOp a = gaussian_op(c.m, c.n, c.p, derive_seed(key, 0), c.field);
  Stream truth_rng(key, 1);
  const Mat x = sample_ground_truth(c, truth_rng);
  const double tail = tail_error(svd(x), c.r);

  std::optional<RipEstimate> est;
  std::string delta_error;
  try {
    est = estimate_delta(c, a, derive_seed(key, 2));
  } catch (const std::exception& e) {
    delta_error = e.what();
  }
  const double setup_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();

  std::vector<double> grid = c.epsilon_grid;
  std::sort(grid.begin(), grid.end());
  for (std::size_t e = 0; e < grid.size(); ++e) {
    const auto t0 = Clock::now();
    TrialRecord rec;
    rec.trial_index = t;
    rec.epsilon = grid[e];
    rec.tail_err = tail;
    rec.delta_method = to_string(c.delta_method);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    rec.err = nan;
    rec.bound_ratio = nan;
    try {
      if (!est) throw Error("delta estimation failed: " + delta_error);
      rec.delta_hat = est->delta_hat;
      rec.delta_converged = est->converged;
      if (rec.delta_hat < bound_threshold(c.mode)) {
        const GuaranteeConstants k = constants(rec.delta_hat, c.mode);
        rec.k0 = k.k0;
        rec.k1 = k.k1;
        rec.bound = error_bound(k, tail, rec.epsilon);
      } else {
        rec.k0 = rec.k1 = rec.bound = std::numeric_limits<double>::infinity();
        rec.status = "vacuous";
      }
      const Observation obs = observe(a, x, rec.epsilon, derive_seed(key, 3 + e));
      const SolveResult sol = solve_ellipsoid(a, obs.b, rec.epsilon);
      rec.err = frobenius_norm(sol.x_star - x);
      rec.bound_ratio = rec.bound > 0.0 ? rec.err / rec.bound
                                        : (rec.err == 0.0 ? 0.0
                                                          : std::numeric_limits<double>::infinity());
      rec.solver_iterations = sol.iterations;
      rec.solver_converged = sol.converged;
      if (c.certify) {
        ProofCertificate cert = lowrank::certify(a, x, sol.x_star, obs.b, rec.epsilon, c.r,
                                                 *est, c.mode);
        rec.cert_pass_count = cert.pass_count();
        rec.cert_total = cert.records.size();
        rec.certificate = std::move(cert);
      }
    } catch (const std::exception& ex) {
      std::string msg = ex.what();
      for (char& ch : msg) {
        if (ch == ',' || ch == '\n' || ch == '"') ch = ';';
      }
      rec.status = "error: " + msg;
    }
    rec.runtime_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count() +
                     (e == 0 ? setup_ms : 0.0);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace detail

// Trials run on config.threads workers; each trial's streams depend only on
// (base_seed, trial index), and results are gathered by index.
inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  validate(config);
  std::vector<std::vector<TrialRecord>> slots(config.trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t t = next++; t < config.trials && !failed; t = next++) {
      try {
        slots[t] = detail::run_trial(config, t);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::min(config.threads, config.trials);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  result.config = config;
  for (auto& slot : slots) {
    for (auto& rec : slot) result.records.push_back(std::move(rec));
  }
  return result;
}

inline void write_trial_csv(std::ostream& out, const std::vector<TrialRecord>& records,
                            bool timing) {
  using io::format_real;
  out << kTrialCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.trial_index << ',' << format_real(r.epsilon) << ',' << format_real(r.tail_err)
        << ',' << format_real(r.delta_hat) << ',' << format_real(r.k0) << ','
        << format_real(r.k1) << ',' << format_real(r.bound) << ',' << format_real(r.err) << ','
        << format_real(r.bound_ratio) << ',' << r.solver_iterations << ','
        << r.cert_pass_count << ',' << r.cert_total << ','
        << (timing ? format_real(r.runtime_ms) : std::string("NA")) << ',' << r.status << ','
        << r.delta_method << ',' << (r.solver_converged ? "true" : "false") << '\n';
  }
}

inline void write_trial_csv(const std::string& path, const ExperimentResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  write_trial_csv(out, result.records, result.config.timing);
}

}  // namespace lowrank

#endif  // LOWRANK_HARNESS_HPP_
