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

// Text formats shared by the CLI.
//
//   matrix file       "m n", then m lines of n entries
//   operator file     "p m n", then p lines of mn entries (column-major vec)
//   observation file  "p epsilon", then p lines of one entry each
//
// An entry is `a` or `a+bi` / `a-bi` with no inner spaces; columns are
// separated by single spaces. Reals are printed with 17 significant digits.

#ifndef LOWRANK_IO_HPP_
#define LOWRANK_IO_HPP_

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lowrank/error.hpp"
#include "lowrank/mat.hpp"
#include "lowrank/measurement.hpp"

namespace lowrank::io {

inline std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string format_entry(Complex z) {
  if (z.imag() == 0.0) return format_real(z.real());
  std::string out = format_real(z.real());
  if (!std::signbit(z.imag())) out += '+';
  out += format_real(z.imag());
  out += 'i';
  return out;
}

namespace detail {

inline double parse_real(std::string_view token, std::string_view whole) {
  const std::string s(token);
  if (s.empty()) throw ParseError("empty number in entry '" + std::string(whole) + "'");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ParseError("bad number '" + s + "' in entry '" + std::string(whole) + "'");
  }
  return v;
}

}  // namespace detail

inline Complex parse_entry(std::string_view token) {
  if (token.empty()) throw ParseError("empty entry");
  if (token.back() != 'i') return {detail::parse_real(token, token), 0.0};
  // Split at the last sign that is not a leading sign or an exponent sign.
  const std::string_view body = token.substr(0, token.size() - 1);
  std::size_t split = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string_view::npos) {
    throw ParseError("entry '" + std::string(token) + "' is not of the form a+bi");
  }
  const double re = detail::parse_real(body.substr(0, split), token);
  const double im = detail::parse_real(body.substr(split), token);
  return {re, im};
}

namespace detail {

inline std::vector<std::string> split_spaces(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline bool next_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) return true;
  }
  return false;
}

inline std::size_t parse_count(const std::string& tok, const char* what) {
  char* end = nullptr;
  const long long v = std::strtoll(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size() || v <= 0) {
    throw ParseError(std::string("bad ") + what + " '" + tok + "'");
  }
  return static_cast<std::size_t>(v);
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  return out;
}

inline void read_rows(std::istream& in, std::size_t rows, std::size_t cols, CVec& dst,
                      const char* what) {
  std::string line;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!next_line(in, line)) {
      throw ParseError(std::string(what) + ": expected " + std::to_string(rows) +
                       " rows, got " + std::to_string(i));
    }
    const auto toks = split_spaces(line);
    if (toks.size() != cols) {
      throw ParseError(std::string(what) + ": row " + std::to_string(i + 1) + " has " +
                       std::to_string(toks.size()) + " entries, expected " +
                       std::to_string(cols));
    }
    for (std::size_t j = 0; j < cols; ++j) dst[i * cols + j] = parse_entry(toks[j]);
  }
}

}  // namespace detail

inline Mat read_matrix(std::istream& in) {
  std::string line;
  if (!detail::next_line(in, line)) throw ParseError("matrix: missing header");
  const auto head = detail::split_spaces(line);
  if (head.size() != 2) throw ParseError("matrix: header must be 'm n'");
  const std::size_t m = detail::parse_count(head[0], "row count");
  const std::size_t n = detail::parse_count(head[1], "column count");
  CVec data(m * n);
  detail::read_rows(in, m, n, data, "matrix");
  return Mat(m, n, std::move(data));
}

inline void write_matrix(std::ostream& out, const Mat& x) {
  out << x.rows() << ' ' << x.cols() << '\n';
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      if (j) out << ' ';
      out << format_entry(x(i, j));
    }
    out << '\n';
  }
}

inline MeasOp read_operator(std::istream& in) {
  std::string line;
  if (!detail::next_line(in, line)) throw ParseError("operator: missing header");
  const auto head = detail::split_spaces(line);
  if (head.size() != 3) throw ParseError("operator: header must be 'p m n'");
  const std::size_t p = detail::parse_count(head[0], "measurement count");
  const std::size_t m = detail::parse_count(head[1], "row count");
  const std::size_t n = detail::parse_count(head[2], "column count");
  CVec data(p * m * n);
  detail::read_rows(in, p, m * n, data, "operator");
  return MeasOp(m, n, Mat(p, m * n, std::move(data)));
}

inline void write_operator(std::ostream& out, const MeasOp& a) {
  out << a.p() << ' ' << a.m() << ' ' << a.n() << '\n';
  const Mat& op = a.op_matrix();
  for (std::size_t i = 0; i < op.rows(); ++i) {
    for (std::size_t j = 0; j < op.cols(); ++j) {
      if (j) out << ' ';
      out << format_entry(op(i, j));
    }
    out << '\n';
  }
}

inline Observation read_observation(std::istream& in) {
  std::string line;
  if (!detail::next_line(in, line)) throw ParseError("observation: missing header");
  const auto head = detail::split_spaces(line);
  if (head.size() != 2) throw ParseError("observation: header must be 'p epsilon'");
  Observation obs;
  const std::size_t p = detail::parse_count(head[0], "measurement count");
  obs.epsilon = detail::parse_real(head[1], line);
  if (obs.epsilon < 0.0) throw ParseError("observation: epsilon must be nonnegative");
  obs.b.resize(p);
  detail::read_rows(in, p, 1, obs.b, "observation");
  return obs;
}

inline void write_observation(std::ostream& out, const Observation& obs) {
  out << obs.b.size() << ' ' << format_real(obs.epsilon) << '\n';
  for (const Complex& z : obs.b) out << format_entry(z) << '\n';
}

inline Mat load_matrix(const std::string& path) {
  auto in = detail::open_in(path);
  return read_matrix(in);
}

inline MeasOp load_operator(const std::string& path) {
  auto in = detail::open_in(path);
  return read_operator(in);
}

inline Observation load_observation(const std::string& path) {
  auto in = detail::open_in(path);
  return read_observation(in);
}

inline void save_matrix(const std::string& path, const Mat& x) {
  auto out = detail::open_out(path);
  write_matrix(out, x);
}

inline void save_operator(const std::string& path, const MeasOp& a) {
  auto out = detail::open_out(path);
  write_operator(out, a);
}

inline void save_observation(const std::string& path, const Observation& obs) {
  auto out = detail::open_out(path);
  write_observation(out, obs);
}

}  // namespace lowrank::io

#endif  // LOWRANK_IO_HPP_
