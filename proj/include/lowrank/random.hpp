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

#ifndef LOWRANK_RANDOM_HPP_
#define LOWRANK_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

#include "lowrank/mat.hpp"
#include "lowrank/matops.hpp"

namespace lowrank {

enum class Field { kReal, kComplex };

// SplitMix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Key for child stream `id` of `seed`.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t id) {
  return mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL) + 0x9e3779b97f4a7c15ULL * (id + 1));
}

// Counter-based generator: draw i is mix64(key + i * golden). Any child
// stream is a pure function of (key, id), so per-trial and per-sample
// streams do not depend on how work is scheduled.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key) : key_(key) {}
  Stream(std::uint64_t seed, std::uint64_t id) : key_(derive_seed(seed, id)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  std::uint64_t key() const { return key_; }
  Stream split(std::uint64_t id) const { return Stream(key_, id); }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  // Standard normal by Box-Muller. Written out so streams are bit-identical
  // across standard library implementations.
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Circularly symmetric complex normal with E|z|^2 = 1.
  Complex complex_normal() {
    const double s = std::sqrt(0.5);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Entries i.i.d. with E|x_ij|^2 = variance.
inline Mat gaussian_mat(std::size_t rows, std::size_t cols, Stream& rng,
                        Field field = Field::kComplex, double variance = 1.0) {
  Mat out(rows, cols);
  const double scale = std::sqrt(variance);
  for (Complex& z : out.entries()) {
    z = field == Field::kComplex ? scale * rng.complex_normal()
                                 : Complex(scale * rng.normal(), 0.0);
  }
  return out;
}

inline CVec gaussian_vec(std::size_t n, Stream& rng) {
  CVec out(n);
  for (Complex& z : out) z = rng.complex_normal();
  return out;
}

// Haar-like unitary: left singular factor of a square Gaussian matrix.
inline Mat random_unitary(std::size_t n, Stream& rng, Field field = Field::kComplex) {
  return svd(gaussian_mat(n, n, rng, field)).left;
}

// G H^H with Gaussian m x r and n x r factors.
inline Mat random_low_rank(std::size_t m, std::size_t n, std::size_t r, Stream& rng,
                           Field field = Field::kComplex) {
  const Mat g = gaussian_mat(m, r, rng, field);
  const Mat h = gaussian_mat(n, r, rng, field);
  return g * h.adjoint();
}

}  // namespace lowrank

#endif  // LOWRANK_RANDOM_HPP_
