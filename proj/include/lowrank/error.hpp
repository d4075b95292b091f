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

#ifndef LOWRANK_ERROR_HPP_
#define LOWRANK_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace lowrank {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operand shapes do not agree (rows/cols/lengths).
class ShapeError : public Error {
 public:
  using Error::Error;
};

// A scalar argument lies outside its admissible range.
class RangeError : public Error {
 public:
  using Error::Error;
};

// A documented precondition on the inputs does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed text input (matrix, operator, observation or config files).
class ParseError : public Error {
 public:
  using Error::Error;
};

// The Jacobi SVD hit its sweep cap. Carries the last off-diagonal measure.
class FactorizationError : public Error {
 public:
  FactorizationError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// The ellipsoid/affine solver could not reach the feasible set.
class InfeasibleError : public Error {
 public:
  InfeasibleError(const std::string& what, double min_residual)
      : Error(what), min_residual_(min_residual) {}
  double min_residual() const { return min_residual_; }

 private:
  double min_residual_;
};

// The isometry constant is at or above the admissible threshold.
class ConditionViolated : public Error {
 public:
  using Error::Error;
};

}  // namespace lowrank

#endif  // LOWRANK_ERROR_HPP_
