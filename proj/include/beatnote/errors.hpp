// Copyright 2026 The Beatnote Authors
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

#ifndef BEATNOTE_ERRORS_HPP_
#define BEATNOTE_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace beatnote {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Inputs that make a model undefined (all-zero coefficients, a = 0, ...).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// Quadrature or finite-difference grid too coarse for the request.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Spectral amplitude not normalized on the integration grid.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a point where a formula has a pole (zero information, B = 1).
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Density matrix failing Hermiticity, trace or positivity checks.
class MatrixError : public Error {
 public:
  using Error::Error;
};

/// Too few samples or a span that does not constrain the model.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

/// Nonlinear least squares did not converge.
class FitError : public Error {
 public:
  using Error::Error;
};

/// Likelihood maximum sits on the search boundary.
class OutOfRangeError : public Error {
 public:
  using Error::Error;
};

/// A probability model evaluates to a non-positive value where it is used.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Reference fringes violate |b| <= a or the four-channel sum rule.
class ValidityError : public Error {
 public:
  using Error::Error;
};

/// Measured data inconsistent with the assumed profile shape.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Iterative setpoint search failed.
class SearchError : public Error {
 public:
  using Error::Error;
};

/// Malformed input file or configuration.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace beatnote

#endif  // BEATNOTE_ERRORS_HPP_
