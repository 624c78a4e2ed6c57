// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace divdpp {

/// Base class for every error raised by the library.  Callers that only
/// care about "did it work" can catch this one type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Shape, length or symmetry mismatch between operands.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid parameter value (index out of range, weight out of [0,1], ...).
class ValueError : public Error {
 public:
  using Error::Error;
};

/// A matrix required to be positive semi-definite is not.
class NotPsdError : public Error {
 public:
  using Error::Error;
};

/// A matrix required to be invertible is singular at working precision.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// An operand that must be non-empty is empty.
class EmptyInputError : public Error {
 public:
  using Error::Error;
};

/// A feature row is all zeros and cannot be cosine-normalized.
class DegenerateFeatureError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive reference computation was asked to enumerate more
/// subsets than the configured guard allows.
class OracleTooLargeError : public Error {
 public:
  using Error::Error;
};

/// A metric is undefined for the given input (e.g. empty summary).
class UndefinedMetricError : public Error {
 public:
  using Error::Error;
};

/// Training loss exceeded the divergence guard.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

}  // namespace divdpp
