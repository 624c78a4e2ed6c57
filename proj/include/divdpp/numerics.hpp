// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "divdpp/types.hpp"

namespace divdpp::numerics {

/// Absolute tolerance when checking |M - M^T|.
inline constexpr double kSymmetryTol = 1e-9;
/// A Cholesky pivot (or eigenvalue) below this is treated as "not PSD";
/// values in (-kPsdTol, 0) are numerical noise and clamped to zero.
inline constexpr double kPsdTol = 1e-9;
/// Eigenvalues are clamped to this floor inside log-determinants so that
/// rank-deficient matrices produce a large-but-finite value.
inline constexpr double kEigenvalueFloor = 1e-12;
/// Additive smoothing used by kl_divergence.
inline constexpr double kKlEpsilon = 1e-10;

/// Throws DimensionError unless m is square and symmetric within
/// kSymmetryTol (absolute, entrywise).
void require_symmetric(const Matrix& m, const char* where);

/// Eigenvalues of a symmetric matrix, ascending.
Vector symmetric_eigenvalues(const Matrix& m);

/// Lower-triangular Cholesky factor of a symmetric PSD matrix.
/// A pivot below -kPsdTol raises NotPsdError; small negative pivots are
/// clamped to zero so semidefinite inputs factor without error.
Matrix cholesky_lower(const Matrix& m);

/// Sum of log eigenvalues of a symmetric PSD matrix, each eigenvalue
/// clamped to kEigenvalueFloor.  An eigenvalue below -kPsdTol raises
/// NotPsdError.  The 0x0 matrix has log det 0.
double log_det_psd(const Matrix& m);

/// Inverse of a symmetric positive definite matrix via its spectral
/// decomposition.  Any eigenvalue <= kEigenvalueFloor raises
/// SingularMatrixError.  The result is exactly symmetric.
Matrix psd_inverse(const Matrix& m);

/// Numerically stable softmax (max-subtraction).  Empty input raises
/// EmptyInputError.  Output is strictly positive and sums to one.
Vector softmax(const Vector& v);

/// KL(p || q) in nats.  Both arguments are smoothed by adding kKlEpsilon
/// and renormalized, so zero entries are safe.  Lengths must agree.
double kl_divergence(const Vector& p, const Vector& q);

/// Shannon entropy of a distribution in nats, with 0 * log 0 == 0.
double entropy(const Vector& p);

}  // namespace divdpp::numerics
