// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "divdpp/types.hpp"

namespace divdpp::lensemble {

/// Cosine-similarity Gram matrix of the rows of `features` (T x C).
/// Rows are unit-normalized first; an all-zero row raises
/// DegenerateFeatureError.  Negative similarities are kept as-is.
/// The result is exactly symmetric with unit diagonal, entries in [-1, 1].
Matrix similarity_from_features(const Matrix& features);

/// Per-position quality from a stack of attention maps.  Each layer is a
/// (generation steps) x (source positions) matrix of non-negative weights;
/// quality of source position j is the mean of column j across all layers
/// and generation steps.  The result is not renormalized.
Vector quality_from_attention(const std::vector<Matrix>& layers);

/// L = diag(q) * S * diag(q), built symmetric by construction.
Matrix build_l(const Vector& quality, const Matrix& similarity);

/// Marginal kernel K = I - (L + I)^-1.  Also equal to L (L + I)^-1; the
/// implementation cross-checks the two forms and fails loudly if they
/// disagree beyond 1e-8.
Matrix marginal_kernel(const Matrix& l);

/// Rows and columns of `m` restricted to `indices` (strictly increasing,
/// in range).  An empty index list yields the 0x0 matrix.
Matrix principal_submatrix(const Matrix& m, const IndexList& indices);

/// Normalized subset probability det(L_Y) / det(L + I), computed in log
/// space.  The empty subset is allowed and scores 1 / det(L + I).
double qd_score(const Matrix& l, const IndexList& subset);

/// Throws unless `indices` is strictly increasing with values in [0, n).
void validate_subset(const IndexList& indices, Index n, const char* where);

}  // namespace divdpp::lensemble
