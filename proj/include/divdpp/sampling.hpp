// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "divdpp/random_source.hpp"
#include "divdpp/types.hpp"

namespace divdpp::sampling {

/// Exact spectral sampler for an L-ensemble.  Phase 1 selects each
/// eigenvector with probability lambda / (1 + lambda); phase 2 draws one
/// item at a time from the induced elementary ensemble, eliminating the
/// chosen coordinate and re-orthonormalizing the basis after each draw.
/// Returns a strictly increasing index list (possibly empty).
IndexList exact_sample(const Matrix& l, RandomSource& rng);

/// Indices of the k largest quality entries, ties broken toward the lower
/// index, returned strictly increasing.  Requires 1 <= k <= q.size().
IndexList topk_quality_subset(const Vector& quality, Index k);

/// {offset, offset + stride, offset + 2*stride, ...} below t_total.
/// Requires stride >= 1 and 0 <= offset < stride.
IndexList equidistant_subset(Index t_total, Index stride, Index offset);

/// Which half of the diversity objective a training step optimizes.
enum class MacroCondition {
  kImproveDiversityGivenQuality,
  kImproveQualityGivenDiversity,
};

/// Uniform coin flip between the two macro conditions.
MacroCondition pick_macro_condition(RandomSource& rng);

/// Exhaustive highest-determinant subset of the given size.  Ties go to
/// the lexicographically smallest subset.  Guarded: refuses instances with
/// more than 20 items or more than 200000 candidate subsets
/// (OracleTooLargeError).
IndexList brute_force_map(const Matrix& l, Index subset_size);

/// Number of size-k subsets of n items, saturating at a large cap.
double binomial_coefficient(Index n, Index k);

}  // namespace divdpp::sampling
