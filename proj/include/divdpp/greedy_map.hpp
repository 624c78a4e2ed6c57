// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "divdpp/types.hpp"

namespace divdpp::greedy {

/// Gains below this are considered numerically zero and stop the greedy
/// loop early.
inline constexpr double kGainFloor = 1e-12;

struct FgmResult {
  /// Chosen indices in selection order (not sorted).
  IndexList selected;
  /// log of the determinant gain of each step, aligned with `selected`.
  std::vector<double> log_gains;
  /// True when the loop stopped before reaching the requested size
  /// because every remaining gain fell below kGainFloor.
  bool early_stop = false;
};

/// Greedy MAP inference via incremental Cholesky updates.  Each step costs
/// O(T * |Y|) instead of one determinant per candidate; the sequence of
/// chosen indices is identical to the naive greedy that recomputes
/// det(L_{Y + i}) from scratch at every step (ties go to the lower index).
///
/// `l` must be symmetric PSD.  Like one-triangle LAPACK routines, only the
/// diagonal and the columns of selected items are read, so symmetry itself
/// is a precondition rather than a checked property; indefiniteness is
/// detected (negative diagonal at entry, or a negative determinant gain
/// during elimination) and raises NotPsdError.  A non-square kernel raises
/// DimensionError and an out-of-range subset_size raises ValueError.
FgmResult fgm_inference(const Matrix& l, Index subset_size);

struct BfgmItem {
  FgmResult result;
  bool failed = false;   // this item raised; siblings are unaffected
  std::string error;
};

/// Batched greedy MAP.  All kernels in the batch must share the same size;
/// results are exactly (bit-for-bit on indices) those of fgm_inference run
/// per item.  A per-item failure is reported in its slot without aborting
/// the rest.  `threads` > 1 splits the batch across worker threads.
std::vector<BfgmItem> bfgm_inference(const std::vector<Matrix>& batch,
                                     Index subset_size, int threads = 1);

}  // namespace divdpp::greedy
