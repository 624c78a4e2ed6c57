// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace divdpp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
// Row-major variant: rows are contiguous in memory, which the batched
// greedy kernels rely on for vectorized row updates.
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Index = Eigen::Index;
using IndexList = std::vector<Index>;

}  // namespace divdpp
