// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "divdpp/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "divdpp/errors.hpp"
#include "divdpp/lensemble.hpp"
#include "divdpp/numerics.hpp"

namespace divdpp::sampling {

namespace {

// Drop tolerance for the modified Gram-Schmidt pass: a column whose
// remainder norm falls below this is linearly dependent and removed.
constexpr double kOrthoTol = 1e-12;

}  // namespace

IndexList exact_sample(const Matrix& l, RandomSource& rng) {
  numerics::require_symmetric(l, "exact_sample");
  const Index t = l.rows();
  if (t == 0) return {};

  Eigen::SelfAdjointEigenSolver<Matrix> solver(l);
  if (solver.info() != Eigen::Success) {
    throw Error("exact_sample: eigendecomposition did not converge");
  }
  const Vector& eigs = solver.eigenvalues();
  if (eigs(0) < -numerics::kPsdTol) {
    throw NotPsdError("exact_sample: eigenvalue " + std::to_string(eigs(0)) +
                      " below tolerance");
  }

  // Phase 1: pick the elementary ensemble.
  std::vector<Vector> basis;
  for (Index c = 0; c < t; ++c) {
    const double lambda = std::max(eigs(c), 0.0);
    const double p = lambda / (1.0 + lambda);
    if (rng.uniform() < p) basis.push_back(solver.eigenvectors().col(c));
  }

  // Phase 2: draw |basis| items, eliminating one coordinate per draw.
  IndexList result;
  result.reserve(basis.size());
  while (!basis.empty()) {
    const auto k = basis.size();
    // Marginal of item i is (1/k) * sum_c V(i,c)^2.
    Vector probs = Vector::Zero(t);
    for (const Vector& col : basis) probs += col.cwiseAbs2();
    probs /= static_cast<double>(k);

    double r = rng.uniform();
    Index item = -1;
    for (Index i = 0; i < t; ++i) {
      r -= probs(i);
      if (r <= 0.0) {
        item = i;
        break;
      }
    }
    if (item < 0) probs.maxCoeff(&item);  // roundoff left r slightly > 0
    result.push_back(item);

    // Eliminate coordinate `item`: pivot on the column with the largest
    // component there, subtract it from the others, drop it.
    std::size_t pivot = 0;
    for (std::size_t c = 1; c < k; ++c) {
      if (std::abs(basis[c](item)) > std::abs(basis[pivot](item))) pivot = c;
    }
    const Vector pivot_col = basis[pivot];
    basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(pivot));
    if (pivot_col(item) != 0.0) {
      for (Vector& col : basis) {
        col -= (col(item) / pivot_col(item)) * pivot_col;
      }
    }

    // Modified Gram-Schmidt re-orthonormalization; drop dependent columns.
    std::vector<Vector> ortho;
    ortho.reserve(basis.size());
    for (Vector& col : basis) {
      for (const Vector& prev : ortho) col -= prev.dot(col) * prev;
      const double norm = col.norm();
      if (norm < kOrthoTol) continue;
      ortho.push_back(col / norm);
    }
    basis = std::move(ortho);
  }

  std::sort(result.begin(), result.end());
  return result;
}

IndexList topk_quality_subset(const Vector& quality, Index k) {
  const Index t = quality.size();
  if (k < 1 || k > t) {
    throw ValueError("topk_quality_subset: k = " + std::to_string(k) +
                     " out of range [1, " + std::to_string(t) + "]");
  }
  IndexList order(static_cast<std::size_t>(t));
  std::iota(order.begin(), order.end(), Index{0});
  // Stable sort keeps the lower index first among equal qualities.
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return quality(a) > quality(b);
  });
  order.resize(static_cast<std::size_t>(k));
  std::sort(order.begin(), order.end());
  return order;
}

IndexList equidistant_subset(Index t_total, Index stride, Index offset) {
  if (t_total < 0) throw ValueError("equidistant_subset: negative size");
  if (stride < 1) {
    throw ValueError("equidistant_subset: stride must be >= 1");
  }
  if (offset < 0 || offset >= stride) {
    throw ValueError("equidistant_subset: offset must be in [0, stride)");
  }
  IndexList out;
  for (Index i = offset; i < t_total; i += stride) out.push_back(i);
  return out;
}

MacroCondition pick_macro_condition(RandomSource& rng) {
  return rng.uniform() < 0.5 ? MacroCondition::kImproveDiversityGivenQuality
                             : MacroCondition::kImproveQualityGivenDiversity;
}

double binomial_coefficient(Index n, Index k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double acc = 1.0;
  for (Index i = 1; i <= k; ++i) {
    acc *= static_cast<double>(n - k + i) / static_cast<double>(i);
    if (acc > 1e18) return 1e18;  // saturate, caller only compares to a cap
  }
  return acc;
}

IndexList brute_force_map(const Matrix& l, Index subset_size) {
  numerics::require_symmetric(l, "brute_force_map");
  const Index t = l.rows();
  if (subset_size < 1 || subset_size > t) {
    throw ValueError("brute_force_map: subset size " +
                     std::to_string(subset_size) + " out of range [1, " +
                     std::to_string(t) + "]");
  }
  if (t > 20 || binomial_coefficient(t, subset_size) > 200000.0) {
    throw OracleTooLargeError(
        "brute_force_map: instance too large to enumerate (" +
        std::to_string(t) + " choose " + std::to_string(subset_size) + ")");
  }

  IndexList current(static_cast<std::size_t>(subset_size));
  std::iota(current.begin(), current.end(), Index{0});
  IndexList best;
  double best_det = -std::numeric_limits<double>::infinity();
  while (true) {
    const double det =
        lensemble::principal_submatrix(l, current).determinant();
    if (det > best_det) {  // strict: first maximizer in lexicographic order
      best_det = det;
      best = current;
    }
    // Advance to the next combination in lexicographic order.
    Index pos = subset_size - 1;
    while (pos >= 0 &&
           current[static_cast<std::size_t>(pos)] == t - subset_size + pos) {
      --pos;
    }
    if (pos < 0) break;
    ++current[static_cast<std::size_t>(pos)];
    for (Index i = pos + 1; i < subset_size; ++i) {
      current[static_cast<std::size_t>(i)] =
          current[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  return best;
}

}  // namespace divdpp::sampling
