// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "divdpp/greedy_map.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "divdpp/errors.hpp"
#include "divdpp/numerics.hpp"

namespace divdpp::greedy {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Argmax of `gains` over entries whose flag is set; ties go to the lowest
// index (strict > while scanning upward).  Returns -1 if nothing is
// available.
Index masked_argmax(const Vector& gains, const std::vector<char>& available,
                    double* best_gain) {
  Index best = -1;
  double top = kNegInf;
  for (Index i = 0; i < gains.size(); ++i) {
    if (available[static_cast<std::size_t>(i)] && gains(i) > top) {
      top = gains(i);
      best = i;
    }
  }
  *best_gain = top;
  return best;
}

// Entry validation.  Symmetry is a documented precondition (only the
// diagonal and selected columns are ever read, as in one-triangle LAPACK
// routines); indefiniteness that a symmetry scan could never see is
// caught here via the diagonal and during elimination via the gains.
void validate_kernel(const Matrix& l, const char* where) {
  if (l.rows() != l.cols()) {
    throw DimensionError(std::string(where) + ": kernel is " +
                         std::to_string(l.rows()) + "x" +
                         std::to_string(l.cols()) + ", expected square");
  }
  if (l.rows() > 0 && l.diagonal().minCoeff() < -numerics::kPsdTol) {
    throw NotPsdError(std::string(where) +
                      ": negative diagonal entry, kernel is not PSD");
  }
}

}  // namespace

FgmResult fgm_inference(const Matrix& l, Index subset_size) {
  validate_kernel(l, "fgm_inference");
  const Index n = l.rows();
  if (subset_size < 1 || subset_size > n) {
    throw ValueError("fgm_inference: subset size " +
                     std::to_string(subset_size) + " out of range [1, " +
                     std::to_string(n) + "]");
  }

  // gains(i) tracks the squared Cholesky pivot of candidate i, i.e. the
  // determinant ratio det(L_{Y+i}) / det(L_Y); row i of coeffs accumulates
  // the Cholesky coefficients c_i of item i against the selected set.
  Vector gains = l.diagonal();
  RowMatrix coeffs(n, subset_size);
  std::vector<char> available(static_cast<std::size_t>(n), 1);

  FgmResult out;
  out.selected.reserve(static_cast<std::size_t>(subset_size));
  out.log_gains.reserve(static_cast<std::size_t>(subset_size));
  for (Index round = 0; round < subset_size; ++round) {
    double best_gain = kNegInf;
    const Index best = masked_argmax(gains, available, &best_gain);
    // A PSD kernel keeps every determinant gain nonnegative up to roundoff;
    // a best gain this far below zero certifies an indefinite input.
    if (best >= 0 && best_gain < -numerics::kPsdTol) {
      throw NotPsdError(
          "fgm_inference: negative determinant gain, kernel is not PSD");
    }
    if (best < 0 || best_gain < kGainFloor) {
      out.early_stop = true;
      break;
    }
    out.selected.push_back(best);
    out.log_gains.push_back(std::log(best_gain));
    available[static_cast<std::size_t>(best)] = 0;
    if (round + 1 == subset_size) break;  // nothing left to update

    const double root = std::sqrt(best_gain);
    const auto cj = coeffs.row(best).head(round);
    const auto lcol = l.col(best);  // l is symmetric: col == row
    for (Index i = 0; i < n; ++i) {
      if (!available[static_cast<std::size_t>(i)]) continue;
      const double e = (lcol(i) - coeffs.row(i).head(round).dot(cj)) / root;
      coeffs(i, round) = e;
      gains(i) -= e * e;
    }
  }
  return out;
}

namespace {

// Round-major batched kernel over items [begin, end).  Per round it first
// selects for every active item, then applies the Cholesky update as
// full-length vector operations; already-selected entries keep being
// updated harmlessly and are masked out of the argmax by a -inf sentinel
// in their gain slot (which every later update leaves at -inf).
void bfgm_slice(const std::vector<Matrix>& batch, Index subset_size,
                std::vector<BfgmItem>& items, std::size_t begin,
                std::size_t end) {
  if (begin >= end) return;
  const Index n = batch[begin].rows();

  struct Work {
    Vector gains;
    RowMatrix coeffs;  // (subset_size x n), round rows contiguous
    bool active = false;
  };
  std::vector<Work> work(end - begin);
  for (std::size_t b = begin; b < end; ++b) {
    Work& w = work[b - begin];
    try {
      validate_kernel(batch[b], "bfgm_inference");
    } catch (const Error& err) {
      items[b].failed = true;
      items[b].error = err.what();
      continue;
    }
    w.gains = batch[b].diagonal();
    w.coeffs.resize(subset_size, n);
    w.active = true;
    items[b].result.selected.reserve(static_cast<std::size_t>(subset_size));
  }

  Vector cj(subset_size);
  for (Index round = 0; round < subset_size; ++round) {
    for (std::size_t b = begin; b < end; ++b) {
      Work& w = work[b - begin];
      if (!w.active) continue;

      // single-condition argmax: selected slots sit at -inf
      const double* g = w.gains.data();
      Index best = -1;
      double best_gain = kNegInf;
      for (Index i = 0; i < n; ++i) {
        if (g[i] > best_gain) {
          best_gain = g[i];
          best = i;
        }
      }
      if (best >= 0 && best_gain < -numerics::kPsdTol) {
        // indefinite input caught mid-elimination; fail this item only
        items[b].failed = true;
        items[b].error =
            "bfgm_inference: negative determinant gain, kernel is not PSD";
        items[b].result = FgmResult{};
        w.active = false;
        continue;
      }
      if (best < 0 || best_gain < kGainFloor) {
        items[b].result.early_stop = true;
        w.active = false;
        continue;
      }
      items[b].result.selected.push_back(best);
      items[b].result.log_gains.push_back(std::log(best_gain));
      w.gains(best) = kNegInf;
      if (round + 1 == subset_size) {
        w.active = false;  // done, skip the final update
        continue;
      }

      // e = (L(:, best) - C^T c_best) / sqrt(gain), written straight into
      // the round's coefficient row; gains -= e^2 fused into the same pass.
      Eigen::Map<Vector> e(w.coeffs.row(round).data(), n);
      e = batch[b].col(best);
      if (round > 0) {
        cj.head(round) = w.coeffs.col(best).head(round);
        e.noalias() -= w.coeffs.topRows(round).transpose() * cj.head(round);
      }
      const double inv_root = 1.0 / std::sqrt(best_gain);
      double* ep = e.data();
      double* gp = w.gains.data();
      for (Index i = 0; i < n; ++i) {
        const double v = ep[i] * inv_root;
        ep[i] = v;
        gp[i] -= v * v;
      }
    }
  }
}

}  // namespace

std::vector<BfgmItem> bfgm_inference(const std::vector<Matrix>& batch,
                                     Index subset_size, int threads) {
  std::vector<BfgmItem> items(batch.size());
  if (batch.empty()) return items;

  const Index n = batch.front().rows();
  for (std::size_t b = 0; b < batch.size(); ++b) {
    if (batch[b].rows() != n || batch[b].cols() != n) {
      throw DimensionError("bfgm_inference: kernel " + std::to_string(b) +
                           " is " + std::to_string(batch[b].rows()) + "x" +
                           std::to_string(batch[b].cols()) +
                           ", batch requires uniform " + std::to_string(n) +
                           "x" + std::to_string(n));
    }
  }
  if (subset_size < 1 || subset_size > n) {
    throw ValueError("bfgm_inference: subset size " +
                     std::to_string(subset_size) + " out of range [1, " +
                     std::to_string(n) + "]");
  }

  if (threads <= 1 || batch.size() == 1) {
    bfgm_slice(batch, subset_size, items, 0, batch.size());
    return items;
  }

  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads), batch.size());
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (batch.size() + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(batch.size(), lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&batch, subset_size, &items, lo, hi] {
      bfgm_slice(batch, subset_size, items, lo, hi);
    });
  }
  for (std::thread& th : pool) th.join();
  return items;
}

}  // namespace divdpp::greedy
