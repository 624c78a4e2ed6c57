// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "divdpp/sampling.hpp"
#include "divdpp/types.hpp"

namespace divdpp::losses {

/// Default mixture weight of the task loss for the subset-level (macro)
/// regularizer: total = 0.6 * task + 0.4 * reg.
inline constexpr double kMacroGamma = 0.6;
/// Default mixture weight of the task loss for the distribution-level
/// (micro) regularizer: total = 0.7 * task + 0.3 * reg.
inline constexpr double kMicroGamma = 0.7;
/// Default number of greedy points anchoring the ideal distribution.
inline constexpr int kDefaultMicroPoints = 20;
/// Default Gaussian width of the ideal distribution.
inline constexpr double kDefaultSigma = 3.0;

/// Negative log of the normalized subset probability:
///   log det(L + I) - log det(L_Y),
/// both terms through the eigenvalue-floored log-determinant, so a
/// rank-deficient L_Y yields a large-but-finite loss.  Requires a
/// non-empty subset.
double macro_qd_loss(const Matrix& l, const IndexList& subset);

struct LossBreakdown {
  double total = 0.0;
  double task = 0.0;
  double reg = 0.0;
  double gamma = 0.0;
};

/// total = gamma * task + (1 - gamma) * reg, gamma in [0, 1].
LossBreakdown combine_loss(double task, double reg, double gamma);

enum class MixtureWeighting {
  kUniform,
  kAttentionProportional,
};

/// Mixture of unit-width-sigma Gaussians centered on `points`, evaluated
/// on the integer grid {0, ..., attention.size() - 1} and normalized to a
/// distribution.  Component weights are uniform or proportional to the
/// attention mass at each point (falling back to uniform if that mass is
/// all zero).
Vector gm_ideal_distribution(const IndexList& points, const Vector& attention,
                             double sigma, MixtureWeighting weighting);

/// KL(ideal || attention); the ideal distribution is the target.
double micro_kl_loss(const Vector& ideal, const Vector& attention);

struct MicroResult {
  IndexList points;  // greedy MAP anchors, strictly increasing
  Vector ideal;
  double loss = 0.0;
};

/// Greedy MAP anchors -> Gaussian-mixture ideal -> KL against the current
/// attention, in one call.
MicroResult micro_pipeline(const Matrix& l, const Vector& attention,
                           int n_points = kDefaultMicroPoints,
                           double sigma = kDefaultSigma,
                           MixtureWeighting weighting =
                               MixtureWeighting::kAttentionProportional);

struct MacroGradient {
  Vector grad;
  /// True when at least one eigenvalue of L_Y sat at the floor; the
  /// contribution of floored modes is defined as zero.
  bool degenerate = false;
};

/// Analytic gradient of macro_qd_loss(build_l(q, s), y) with respect to q.
/// Under the improve-diversity-given-quality condition the quality path is
/// detached and the gradient is exactly zero.
MacroGradient grad_macro_wrt_quality(const Vector& quality,
                                     const Matrix& similarity,
                                     const IndexList& subset,
                                     sampling::MacroCondition condition);

/// Gradient of micro_kl_loss(ideal, softmax(logits)) with respect to the
/// logits: softmax(logits) - ideal.  Entries sum to zero.
Vector grad_micro_wrt_attention(const Vector& ideal, const Vector& logits);

}  // namespace divdpp::losses
