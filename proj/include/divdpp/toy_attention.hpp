// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "divdpp/random_source.hpp"
#include "divdpp/regularizers.hpp"
#include "divdpp/types.hpp"

namespace divdpp::toy {

/// A synthetic single-document attention scene: a normalized attention
/// curve over t_total source positions plus smooth per-position features.
struct Scene {
  Vector attention;       // length t_total, sums to one
  Matrix features;        // t_total x feature dim, unit rows
  int n_peaks = 0;        // peaks planted by the generator (0 if unknown)
  std::uint64_t seed = 0; // seed of the source the scene was drawn from
};

/// Multi-peak scene: n_peaks Gaussian bumps with random centers, heights
/// and widths, one per equal segment of the position axis, plus a smooth
/// random-walk feature matrix (unit-normalized rows).
/// Requires n_peaks >= 1 and t_total >= 8 * n_peaks.
Scene simulate_attention(Index t_total, int n_peaks, RandomSource& rng);

/// Pathologically concentrated scene: one narrow Gaussian holding ~90% of
/// the attention mass within a five-position window.
Scene degenerate_scene(Index t_total, RandomSource& rng);

/// Number of strict local maxima above `rel_threshold` times the global
/// maximum (endpoints compare against their single neighbor).
int count_peaks(const Vector& curve, double rel_threshold = 0.1);

struct AttentionResult {
  Matrix weights;  // one attention distribution per query row
  Matrix context;  // weights * values
};

/// Plain dot-product attention: scores = Q K^T, row-wise softmax, context
/// = weights * V.  Q and K must share the feature dimension; K and V must
/// have the same number of rows.
AttentionResult dot_product_attention(const Matrix& queries,
                                      const Matrix& keys,
                                      const Matrix& values);

struct ReweightReport {
  IndexList points;   // selected anchor positions, strictly increasing
  Vector reweighted;  // Gaussian-mixture ideal built on the anchors
  double kl = 0.0;    // KL(original attention || reweighted)
  int peaks = 0;      // peaks surviving in the reweighted curve
};

struct ReweightOutcome {
  ReweightReport quality_only;  // anchors = top-k attention positions
  ReweightReport dpp;           // anchors = greedy MAP over the L-ensemble
};

/// Side-by-side comparison of quality-only anchor selection against
/// determinant-based selection on the same scene.
ReweightOutcome reweight_compare(const Scene& scene, Index k, double sigma);

enum class Regularizer { kMacro, kMicro };

struct TrainConfig {
  Regularizer reg = Regularizer::kMacro;
  double gamma = losses::kMacroGamma;  // task-loss weight in [0, 1]
  int steps = 500;
  double learning_rate = 0.05;
  double sigma = losses::kDefaultSigma;
  int top_k = 30;          // improve-diversity condition: top-k subset
  Index stride = 20;       // improve-quality condition: equidistant stride
  int n_points = losses::kDefaultMicroPoints;
  int refresh_every = 10;  // steps between micro ideal refreshes
  Index qd_subset_size = 20;  // greedy subset size for the per-step record
};

struct TrainStep {
  int step = 0;       // 1-based
  double total = 0.0;
  double task = 0.0;
  double reg = 0.0;
  double entropy = 0.0;
  double qd_score = 0.0;  // of the greedy top qd_subset_size subset
};

/// Gradient-descent toy trainer over attention logits.  The task loss
/// anchors the attention to the scene's initial distribution via
/// KL(initial || softmax(z)); the regularizer is either the subset-level
/// (macro) or distribution-level (micro) diversity loss.  Aborts with
/// DivergenceError when the total loss exceeds 10x its initial value
/// (beyond an absolute noise floor).  Returns one record per step.
std::vector<TrainStep> train_toy(const Scene& scene, const TrainConfig& config,
                                 RandomSource& rng);

}  // namespace divdpp::toy
