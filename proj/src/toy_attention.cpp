// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "divdpp/toy_attention.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "divdpp/errors.hpp"
#include "divdpp/greedy_map.hpp"
#include "divdpp/lensemble.hpp"
#include "divdpp/numerics.hpp"
#include "divdpp/sampling.hpp"

namespace divdpp::toy {

namespace {

constexpr Index kFeatureDim = 16;
constexpr double kWalkStep = 0.3;
// Loss values below this are treated as "already zero" by the divergence
// guard, so a perfectly initialized run is not aborted over roundoff.
constexpr double kGuardFloor = 1e-8;

Matrix random_walk_features(Index t_total, RandomSource& rng) {
  Matrix features(t_total, kFeatureDim);
  for (Index c = 0; c < kFeatureDim; ++c) features(0, c) = rng.normal();
  for (Index i = 1; i < t_total; ++i) {
    for (Index c = 0; c < kFeatureDim; ++c) {
      features(i, c) = features(i - 1, c) + kWalkStep * rng.normal();
    }
  }
  for (Index i = 0; i < t_total; ++i) {
    features.row(i).normalize();  // walk of standard normals: never zero
  }
  return features;
}

}  // namespace

Scene simulate_attention(Index t_total, int n_peaks, RandomSource& rng) {
  if (n_peaks < 1) {
    throw ValueError("simulate_attention: need at least one peak");
  }
  if (t_total < 8 * static_cast<Index>(n_peaks)) {
    throw ValueError("simulate_attention: " + std::to_string(t_total) +
                     " positions is too small for " + std::to_string(n_peaks) +
                     " peaks");
  }
  Scene scene;
  scene.n_peaks = n_peaks;
  scene.seed = rng.seed();

  // One bump per equal segment, center restricted to the middle of the
  // segment so adjacent bumps stay resolvable.  Widths scale with the
  // segment (6-12% of it): bumps are broad relative to a single position,
  // so covering one takes several anchor points, while the center gap
  // (>= 40% of a segment, >= 3.3 widths) keeps neighboring bumps distinct.
  const double segment =
      static_cast<double>(t_total) / static_cast<double>(n_peaks);
  std::vector<double> centers, heights, widths;
  for (int p = 0; p < n_peaks; ++p) {
    centers.push_back(segment * (static_cast<double>(p) + 0.2 +
                                 0.6 * rng.uniform()));
    heights.push_back(0.5 + 0.5 * rng.uniform());
    widths.push_back(segment * (0.06 + 0.06 * rng.uniform()));
  }

  scene.attention = Vector::Zero(t_total);
  for (Index x = 0; x < t_total; ++x) {
    double acc = 0.0;
    for (int p = 0; p < n_peaks; ++p) {
      const double d = static_cast<double>(x) - centers[p];
      acc += heights[p] * std::exp(-d * d / (2.0 * widths[p] * widths[p]));
    }
    scene.attention(x) = acc;
  }
  scene.attention /= scene.attention.sum();

  scene.features = random_walk_features(t_total, rng);
  return scene;
}

Scene degenerate_scene(Index t_total, RandomSource& rng) {
  if (t_total < 16) {
    throw ValueError("degenerate_scene: need at least 16 positions");
  }
  Scene scene;
  scene.n_peaks = 1;
  scene.seed = rng.seed();

  const double lo = 0.25 * static_cast<double>(t_total);
  const double hi = 0.75 * static_cast<double>(t_total);
  const double center = lo + (hi - lo) * rng.uniform();
  const double width = 1.2;  // ~90% of the mass within +/- 2 positions

  scene.attention = Vector::Zero(t_total);
  for (Index x = 0; x < t_total; ++x) {
    const double d = static_cast<double>(x) - center;
    scene.attention(x) = std::exp(-d * d / (2.0 * width * width));
  }
  scene.attention /= scene.attention.sum();

  scene.features = random_walk_features(t_total, rng);
  return scene;
}

int count_peaks(const Vector& curve, double rel_threshold) {
  const Index t = curve.size();
  if (t == 0) return 0;
  if (t == 1) return curve(0) > 0.0 ? 1 : 0;
  const double cutoff = rel_threshold * curve.maxCoeff();
  int peaks = 0;
  for (Index i = 0; i < t; ++i) {
    if (curve(i) <= cutoff) continue;
    const bool left_ok = (i == 0) || curve(i) > curve(i - 1);
    const bool right_ok = (i == t - 1) || curve(i) > curve(i + 1);
    if (left_ok && right_ok) ++peaks;
  }
  return peaks;
}

AttentionResult dot_product_attention(const Matrix& queries,
                                      const Matrix& keys,
                                      const Matrix& values) {
  if (queries.cols() != keys.cols()) {
    throw DimensionError("dot_product_attention: query dim " +
                         std::to_string(queries.cols()) + " != key dim " +
                         std::to_string(keys.cols()));
  }
  if (keys.rows() != values.rows()) {
    throw DimensionError("dot_product_attention: " +
                         std::to_string(keys.rows()) + " keys vs " +
                         std::to_string(values.rows()) + " values");
  }
  if (queries.rows() == 0 || keys.rows() == 0) {
    throw EmptyInputError("dot_product_attention: empty input");
  }
  AttentionResult out;
  const Matrix scores = queries * keys.transpose();
  out.weights.resize(scores.rows(), scores.cols());
  for (Index r = 0; r < scores.rows(); ++r) {
    out.weights.row(r) =
        numerics::softmax(scores.row(r).transpose()).transpose();
  }
  out.context = out.weights * values;
  return out;
}

namespace {

ReweightReport report_for_points(const Scene& scene, IndexList points,
                                 double sigma) {
  ReweightReport report;
  std::sort(points.begin(), points.end());
  report.points = std::move(points);
  report.reweighted = losses::gm_ideal_distribution(
      report.points, scene.attention, sigma,
      losses::MixtureWeighting::kAttentionProportional);
  report.kl = numerics::kl_divergence(scene.attention, report.reweighted);
  report.peaks = count_peaks(report.reweighted);
  return report;
}

}  // namespace

ReweightOutcome reweight_compare(const Scene& scene, Index k, double sigma) {
  const Index t = scene.attention.size();
  if (k < 1 || k > t) {
    throw ValueError("reweight_compare: k = " + std::to_string(k) +
                     " out of range [1, " + std::to_string(t) + "]");
  }
  ReweightOutcome out;
  out.quality_only = report_for_points(
      scene, sampling::topk_quality_subset(scene.attention, k), sigma);

  const Matrix similarity =
      lensemble::similarity_from_features(scene.features);
  const Matrix l = lensemble::build_l(scene.attention, similarity);
  out.dpp = report_for_points(scene, greedy::fgm_inference(l, k).selected,
                              sigma);
  return out;
}

std::vector<TrainStep> train_toy(const Scene& scene, const TrainConfig& config,
                                 RandomSource& rng) {
  const Index t = scene.attention.size();
  if (t == 0) throw EmptyInputError("train_toy: empty scene");
  if (config.steps < 1) {
    throw ValueError("train_toy: need at least one step");
  }
  if (!(config.learning_rate > 0.0)) {
    throw ValueError("train_toy: learning rate must be positive");
  }

  const Vector anchor = scene.attention;
  // Logits start at log attention (clamped), so softmax(z) reproduces the
  // initial distribution up to roundoff.
  Vector z = anchor.array().max(1e-20).log();
  const Matrix similarity =
      lensemble::similarity_from_features(scene.features);

  Vector micro_ideal;
  std::vector<TrainStep> trajectory;
  trajectory.reserve(static_cast<std::size_t>(config.steps));
  double initial_total = 0.0;

  for (int it = 1; it <= config.steps; ++it) {
    const Vector q = numerics::softmax(z);
    const Matrix l = lensemble::build_l(q, similarity);

    const double task = numerics::kl_divergence(anchor, q);
    const Vector grad_task = q - anchor;

    double reg = 0.0;
    Vector grad_reg;
    if (config.reg == Regularizer::kMacro) {
      const sampling::MacroCondition condition =
          sampling::pick_macro_condition(rng);
      IndexList subset;
      if (condition ==
          sampling::MacroCondition::kImproveDiversityGivenQuality) {
        subset = sampling::topk_quality_subset(
            q, std::min<Index>(config.top_k, t));
      } else {
        subset = sampling::equidistant_subset(t, config.stride, 0);
      }
      reg = losses::macro_qd_loss(l, subset);
      const Vector grad_q =
          losses::grad_macro_wrt_quality(q, similarity, subset, condition)
              .grad;
      // Chain through softmax: dz_m = q_m * (g_m - <g, q>).
      const double mean_grad = grad_q.dot(q);
      grad_reg = q.cwiseProduct((grad_q.array() - mean_grad).matrix());
    } else {
      if ((it - 1) % config.refresh_every == 0) {
        micro_ideal =
            losses::micro_pipeline(l, q, config.n_points, config.sigma).ideal;
      }
      reg = losses::micro_kl_loss(micro_ideal, q);
      grad_reg = losses::grad_micro_wrt_attention(micro_ideal, z);
    }

    const losses::LossBreakdown breakdown =
        losses::combine_loss(task, reg, config.gamma);

    TrainStep record;
    record.step = it;
    record.total = breakdown.total;
    record.task = task;
    record.reg = reg;
    record.entropy = numerics::entropy(q);
    const greedy::FgmResult top = greedy::fgm_inference(
        l, std::min<Index>(config.qd_subset_size, t));
    IndexList top_sorted = top.selected;
    std::sort(top_sorted.begin(), top_sorted.end());
    record.qd_score = lensemble::qd_score(l, top_sorted);
    trajectory.push_back(record);

    if (it == 1) {
      initial_total = breakdown.total;
    } else if (breakdown.total > 10.0 * initial_total &&
               breakdown.total > kGuardFloor) {
      throw DivergenceError("train_toy: total loss " +
                            std::to_string(breakdown.total) + " exceeds 10x " +
                            std::to_string(initial_total) + " at step " +
                            std::to_string(it));
    }

    z -= config.learning_rate *
         (config.gamma * grad_task + (1.0 - config.gamma) * grad_reg);
  }
  return trajectory;
}

}  // namespace divdpp::toy
