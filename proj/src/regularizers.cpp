// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "divdpp/regularizers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "divdpp/errors.hpp"
#include "divdpp/greedy_map.hpp"
#include "divdpp/lensemble.hpp"
#include "divdpp/numerics.hpp"

namespace divdpp::losses {

double macro_qd_loss(const Matrix& l, const IndexList& subset) {
  if (subset.empty()) {
    throw EmptyInputError("macro_qd_loss: empty subset");
  }
  const Matrix sub = lensemble::principal_submatrix(l, subset);
  const Matrix full = l + Matrix::Identity(l.rows(), l.cols());
  return numerics::log_det_psd(full) - numerics::log_det_psd(sub);
}

LossBreakdown combine_loss(double task, double reg, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw ValueError("combine_loss: gamma = " + std::to_string(gamma) +
                     " outside [0, 1]");
  }
  LossBreakdown out;
  out.task = task;
  out.reg = reg;
  out.gamma = gamma;
  out.total = gamma * task + (1.0 - gamma) * reg;
  return out;
}

Vector gm_ideal_distribution(const IndexList& points, const Vector& attention,
                             double sigma, MixtureWeighting weighting) {
  if (points.empty()) {
    throw EmptyInputError("gm_ideal_distribution: no mixture points");
  }
  if (attention.size() == 0) {
    throw EmptyInputError("gm_ideal_distribution: empty attention");
  }
  if (!(sigma > 0.0)) {
    throw ValueError("gm_ideal_distribution: sigma must be positive");
  }
  const Index t = attention.size();
  for (const Index p : points) {
    if (p < 0 || p >= t) {
      throw ValueError("gm_ideal_distribution: point " + std::to_string(p) +
                       " outside the attention grid");
    }
  }

  const std::size_t k = points.size();
  std::vector<double> weights(k, 1.0 / static_cast<double>(k));
  if (weighting == MixtureWeighting::kAttentionProportional) {
    double mass = 0.0;
    for (std::size_t i = 0; i < k; ++i) mass += attention(points[i]);
    if (mass > 0.0) {
      for (std::size_t i = 0; i < k; ++i) {
        weights[i] = attention(points[i]) / mass;
      }
    }
    // zero mass at every point: keep the uniform fallback
  }

  Vector ideal(t);
  const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
  for (Index x = 0; x < t; ++x) {
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      const double d = static_cast<double>(x - points[i]);
      acc += weights[i] * std::exp(-d * d * inv_two_sigma2);
    }
    ideal(x) = acc;
  }
  ideal /= ideal.sum();
  return ideal;
}

double micro_kl_loss(const Vector& ideal, const Vector& attention) {
  return numerics::kl_divergence(ideal, attention);
}

MicroResult micro_pipeline(const Matrix& l, const Vector& attention,
                           int n_points, double sigma,
                           MixtureWeighting weighting) {
  if (l.rows() != attention.size()) {
    throw DimensionError("micro_pipeline: kernel is " +
                         std::to_string(l.rows()) + "x" +
                         std::to_string(l.cols()) + " but attention has " +
                         std::to_string(attention.size()) + " entries");
  }
  MicroResult out;
  const greedy::FgmResult inferred =
      greedy::fgm_inference(l, static_cast<Index>(n_points));
  out.points = inferred.selected;
  std::sort(out.points.begin(), out.points.end());
  out.ideal = gm_ideal_distribution(out.points, attention, sigma, weighting);
  out.loss = micro_kl_loss(out.ideal, attention);
  return out;
}

MacroGradient grad_macro_wrt_quality(const Vector& quality,
                                     const Matrix& similarity,
                                     const IndexList& subset,
                                     sampling::MacroCondition condition) {
  const Index t = quality.size();
  if (similarity.rows() != t || similarity.cols() != t) {
    throw DimensionError("grad_macro_wrt_quality: quality has " +
                         std::to_string(t) + " entries but similarity is " +
                         std::to_string(similarity.rows()) + "x" +
                         std::to_string(similarity.cols()));
  }
  if (subset.empty()) {
    throw EmptyInputError("grad_macro_wrt_quality: empty subset");
  }
  lensemble::validate_subset(subset, t, "grad_macro_wrt_quality");

  MacroGradient out;
  out.grad = Vector::Zero(t);
  if (condition == sampling::MacroCondition::kImproveDiversityGivenQuality) {
    // Quality is the conditioning variable here: the subset was chosen by
    // quality and the quality path is detached, so the gradient is exactly
    // zero by definition.
    return out;
  }

  const Matrix l = lensemble::build_l(quality, similarity);

  // d/dq_m log det(L + I) = 2 * sum_j (L+I)^-1_{mj} S_{mj} q_j.
  const Matrix inv =
      numerics::psd_inverse(l + Matrix::Identity(t, t));
  out.grad = 2.0 * (inv.cwiseProduct(similarity) * quality);

  // Subset term, consistent with the eigenvalue-floored log-determinant:
  // modes at the floor contribute zero derivative.
  const Matrix sub = lensemble::principal_submatrix(l, subset);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sub);
  if (solver.info() != Eigen::Success) {
    throw Error("grad_macro_wrt_quality: eigendecomposition did not converge");
  }
  const Vector& eigs = solver.eigenvalues();
  if (eigs(0) < -numerics::kPsdTol) {
    throw NotPsdError("grad_macro_wrt_quality: subset kernel not PSD");
  }
  const Index k = static_cast<Index>(subset.size());
  Vector inv_eigs(k);
  for (Index i = 0; i < k; ++i) {
    if (eigs(i) > numerics::kEigenvalueFloor) {
      inv_eigs(i) = 1.0 / eigs(i);
    } else {
      inv_eigs(i) = 0.0;
      out.degenerate = true;
    }
  }
  const Matrix sub_inv = solver.eigenvectors() * inv_eigs.asDiagonal() *
                         solver.eigenvectors().transpose();

  for (Index a = 0; a < k; ++a) {
    const Index m = subset[static_cast<std::size_t>(a)];
    double acc = 0.0;
    for (Index b = 0; b < k; ++b) {
      const Index j = subset[static_cast<std::size_t>(b)];
      acc += sub_inv(a, b) * similarity(m, j) * quality(j);
    }
    out.grad(m) -= 2.0 * acc;
  }
  return out;
}

Vector grad_micro_wrt_attention(const Vector& ideal, const Vector& logits) {
  if (ideal.size() != logits.size()) {
    throw DimensionError("grad_micro_wrt_attention: length mismatch " +
                         std::to_string(ideal.size()) + " vs " +
                         std::to_string(logits.size()));
  }
  return numerics::softmax(logits) - ideal;
}

}  // namespace divdpp::losses
