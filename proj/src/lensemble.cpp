// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "divdpp/lensemble.hpp"

#include <cmath>
#include <string>

#include "divdpp/errors.hpp"
#include "divdpp/numerics.hpp"

namespace divdpp::lensemble {

Matrix similarity_from_features(const Matrix& features) {
  if (features.rows() == 0 || features.cols() == 0) {
    throw EmptyInputError("similarity_from_features: empty feature matrix");
  }
  const Index t = features.rows();
  Matrix unit(t, features.cols());
  for (Index i = 0; i < t; ++i) {
    const double norm = features.row(i).norm();
    if (norm == 0.0) {
      throw DegenerateFeatureError(
          "similarity_from_features: row " + std::to_string(i) +
          " is all zeros and cannot be normalized");
    }
    unit.row(i) = features.row(i) / norm;
  }
  Matrix s(t, t);
  for (Index i = 0; i < t; ++i) {
    s(i, i) = 1.0;
    for (Index j = i + 1; j < t; ++j) {
      double v = unit.row(i).dot(unit.row(j));
      v = std::min(1.0, std::max(-1.0, v));
      s(i, j) = v;
      s(j, i) = v;  // mirror, exact symmetry
    }
  }
  return s;
}

Vector quality_from_attention(const std::vector<Matrix>& layers) {
  if (layers.empty()) {
    throw EmptyInputError("quality_from_attention: no attention layers");
  }
  const Index gen = layers.front().rows();
  const Index src = layers.front().cols();
  if (gen == 0 || src == 0) {
    throw EmptyInputError("quality_from_attention: empty attention map");
  }
  for (std::size_t l = 0; l < layers.size(); ++l) {
    if (layers[l].rows() != gen || layers[l].cols() != src) {
      throw DimensionError("quality_from_attention: layer " +
                           std::to_string(l) + " is " +
                           std::to_string(layers[l].rows()) + "x" +
                           std::to_string(layers[l].cols()) + ", expected " +
                           std::to_string(gen) + "x" + std::to_string(src));
    }
    if ((layers[l].array() < 0.0).any()) {
      throw ValueError("quality_from_attention: negative weight in layer " +
                       std::to_string(l));
    }
  }
  Vector q = Vector::Zero(src);
  for (const Matrix& layer : layers) {
    q += layer.colwise().sum().transpose();
  }
  q /= static_cast<double>(layers.size()) * static_cast<double>(gen);
  return q;
}

Matrix build_l(const Vector& quality, const Matrix& similarity) {
  const Index t = quality.size();
  if (similarity.rows() != t || similarity.cols() != t) {
    throw DimensionError("build_l: quality has " + std::to_string(t) +
                         " entries but similarity is " +
                         std::to_string(similarity.rows()) + "x" +
                         std::to_string(similarity.cols()));
  }
  Matrix l(t, t);
  for (Index i = 0; i < t; ++i) {
    for (Index j = i; j < t; ++j) {
      const double v = quality(i) * similarity(i, j) * quality(j);
      l(i, j) = v;
      l(j, i) = v;
    }
  }
  return l;
}

Matrix marginal_kernel(const Matrix& l) {
  numerics::require_symmetric(l, "marginal_kernel");
  const Index t = l.rows();
  const Matrix inv =
      numerics::psd_inverse(l + Matrix::Identity(t, t));
  Matrix k = Matrix::Identity(t, t) - inv;
  // Self-check against the equivalent product form L (L + I)^-1.
  const Matrix alt = l * inv;
  const double dev = (k - alt).cwiseAbs().maxCoeff();
  if (dev > 1e-8) {
    throw Error("marginal_kernel: cross-check failed, deviation " +
                std::to_string(dev));
  }
  k = 0.5 * (k + k.transpose()).eval();
  return k;
}

void validate_subset(const IndexList& indices, Index n, const char* where) {
  Index prev = -1;
  for (const Index idx : indices) {
    if (idx < 0 || idx >= n) {
      throw ValueError(std::string(where) + ": index " + std::to_string(idx) +
                       " out of range [0, " + std::to_string(n) + ")");
    }
    if (idx <= prev) {
      throw ValueError(std::string(where) +
                       ": indices must be strictly increasing");
    }
    prev = idx;
  }
}

Matrix principal_submatrix(const Matrix& m, const IndexList& indices) {
  if (m.rows() != m.cols()) {
    throw DimensionError("principal_submatrix: matrix is not square");
  }
  validate_subset(indices, m.rows(), "principal_submatrix");
  const Index k = static_cast<Index>(indices.size());
  Matrix sub(k, k);
  for (Index a = 0; a < k; ++a) {
    for (Index b = 0; b < k; ++b) {
      sub(a, b) = m(indices[static_cast<std::size_t>(a)],
                    indices[static_cast<std::size_t>(b)]);
    }
  }
  return sub;
}

double qd_score(const Matrix& l, const IndexList& subset) {
  numerics::require_symmetric(l, "qd_score");
  const Matrix sub = principal_submatrix(l, subset);
  const double log_num = numerics::log_det_psd(sub);
  const double log_den =
      numerics::log_det_psd(l + Matrix::Identity(l.rows(), l.cols()));
  return std::exp(log_num - log_den);
}

}  // namespace divdpp::lensemble
