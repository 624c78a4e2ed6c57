// Copyright 2026 The divdpp Authors
// SPDX-License-Identifier: Apache-2.0

#include "divdpp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "divdpp/errors.hpp"

namespace divdpp::numerics {

void require_symmetric(const Matrix& m, const char* where) {
  if (m.rows() != m.cols()) {
    throw DimensionError(std::string(where) + ": matrix is " +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected square");
  }
  if (m.rows() == 0) return;
  const double dev = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (dev > kSymmetryTol) {
    throw DimensionError(std::string(where) +
                         ": matrix is not symmetric (max deviation " +
                         std::to_string(dev) + ")");
  }
}

Vector symmetric_eigenvalues(const Matrix& m) {
  require_symmetric(m, "symmetric_eigenvalues");
  if (m.rows() == 0) return Vector(0);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error("symmetric_eigenvalues: eigendecomposition did not converge");
  }
  return solver.eigenvalues();  // ascending by construction
}

Matrix cholesky_lower(const Matrix& m) {
  require_symmetric(m, "cholesky_lower");
  const Index n = m.rows();
  Matrix lower = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    double pivot = m(j, j) - lower.row(j).head(j).squaredNorm();
    if (pivot < -kPsdTol) {
      throw NotPsdError("cholesky_lower: pivot " + std::to_string(pivot) +
                        " at column " + std::to_string(j));
    }
    pivot = std::max(pivot, 0.0);
    const double root = std::sqrt(pivot);
    lower(j, j) = root;
    if (root == 0.0) continue;  // semidefinite: column stays zero
    for (Index i = j + 1; i < n; ++i) {
      lower(i, j) =
          (m(i, j) - lower.row(i).head(j).dot(lower.row(j).head(j))) / root;
    }
  }
  return lower;
}

double log_det_psd(const Matrix& m) {
  if (m.rows() == 0 && m.cols() == 0) return 0.0;  // det of empty matrix is 1
  const Vector eigs = symmetric_eigenvalues(m);
  if (eigs(0) < -kPsdTol) {
    throw NotPsdError("log_det_psd: eigenvalue " + std::to_string(eigs(0)) +
                      " below tolerance");
  }
  double acc = 0.0;
  for (Index i = 0; i < eigs.size(); ++i) {
    acc += std::log(std::max(eigs(i), kEigenvalueFloor));
  }
  return acc;
}

Matrix psd_inverse(const Matrix& m) {
  require_symmetric(m, "psd_inverse");
  if (m.rows() == 0) return Matrix(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw Error("psd_inverse: eigendecomposition did not converge");
  }
  const Vector& eigs = solver.eigenvalues();
  if (eigs(0) <= kEigenvalueFloor) {
    throw SingularMatrixError("psd_inverse: eigenvalue " +
                              std::to_string(eigs(0)) +
                              " at or below working precision");
  }
  Matrix inv = solver.eigenvectors() * eigs.cwiseInverse().asDiagonal() *
               solver.eigenvectors().transpose();
  inv = 0.5 * (inv + inv.transpose()).eval();  // exact symmetry
  return inv;
}

Vector softmax(const Vector& v) {
  if (v.size() == 0) throw EmptyInputError("softmax: empty input");
  const double shift = v.maxCoeff();
  Vector out = (v.array() - shift).exp();
  out /= out.sum();
  return out;
}

double kl_divergence(const Vector& p, const Vector& q) {
  if (p.size() != q.size()) {
    throw DimensionError("kl_divergence: length mismatch " +
                         std::to_string(p.size()) + " vs " +
                         std::to_string(q.size()));
  }
  const Index n = p.size();
  if (n == 0) return 0.0;
  const double zp = p.sum() + kKlEpsilon * static_cast<double>(n);
  const double zq = q.sum() + kKlEpsilon * static_cast<double>(n);
  double acc = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double pi = (p(i) + kKlEpsilon) / zp;
    const double qi = (q(i) + kKlEpsilon) / zq;
    acc += pi * std::log(pi / qi);
  }
  return acc;
}

double entropy(const Vector& p) {
  double acc = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) acc -= p(i) * std::log(p(i));
  }
  return acc;
}

}  // namespace divdpp::numerics
