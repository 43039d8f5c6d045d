// pldakit/preprocess.hpp

// Copyright 2026  pldakit authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "pldakit/errors.hpp"
#include "pldakit/types.hpp"

namespace pldakit {

constexpr double kWhitenerMaxCondition = 1e12;

/// Scales a vector to unit Euclidean norm. A norm below 1e-12 indicates an
/// upstream extraction failure and is an error rather than a pass-through.
inline Eigen::VectorXd length_normalize(const Eigen::VectorXd &v) {
  double norm = v.norm();
  if (!std::isfinite(norm))
    throw PreconditionError("length_normalize: non-finite input");
  if (norm < kZeroNormThreshold)
    throw DegenerateVectorError("length_normalize: vector norm " +
                                std::to_string(norm) + " below 1e-12");
  return v / norm;
}

inline Eigen::VectorXd fit_mean(const std::vector<IVector> &vectors) {
  if (vectors.empty())
    throw PreconditionError("fit_mean: empty input collection");
  check_consistent_dims(vectors);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(vectors.front().values.size());
  for (const IVector &v : vectors) sum += v.values;
  return sum / static_cast<double>(vectors.size());
}

namespace detail {

// Sample covariance (1/n convention) about the input's own mean.
inline Eigen::MatrixXd sample_covariance(const std::vector<IVector> &vectors,
                                         const Eigen::VectorXd &mean) {
  Eigen::Index d = mean.size();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(d, d);
  for (const IVector &v : vectors) {
    Eigen::VectorXd c = v.values - mean;
    cov.noalias() += c * c.transpose();
  }
  cov /= static_cast<double>(vectors.size());
  return 0.5 * (cov + cov.transpose());
}

}  // namespace detail

/// Fits W such that W * C * W^T = I for the sample covariance C of the
/// input. Eigendecomposition-based, eigenvalues in descending order, each
/// eigenvector flipped so its largest-magnitude entry is positive. When the
/// sample is too small for a nonsingular covariance (n <= D), a ridge
/// lambda = 1e-4 * trace(C) / D is added first.
inline Eigen::MatrixXd fit_whitener(const std::vector<IVector> &vectors) {
  if (vectors.empty())
    throw PreconditionError("fit_whitener: empty input collection");
  check_consistent_dims(vectors);
  const Eigen::Index d = vectors.front().values.size();
  const Eigen::Index n = static_cast<Eigen::Index>(vectors.size());

  Eigen::VectorXd mean = fit_mean(vectors);
  Eigen::MatrixXd cov = detail::sample_covariance(vectors, mean);
  if (n <= d) {
    double lambda = 1e-4 * cov.trace() / static_cast<double>(d);
    if (lambda <= 0.0) lambda = 1e-8;
    cov.diagonal().array() += lambda;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success)
    throw NumericError("fit_whitener: eigendecomposition failed");

  // Eigen returns ascending order; we use descending.
  Eigen::VectorXd evals = eig.eigenvalues().reverse();
  Eigen::MatrixXd evecs = eig.eigenvectors().rowwise().reverse();

  double max_eval = evals(0);
  if (max_eval <= 0.0) {
    // Fully degenerate sample (all vectors identical); identity is the only
    // sensible invertible whitener.
    return Eigen::MatrixXd::Identity(d, d);
  }
  double floor = max_eval * 1e-12;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (evals(i) < floor) evals(i) = floor;
    Eigen::Index argmax;
    evecs.col(i).cwiseAbs().maxCoeff(&argmax);
    if (evecs(argmax, i) < 0.0) evecs.col(i) = -evecs.col(i);
  }
  return evals.cwiseSqrt().cwiseInverse().asDiagonal() * evecs.transpose();
}

/// Centering plus optional whitening, followed by length normalization.
/// Pipeline order is always center -> whiten -> length-normalize.
struct Preprocessor {
  Eigen::VectorXd mean;
  std::optional<Eigen::MatrixXd> whitener;

  Eigen::Index dim() const { return mean.size(); }

  void validate() const {
    if (!mean.allFinite())
      throw PreconditionError("preprocessor: non-finite mean");
    if (whitener) {
      if (whitener->rows() != mean.size() || whitener->cols() != mean.size())
        throw DimensionError("preprocessor: whitener shape " +
                             std::to_string(whitener->rows()) + "x" +
                             std::to_string(whitener->cols()) +
                             " does not match mean length " +
                             std::to_string(mean.size()));
      if (!whitener->allFinite())
        throw PreconditionError("preprocessor: non-finite whitener");
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(*whitener);
      double smin = svd.singularValues().minCoeff();
      double smax = svd.singularValues().maxCoeff();
      if (smin <= 0.0 || smax / smin >= kWhitenerMaxCondition)
        throw NumericError("preprocessor: whitener condition number " +
                           std::to_string(smin > 0 ? smax / smin : 0.0) +
                           " exceeds 1e12");
    }
  }

  Eigen::VectorXd apply(const Eigen::VectorXd &v) const {
    if (v.size() != mean.size())
      throw DimensionError("preprocessor: input dimension " +
                           std::to_string(v.size()) + ", expected " +
                           std::to_string(mean.size()));
    Eigen::VectorXd x = v - mean;
    if (whitener) x = (*whitener) * x;
    return length_normalize(x);
  }

  std::vector<IVector> apply(const std::vector<IVector> &vectors) const {
    std::vector<IVector> out;
    out.reserve(vectors.size());
    for (const IVector &v : vectors)
      out.push_back(IVector{v.utt_id, apply(v.values)});
    return out;
  }
};

inline Preprocessor fit_preprocessor(const std::vector<IVector> &vectors,
                                     bool whiten) {
  Preprocessor prep;
  prep.mean = fit_mean(vectors);
  if (whiten) prep.whitener = fit_whitener(vectors);
  return prep;
}

}  // namespace pldakit
