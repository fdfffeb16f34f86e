// Copyright 2026 The ift-trust Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef IFT_GAUSSIAN_HPP
#define IFT_GAUSSIAN_HPP

#include "ift/core.hpp"
#include "ift/measurement.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <array>
#include <cstdint>
#include <random>

namespace ift {

/// Gaussian measure N(mean, covariance) over interior-node coefficients.
template <typename Scalar>
struct GaussianFieldMeasure {
  Vector<Scalar> mean;
  Matrix<Scalar> covariance;
  Scalar jitter_used{0};

  Eigen::Index size() const { return mean.size(); }
};

/// Checks symmetry (relative 1e-12) and positive semi-definiteness
/// (eigenvalues >= -1e-10 * largest). Throws NumericalError otherwise.
template <typename Scalar>
void validate_measure(const GaussianFieldMeasure<Scalar>& m) {
  require(m.covariance.rows() == m.mean.size() && m.covariance.cols() == m.mean.size(),
          "GaussianFieldMeasure: covariance shape must match the mean");
  if (!is_symmetric(m.covariance)) throw NumericalError("GaussianFieldMeasure: covariance is not symmetric");
  if (m.size() == 0) return;
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(m.covariance, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const Scalar top = std::max(ev.maxCoeff(), Scalar(0));
  if (ev.minCoeff() < -Scalar(1e-10) * top)
    throw NumericalError("GaussianFieldMeasure: covariance has a negative eigenvalue");
}

template <typename Scalar>
struct JitteredCholesky {
  Matrix<Scalar> lower;
  Scalar jitter{0};  // absolute diagonal shift that was added
};

/// Cholesky factor of `cov` with escalating diagonal jitter
/// {0, 1e-12, 1e-10, 1e-8} times the mean diagonal entry.
template <typename Scalar>
JitteredCholesky<Scalar> cholesky_with_jitter(const Matrix<Scalar>& cov) {
  require(cov.rows() == cov.cols(), "cholesky_with_jitter: matrix must be square");
  const auto n = cov.rows();
  JitteredCholesky<Scalar> out;
  if (n == 0) return out;
  if (cov.isZero(0)) {
    out.lower = Matrix<Scalar>::Zero(n, n);
    return out;
  }
  const Scalar scale = cov.trace() / Scalar(n);
  constexpr std::array<double, 4> factors{0.0, 1e-12, 1e-10, 1e-8};
  for (const double f : factors) {
    const Scalar jitter = Scalar(f) * std::abs(scale);
    Matrix<Scalar> shifted = cov;
    shifted.diagonal().array() += jitter;
    Eigen::LLT<Matrix<Scalar>> llt(shifted);
    if (llt.info() == Eigen::Success) {
      out.lower = llt.matrixL();
      out.jitter = jitter;
      return out;
    }
  }
  throw NumericalError("cholesky_with_jitter: factorization failed after maximum jitter");
}

/// Draws `count` samples as the columns of the returned matrix. Deterministic
/// for a given seed.
template <typename Scalar>
Matrix<Scalar> sample(const GaussianFieldMeasure<Scalar>& measure, int count, std::uint64_t seed) {
  require(count >= 1, "sample: count must be at least 1");
  const auto chol = cholesky_with_jitter(measure.covariance);
  std::mt19937_64 rng(seed);
  std::normal_distribution<Scalar> normal(0, 1);
  const auto n = measure.size();
  Matrix<Scalar> z(n, count);
  for (Eigen::Index j = 0; j < count; ++j)
    for (Eigen::Index i = 0; i < n; ++i) z(i, j) = normal(rng);
  Matrix<Scalar> out = chol.lower.template triangularView<Eigen::Lower>() * z;
  out.colwise() += measure.mean;
  return out;
}

/// Standard-normal noise vector of the given length, deterministic per seed.
template <typename Scalar>
Vector<Scalar> standard_normal(Eigen::Index size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<Scalar> normal(0, 1);
  Vector<Scalar> z(size);
  for (Eigen::Index i = 0; i < size; ++i) z(i) = normal(rng);
  return z;
}

/// Posterior for a prior given in precision form:
///   S~ = (P + R^T Gamma^{-1} R)^{-1},  m~ = mean + S~ R^T Gamma^{-1} (d - R mean).
template <typename Scalar>
GaussianFieldMeasure<Scalar> posterior_from_precision(const Vector<Scalar>& prior_mean,
                                                      const Matrix<Scalar>& prior_precision,
                                                      const MeasurementSetup<Scalar>& setup) {
  const auto n = prior_mean.size();
  require(prior_precision.rows() == n && prior_precision.cols() == n,
          "posterior update: prior precision shape mismatch");
  require(setup.operator_r.cols() == n, "posterior update: measurement operator has " +
                                            std::to_string(setup.operator_r.cols()) +
                                            " columns, field has " + std::to_string(n));
  require(setup.has_data() || setup.observation_count() == 0,
          "posterior update: measurement setup carries no data");
  require(setup.noise_variance > 0, "posterior update: noise covariance is singular");
  const Scalar inv_noise = Scalar(1) / setup.noise_variance;
  const auto& r = setup.operator_r;

  Matrix<Scalar> information = prior_precision;
  information.noalias() += inv_noise * r.transpose() * r;
  Eigen::LLT<Matrix<Scalar>> llt(information);
  if (llt.info() != Eigen::Success)
    throw NumericalError("posterior update: information matrix is not positive definite");

  GaussianFieldMeasure<Scalar> post;
  post.covariance = llt.solve(Matrix<Scalar>::Identity(n, n));
  post.covariance = Scalar(0.5) * (post.covariance + post.covariance.transpose()).eval();
  post.mean = prior_mean;
  if (setup.observation_count() > 0) {
    const Vector<Scalar> residual = setup.data - r * prior_mean;
    post.mean += llt.solve(inv_noise * (r.transpose() * residual));
  }
  return post;
}

/// Free-theory update of an arbitrary Gaussian prior. The prior covariance is
/// inverted (with jitter if needed) and the update is applied to the residual
/// d - R mean, so non-centred priors keep their mean.
template <typename Scalar>
GaussianFieldMeasure<Scalar> posterior_update(const GaussianFieldMeasure<Scalar>& prior,
                                              const MeasurementSetup<Scalar>& setup) {
  const auto n = prior.size();
  require(prior.covariance.rows() == n && prior.covariance.cols() == n,
          "posterior_update: prior covariance shape mismatch");
  const auto chol = cholesky_with_jitter(prior.covariance);
  if (chol.lower.isZero(0)) throw NumericalError("posterior_update: prior covariance is zero");
  const auto factor = chol.lower.template triangularView<Eigen::Lower>();
  Matrix<Scalar> precision = Matrix<Scalar>::Identity(n, n);
  factor.solveInPlace(precision);
  factor.transpose().solveInPlace(precision);
  precision = Scalar(0.5) * (precision + precision.transpose()).eval();
  auto post = posterior_from_precision(prior.mean, precision, setup);
  post.jitter_used = chol.jitter;
  return post;
}

using GaussianFieldMeasured = GaussianFieldMeasure<double>;

}  // namespace ift

#endif  // IFT_GAUSSIAN_HPP
