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

#ifndef IFT_FREE_THEORY_HPP
#define IFT_FREE_THEORY_HPP

#include "ift/core.hpp"
#include "ift/gaussian.hpp"
#include "ift/measurement.hpp"
#include "ift/mesh.hpp"
#include "ift/operators.hpp"

#include <string_view>

namespace ift {

enum class BetaPriorKind { flat, jeffreys, gaussian };

inline std::string_view to_string(BetaPriorKind k) {
  switch (k) {
    case BetaPriorKind::flat: return "flat";
    case BetaPriorKind::jeffreys: return "jeffreys";
    case BetaPriorKind::gaussian: return "gaussian";
  }
  return "unknown";
}

/// Prior potential H(beta) = -log p(beta) on the trust, up to `offset`.
template <typename Scalar>
struct BetaPrior {
  BetaPriorKind kind{BetaPriorKind::flat};
  Scalar mean{0};
  Scalar variance{1};
  Scalar offset{0};

  static BetaPrior flat() { return {}; }
  static BetaPrior jeffreys() { return {BetaPriorKind::jeffreys}; }
  static BetaPrior gaussian(Scalar mean, Scalar variance) {
    require(variance > 0, "gaussian trust prior needs a positive variance");
    return {BetaPriorKind::gaussian, mean, variance};
  }

  Scalar potential(Scalar beta) const {
    switch (kind) {
      case BetaPriorKind::flat: return offset;
      case BetaPriorKind::jeffreys: return std::log(beta) + offset;
      case BetaPriorKind::gaussian: return (beta - mean) * (beta - mean) / (2 * variance) + offset;
    }
    return offset;
  }
  Scalar gradient(Scalar beta) const {
    switch (kind) {
      case BetaPriorKind::flat: return 0;
      case BetaPriorKind::jeffreys: return Scalar(1) / beta;
      case BetaPriorKind::gaussian: return (beta - mean) / variance;
    }
    return 0;
  }
  Scalar hessian(Scalar beta) const {
    switch (kind) {
      case BetaPriorKind::flat: return 0;
      case BetaPriorKind::jeffreys: return -Scalar(1) / (beta * beta);
      case BetaPriorKind::gaussian: return Scalar(1) / variance;
    }
    return 0;
  }
};

/// lambda = (q, beta) plus the prior placed on beta.
template <typename Scalar>
struct ParameterState {
  Scalar beta{1};
  SourceField<Scalar> source;
  BetaPrior<Scalar> prior;
};

/// Which components of lambda are being inferred. Only the trust may be:
/// inferring the source alongside it makes the potential nonlinear in the
/// parameters and the convexity argument no longer applies.
struct InferenceTargets {
  bool beta{true};
  bool source{false};
};

inline void require_trust_only(const InferenceTargets& targets) {
  if (targets.source)
    throw InvalidArgument(
        "simultaneous inference of the source and the trust is not supported: the field "
        "potential becomes nonlinear in the parameters and uniqueness is not guaranteed");
  require(targets.beta, "nothing to infer: the trust must be an inference target");
}

/// Operators of the renormalised subspace that every free-theory computation
/// shares: L, G = L^{-1}, the stiffness A = W L of the energy quadratic form,
/// its inverse (the unit-trust prior covariance) and log det A.
template <typename Scalar>
struct FieldModel {
  Mesh<Scalar> mesh;
  OperatorMatrix<Scalar> laplacian;
  OperatorMatrix<Scalar> green;
  Matrix<Scalar> stiffness;
  Matrix<Scalar> unit_covariance;
  Scalar log_det_stiffness{0};

  Eigen::Index size() const { return stiffness.rows(); }

  Vector<Scalar> green_source(const SourceField<Scalar>& q) const {
    require(q.values.size() == size(), "source length does not match the mesh");
    return green.entries * q.values;
  }
};

template <typename Scalar>
FieldModel<Scalar> build_field_model(const Mesh<Scalar>& mesh) {
  FieldModel<Scalar> model{mesh, build_laplacian(mesh), {}, {}, {}, 0};
  model.green = green_operator(model.laplacian);
  model.stiffness = stiffness(model.laplacian);
  model.stiffness = Scalar(0.5) * (model.stiffness + model.stiffness.transpose()).eval();
  model.unit_covariance = model.green.entries * model.laplacian.weights.cwiseInverse().asDiagonal();
  model.unit_covariance = Scalar(0.5) * (model.unit_covariance + model.unit_covariance.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(model.stiffness, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) <= 0) throw NumericalError("stiffness operator is not positive definite");
  model.log_det_stiffness = es.eigenvalues().array().log().sum();
  return model;
}

template <typename Scalar>
void require_positive_beta(Scalar beta) {
  require(std::isfinite(beta) && beta > 0, "trust beta must be positive and finite");
}

/// Physics-informed prior N(G q, beta^{-1} A^{-1}) of the energy
/// beta (1/2 phi^T W L phi - q^T W phi). The centred variant has mean zero
/// and describes psi = phi - G q.
template <typename Scalar>
GaussianFieldMeasure<Scalar> physics_prior(const FieldModel<Scalar>& model,
                                           const ParameterState<Scalar>& state,
                                           bool centered = false) {
  require_positive_beta(state.beta);
  GaussianFieldMeasure<Scalar> prior;
  prior.mean = centered ? Vector<Scalar>::Zero(model.size()) : model.green_source(state.source);
  prior.covariance = model.unit_covariance / state.beta;
  return prior;
}

/// Posterior over psi = phi - G q in information form, with data residual d - R G q.
template <typename Scalar>
GaussianFieldMeasure<Scalar> centered_posterior(const FieldModel<Scalar>& model,
                                                const ParameterState<Scalar>& state,
                                                const MeasurementSetup<Scalar>& setup) {
  require_positive_beta(state.beta);
  require(setup.operator_r.cols() == model.size(), "measurement operator does not match the mesh");
  MeasurementSetup<Scalar> residual = setup;
  if (setup.observation_count() > 0) {
    require(setup.has_data(), "measurement setup carries no data");
    residual.data = setup.data - setup.operator_r * model.green_source(state.source);
  }
  const Matrix<Scalar> precision = state.beta * model.stiffness;
  return posterior_from_precision(Vector<Scalar>(Vector<Scalar>::Zero(model.size())), precision, residual);
}

/// Posterior over phi: the centred update with G q restored.
template <typename Scalar>
GaussianFieldMeasure<Scalar> field_posterior(const FieldModel<Scalar>& model,
                                             const ParameterState<Scalar>& state,
                                             const MeasurementSetup<Scalar>& setup) {
  auto post = centered_posterior(model, state, setup);
  post.mean += model.green_source(state.source);
  return post;
}

/// log Z(beta) of the centred potential 1/2 beta psi^T A psi over the n-dimensional subspace.
template <typename Scalar>
Scalar log_partition(const FieldModel<Scalar>& model, Scalar beta) {
  require_positive_beta(beta);
  const auto n = Scalar(model.size());
  return Scalar(0.5) * n * std::log(two_pi<Scalar>) - Scalar(0.5) * n * std::log(beta) -
         Scalar(0.5) * model.log_det_stiffness;
}

/// H(lambda; d): negative log of the Gaussian evidence
///   1/2 r^T C^{-1} r + 1/2 log det(2 pi C) + H(beta),
///   C = R S R^T + Gamma, r = d - R G q,
/// including the likelihood normalisation.
template <typename Scalar>
Scalar marginal_neg_log_posterior(const FieldModel<Scalar>& model, const ParameterState<Scalar>& state,
                                  const MeasurementSetup<Scalar>& setup) {
  require_positive_beta(state.beta);
  const auto m = setup.observation_count();
  if (m == 0) return state.prior.potential(state.beta);
  require(setup.has_data(), "marginal_neg_log_posterior: measurement setup carries no data");
  require(setup.operator_r.cols() == model.size(), "measurement operator does not match the mesh");
  const auto& r = setup.operator_r;
  Matrix<Scalar> cov = r * model.unit_covariance * r.transpose() / state.beta;
  cov.diagonal().array() += setup.noise_variance;
  Eigen::LLT<Matrix<Scalar>> llt(cov);
  if (llt.info() != Eigen::Success)
    throw NumericalError("marginal_neg_log_posterior: marginal data covariance is not positive definite");
  const Vector<Scalar> residual = setup.data - r * model.green_source(state.source);
  const Vector<Scalar> white = llt.matrixL().solve(residual);
  const Scalar log_det = 2 * llt.matrixLLT().diagonal().array().log().sum();
  return Scalar(0.5) * white.squaredNorm() +
         Scalar(0.5) * (log_det + Scalar(m) * std::log(two_pi<Scalar>)) +
         state.prior.potential(state.beta);
}

/// Joint potential H(phi, lambda; d) = H(d; phi) + H(phi; lambda) + log Z(lambda) + H(lambda),
/// with the data potential including its normalisation so that integrating
/// exp(-H) over phi reproduces exp(-marginal_neg_log_posterior).
template <typename Scalar, typename D>
Scalar joint_potential(const Eigen::MatrixBase<D>& phi, const FieldModel<Scalar>& model,
                       const ParameterState<Scalar>& state, const MeasurementSetup<Scalar>& setup) {
  require_positive_beta(state.beta);
  require(phi.size() == model.size(), "joint_potential: field length does not match the mesh");
  require(setup.operator_r.cols() == model.size(), "measurement operator does not match the mesh");
  const auto m = setup.observation_count();
  Scalar data_term = 0;
  if (m > 0) {
    require(setup.has_data(), "joint_potential: measurement setup carries no data");
    const Vector<Scalar> misfit = setup.data - setup.operator_r * phi;
    data_term = Scalar(0.5) * misfit.squaredNorm() / setup.noise_variance +
                Scalar(0.5) * Scalar(m) * std::log(two_pi<Scalar> * setup.noise_variance);
  }
  const Vector<Scalar> psi = phi - model.green_source(state.source);
  const Scalar field_term = Scalar(0.5) * state.beta * psi.dot(model.stiffness * psi);
  return data_term + field_term + log_partition(model, state.beta) + state.prior.potential(state.beta);
}

using FieldModeld = FieldModel<double>;
using ParameterStated = ParameterState<double>;
using BetaPriord = BetaPrior<double>;

}  // namespace ift

#endif  // IFT_FREE_THEORY_HPP
