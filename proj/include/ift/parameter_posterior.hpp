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

#ifndef IFT_PARAMETER_POSTERIOR_HPP
#define IFT_PARAMETER_POSTERIOR_HPP

#include "ift/core.hpp"
#include "ift/free_theory.hpp"

#include <limits>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace ift {

// The field potential H(psi; beta) = beta E(psi) with E(psi) = 1/2 psi^T A psi
// is linear in the single parameter beta, so d/dbeta S^{-1} = A and the second
// parameter derivative of the field potential vanishes. Gradients and Hessians
// are returned as 1-vectors and 1x1 matrices.

/// E[E(psi) | beta] = 1/2 tr(A S) = n / (2 beta).
template <typename Scalar>
Scalar prior_expected_energy(Scalar beta, Eigen::Index n) {
  require_positive_beta(beta);
  return Scalar(n) / (2 * beta);
}

/// E[E(psi) | d, beta] = 1/2 m~^T A m~ + 1/2 tr(A S~) over the centred posterior.
template <typename Scalar>
Scalar posterior_expected_energy(const GaussianFieldMeasure<Scalar>& posterior,
                                 const FieldModel<Scalar>& model) {
  require(posterior.size() == model.size(), "posterior_expected_energy: dimension mismatch");
  const auto& a = model.stiffness;
  return Scalar(0.5) * posterior.mean.dot(a * posterior.mean) +
         Scalar(0.5) * trace_of_product(a, posterior.covariance);
}

/// Var[E(psi) | beta] = 1/2 tr(A S A S) = n / (2 beta^2).
template <typename Scalar>
Scalar prior_energy_covariance(Scalar beta, Eigen::Index n) {
  require_positive_beta(beta);
  return Scalar(n) / (2 * beta * beta);
}

/// Var[E(psi) | d, beta] = m~^T A S~ A m~ + 1/2 tr(A S~ A S~).
template <typename Scalar>
Scalar posterior_energy_covariance(const GaussianFieldMeasure<Scalar>& posterior,
                                   const FieldModel<Scalar>& model) {
  require(posterior.size() == model.size(), "posterior_energy_covariance: dimension mismatch");
  const auto& a = model.stiffness;
  const Matrix<Scalar> as = a * posterior.covariance;
  const Vector<Scalar> am = a * posterior.mean;
  return am.dot(posterior.covariance * am) + Scalar(0.5) * trace_of_product(as, as);
}

template <typename Scalar>
struct PotentialCalculusReport {
  Scalar beta{0};
  Vector<Scalar> grad;
  Matrix<Scalar> hessian;
  Scalar prior_expectation{0};
  Scalar posterior_expectation{0};
  Scalar prior_cov{0};
  Scalar posterior_cov{0};
  Scalar informativeness_margin{0};
  Scalar prior_grad{0};
  Scalar prior_hess{0};
};

/// Gradient, Hessian and the expectations/covariances they are built from,
/// all from a single posterior solve at state.beta.
template <typename Scalar>
PotentialCalculusReport<Scalar> potential_calculus(const FieldModel<Scalar>& model,
                                                   const ParameterState<Scalar>& state,
                                                   const MeasurementSetup<Scalar>& setup) {
  const auto posterior = centered_posterior(model, state, setup);
  const auto n = model.size();
  PotentialCalculusReport<Scalar> r;
  r.beta = state.beta;
  r.prior_expectation = prior_expected_energy(state.beta, n);
  r.posterior_expectation = posterior_expected_energy(posterior, model);
  r.prior_cov = prior_energy_covariance(state.beta, n);
  r.posterior_cov = posterior_energy_covariance(posterior, model);
  r.prior_grad = state.prior.gradient(state.beta);
  r.prior_hess = state.prior.hessian(state.beta);
  r.informativeness_margin = r.prior_cov - r.posterior_cov;
  r.grad = Vector<Scalar>::Constant(1, r.posterior_expectation - r.prior_expectation + r.prior_grad);
  // E[d^2 H(psi; beta) / dbeta^2 | .] vanishes for a potential linear in beta.
  r.hessian = Matrix<Scalar>::Constant(1, 1, r.prior_cov - r.posterior_cov + r.prior_hess);
  return r;
}

/// dH(beta; d)/dbeta = E[E | d, beta] - E[E | beta] + dH(beta)/dbeta.
template <typename Scalar>
Vector<Scalar> grad_param_potential(const FieldModel<Scalar>& model, const ParameterState<Scalar>& state,
                                    const MeasurementSetup<Scalar>& setup) {
  return potential_calculus(model, state, setup).grad;
}

/// (prior, posterior) variance of dH(psi; beta)/dbeta = E(psi).
template <typename Scalar>
std::pair<Scalar, Scalar> grad_covariances(const FieldModel<Scalar>& model,
                                           const ParameterState<Scalar>& state,
                                           const MeasurementSetup<Scalar>& setup) {
  const auto r = potential_calculus(model, state, setup);
  return {r.prior_cov, r.posterior_cov};
}

template <typename Scalar>
Matrix<Scalar> hessian_param_potential(const FieldModel<Scalar>& model,
                                       const ParameterState<Scalar>& state,
                                       const MeasurementSetup<Scalar>& setup) {
  return potential_calculus(model, state, setup).hessian;
}

/// Smallest eigenvalue of prior_cov - posterior_cov; positive means the data
/// are informative about beta at this (d, beta).
template <typename Scalar>
Scalar informativeness_check(const FieldModel<Scalar>& model, const ParameterState<Scalar>& state,
                             const MeasurementSetup<Scalar>& setup) {
  return potential_calculus(model, state, setup).informativeness_margin;
}

template <typename Scalar>
struct GridEvaluation {
  Scalar beta{0};
  Scalar potential{0};
  Scalar grad{0};
  Scalar hessian{0};
  Scalar margin{0};
  Scalar scale{0};  // prior expected energy, the natural size of grad
};

/// Evaluates H(beta; d), its gradient, Hessian and informativeness margin on a grid.
template <typename Scalar>
std::vector<GridEvaluation<Scalar>> evaluate_grid(const std::vector<Scalar>& grid,
                                                  const FieldModel<Scalar>& model,
                                                  const ParameterState<Scalar>& state,
                                                  const MeasurementSetup<Scalar>& setup) {
  std::vector<GridEvaluation<Scalar>> out;
  out.reserve(grid.size());
  for (const Scalar beta : grid) {
    auto s = state;
    s.beta = beta;
    const auto calc = potential_calculus(model, s, setup);
    out.push_back({beta, marginal_neg_log_posterior(model, s, setup), calc.grad(0), calc.hessian(0, 0),
                   calc.informativeness_margin, calc.prior_expectation});
  }
  return out;
}

/// `count` points log-spaced over [lo, hi].
template <typename Scalar>
std::vector<Scalar> log_spaced_grid(Scalar lo, Scalar hi, int count) {
  require(lo > 0 && hi > lo && count >= 2, "log_spaced_grid: need 0 < lo < hi and count >= 2");
  std::vector<Scalar> g(static_cast<std::size_t>(count));
  const Scalar a = std::log(lo);
  const Scalar b = std::log(hi);
  for (int i = 0; i < count; ++i) g[std::size_t(i)] = std::exp(a + (b - a) * Scalar(i) / Scalar(count - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

enum class VerdictKind { weakly_well_posed, no_root, not_convex };

inline std::string_view to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::weakly_well_posed: return "weakly_well_posed";
    case VerdictKind::no_root: return "no_root";
    case VerdictKind::not_convex: return "not_convex";
  }
  return "unknown";
}

template <typename Scalar>
struct WellPosednessVerdict {
  VerdictKind kind{VerdictKind::no_root};
  std::optional<Scalar> beta_star;
  std::optional<Scalar> grad_at_root;
  bool informative{false};     // margin > 0 at every grid point
  bool convex{false};          // Hessian > 0 at every grid point
  int sign_changes{0};
  Scalar min_margin{0};
};

// Values this small relative to their natural scale are treated as zero.
template <typename Scalar>
constexpr Scalar kGridZeroTolerance = Scalar(1e-12);

/// Unique-MAP check over a beta grid: the Hessian must be positive at every
/// grid point and the gradient must change sign exactly once; the bracketed
/// root is refined by bisection in log(beta) to |grad| <= 1e-8 * scale.
template <typename Scalar>
WellPosednessVerdict<Scalar> wellposedness_verdict(const std::vector<Scalar>& grid,
                                                   const FieldModel<Scalar>& model,
                                                   const ParameterState<Scalar>& state,
                                                   const MeasurementSetup<Scalar>& setup,
                                                   const InferenceTargets& targets = {}) {
  require_trust_only(targets);
  require(grid.size() >= 2, "wellposedness_verdict: grid needs at least two points");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(std::isfinite(grid[i]) && grid[i] > 0, "wellposedness_verdict: grid values must be positive");
    require(i == 0 || grid[i] > grid[i - 1], "wellposedness_verdict: grid must be strictly increasing");
  }
  const auto evals = evaluate_grid(grid, model, state, setup);

  WellPosednessVerdict<Scalar> v;
  v.informative = true;
  v.convex = true;
  v.min_margin = evals.front().margin;
  int last_sign = 0;
  std::size_t bracket = 0;
  for (std::size_t i = 0; i < evals.size(); ++i) {
    const auto& e = evals[i];
    const Scalar curvature_scale = prior_energy_covariance(e.beta, model.size());
    v.min_margin = std::min(v.min_margin, e.margin);
    if (!(e.margin > kGridZeroTolerance<Scalar> * curvature_scale)) v.informative = false;
    if (!(e.hessian > kGridZeroTolerance<Scalar> * curvature_scale)) v.convex = false;
    const int sign = std::abs(e.grad) <= kGridZeroTolerance<Scalar> * e.scale ? 0 : (e.grad > 0 ? 1 : -1);
    if (sign != 0) {
      if (last_sign != 0 && sign != last_sign) {
        ++v.sign_changes;
        bracket = i;
      }
      last_sign = sign;
    }
  }
  if (v.sign_changes == 0) {
    v.kind = VerdictKind::no_root;
    return v;
  }
  if (!v.convex || v.sign_changes > 1) {
    v.kind = VerdictKind::not_convex;
    return v;
  }
  // Walk back from the bracket end to its start (skipping exact zeros).
  std::size_t lo_i = bracket - 1;
  while (lo_i > 0 && std::abs(evals[lo_i].grad) <= kGridZeroTolerance<Scalar> * evals[lo_i].scale) --lo_i;
  Scalar lo = std::log(evals[lo_i].beta);
  Scalar hi = std::log(evals[bracket].beta);
  const bool increasing = evals[bracket].grad > 0;
  Scalar root = std::exp(Scalar(0.5) * (lo + hi));
  Scalar g_root = 0;
  for (int it = 0; it < 200; ++it) {
    root = std::exp(Scalar(0.5) * (lo + hi));
    auto s = state;
    s.beta = root;
    g_root = grad_param_potential(model, s, setup)(0);
    if (std::abs(g_root) <= Scalar(1e-8) * prior_expected_energy(root, model.size())) break;
    if ((g_root > 0) == increasing) hi = std::log(root);
    else lo = std::log(root);
    if (hi - lo <= std::numeric_limits<Scalar>::epsilon()) break;
  }
  v.kind = VerdictKind::weakly_well_posed;
  v.beta_star = root;
  v.grad_at_root = g_root;
  return v;
}

using PotentialCalculusReportd = PotentialCalculusReport<double>;

}  // namespace ift

#endif  // IFT_PARAMETER_POSTERIOR_HPP
