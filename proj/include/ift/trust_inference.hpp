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

#ifndef IFT_TRUST_INFERENCE_HPP
#define IFT_TRUST_INFERENCE_HPP

#include "ift/core.hpp"
#include "ift/free_theory.hpp"
#include "ift/gaussian.hpp"
#include "ift/measurement.hpp"
#include "ift/parameter_posterior.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ift {

template <typename Scalar>
struct TrustOptions {
  Scalar damping{0.5};
  Scalar tolerance{1e-10};  // relative change of beta^{-1} between iterates
  int max_iterations{200};
  Scalar initial_beta{1};
  Scalar bisection_lo{1e-6};
  Scalar bisection_hi{1e6};
  Scalar divergence_threshold{1e-12};  // on beta^{-1}
  Scalar numerator_threshold{1e-10};   // on m~^T A m~ relative to q^T W G q
  bool assess_wellposedness{true};
  int verdict_points{101};
  InferenceTargets targets{};
};

enum class TrustSolver { fixed_point, bisection };

inline std::string_view to_string(TrustSolver s) {
  return s == TrustSolver::fixed_point ? "fixed_point" : "bisection";
}

template <typename Scalar>
struct TrustReport {
  std::optional<Scalar> beta_hat;  // empty when the trust diverges
  bool diverged{false};
  int iterations{0};
  Scalar residual{0};  // final |change of beta^{-1}|
  Scalar last_beta_iterate{0};
  Scalar grad_residual{0};
  Scalar informativeness_margin{0};
  Scalar hessian{0};
  BetaPriorKind prior_kind{BetaPriorKind::flat};
  TrustSolver solver{TrustSolver::fixed_point};
  std::optional<WellPosednessVerdict<Scalar>> verdict;
  std::optional<Scalar> limit_beta;
  std::vector<Scalar> inverse_trust_trace;
};

namespace detail {

template <typename Scalar>
struct FixedPointTerms {
  Scalar numerator{0};    // m~^T A m~
  Scalar denominator{0};  // n - beta tr(A S~) [- 2 for Jeffreys]
};

template <typename Scalar>
FixedPointTerms<Scalar> fixed_point_terms(const FieldModel<Scalar>& model, const ParameterState<Scalar>& state,
                                          const MeasurementSetup<Scalar>& setup) {
  const auto post = centered_posterior(model, state, setup);
  FixedPointTerms<Scalar> t;
  t.numerator = post.mean.dot(model.stiffness * post.mean);
  t.denominator = Scalar(model.size()) - state.beta * trace_of_product(model.stiffness, post.covariance);
  if (state.prior.kind == BetaPriorKind::jeffreys) t.denominator -= 2;
  return t;
}

// Bisection in log(beta) on the gradient. Returns nullopt without a bracket.
template <typename Scalar>
std::optional<std::pair<Scalar, int>> bisect_gradient(const FieldModel<Scalar>& model, ParameterState<Scalar> state,
                                                      const MeasurementSetup<Scalar>& setup, Scalar lo_beta,
                                                      Scalar hi_beta, int max_iterations) {
  auto grad_at = [&](Scalar beta) {
    state.beta = beta;
    return grad_param_potential(model, state, setup)(0);
  };
  const Scalar g_lo = grad_at(lo_beta);
  const Scalar g_hi = grad_at(hi_beta);
  if (!(g_lo < 0 && g_hi > 0)) return std::nullopt;
  Scalar lo = std::log(lo_beta);
  Scalar hi = std::log(hi_beta);
  Scalar mid = Scalar(0.5) * (lo + hi);
  int it = 0;
  for (; it < max_iterations; ++it) {
    mid = Scalar(0.5) * (lo + hi);
    const Scalar beta = std::exp(mid);
    const Scalar g = grad_at(beta);
    if (std::abs(g) <= Scalar(1e-10) * prior_expected_energy(beta, model.size())) break;
    (g > 0 ? hi : lo) = mid;
    if (hi - lo <= 4 * std::numeric_limits<Scalar>::epsilon()) break;
  }
  return std::make_pair(std::exp(mid), it + 1);
}

}  // namespace detail

/// MAP estimate of the trust with q fixed.
///
/// Flat and Jeffreys priors use the damped fixed-point iteration on x = 1/beta
///   x <- (1 - w) x + w * m~^T A m~ / (n - beta tr(A S~) [- 2]),
/// which is the zero of the gradient rearranged. Divergence (beta -> infinity,
/// the correct-model signature) is declared once x drops below
/// `divergence_threshold` while m~^T A m~ is negligible against q^T W G q.
/// If the iteration stalls, bisection on the gradient over
/// [bisection_lo, bisection_hi] takes over; a Gaussian trust prior goes
/// straight to bisection. Failure of both throws NumericalError.
template <typename Scalar>
TrustReport<Scalar> solve_trust(const FieldModel<Scalar>& model, const ParameterState<Scalar>& state,
                                const MeasurementSetup<Scalar>& setup, const TrustOptions<Scalar>& options = {}) {
  require_trust_only(options.targets);
  require(setup.observation_count() >= 1, "solve_trust: at least one observation is required");
  require(setup.has_data(), "solve_trust: measurement setup carries no data");
  const auto n = model.size();
  if (state.prior.kind == BetaPriorKind::jeffreys)
    require(n > 2, "solve_trust: a Jeffreys trust prior needs more than 2 subspace dimensions, got " +
                       std::to_string(n));
  require(options.damping > 0 && options.damping <= 1, "solve_trust: damping must lie in (0, 1]");
  require_positive_beta(options.initial_beta);

  TrustReport<Scalar> report;
  report.prior_kind = state.prior.kind;
  const Vector<Scalar> gq = model.green_source(state.source);
  const Scalar source_energy = state.source.values.dot(model.laplacian.weights.cwiseProduct(gq));
  // A zero source gives no natural energy scale; fall back to unit scale.
  const Scalar energy_scale = source_energy > 0 ? source_energy : Scalar(1);

  ParameterState<Scalar> s = state;
  bool converged = false;
  if (state.prior.kind != BetaPriorKind::gaussian) {
    Scalar x = Scalar(1) / options.initial_beta;
    report.inverse_trust_trace.push_back(x);
    for (int it = 0; it < options.max_iterations; ++it) {
      s.beta = Scalar(1) / x;
      const auto t = detail::fixed_point_terms(model, s, setup);
      report.iterations = it + 1;
      report.last_beta_iterate = s.beta;
      if (!(t.denominator > 0) || !std::isfinite(t.numerator)) break;
      const Scalar next = (1 - options.damping) * x + options.damping * t.numerator / t.denominator;
      report.residual = std::abs(next - x);
      report.inverse_trust_trace.push_back(next);
      if (next < options.divergence_threshold &&
          t.numerator < options.numerator_threshold * energy_scale) {
        report.diverged = true;
        report.last_beta_iterate = Scalar(1) / next;
        break;
      }
      if (report.residual <= options.tolerance * next) {
        x = next;
        converged = true;
        break;
      }
      x = next;
    }
    if (converged) report.beta_hat = Scalar(1) / x;
  }

  if (!converged && !report.diverged) {
    const auto root = detail::bisect_gradient(model, state, setup, options.bisection_lo, options.bisection_hi,
                                              options.max_iterations);
    if (!root)
      throw NumericalError(
          "solve_trust: fixed-point iteration did not converge and the gradient is not bracketed on [" +
          std::to_string(options.bisection_lo) + ", " + std::to_string(options.bisection_hi) + "]");
    report.solver = TrustSolver::bisection;
    report.beta_hat = root->first;
    report.iterations += root->second;
    report.last_beta_iterate = root->first;
  }

  if (report.beta_hat) {
    s.beta = *report.beta_hat;
    const auto calc = potential_calculus(model, s, setup);
    report.grad_residual = calc.grad(0);
    report.informativeness_margin = calc.informativeness_margin;
    report.hessian = calc.hessian(0, 0);
  } else {
    s.beta = report.last_beta_iterate;
    const auto calc = potential_calculus(model, s, setup);
    report.grad_residual = calc.grad(0);
    report.informativeness_margin = calc.informativeness_margin;
    report.hessian = calc.hessian(0, 0);
  }

  if (options.assess_wellposedness) {
    const Scalar centre = report.beta_hat ? *report.beta_hat : Scalar(1);
    const auto grid = log_spaced_grid(centre * Scalar(1e-2), centre * Scalar(1e1), options.verdict_points);
    report.verdict = wellposedness_verdict(grid, model, state, setup, options.targets);
  }
  return report;
}

template <typename Scalar>
struct LimitTrust {
  std::optional<Scalar> beta;  // empty when diverged
  Scalar energy{0};            // psi*^T A psi*
};

/// Infinite-data optimal trust 1/beta* = psi*^T A psi* / n (flat) or
/// psi*^T A psi* / (n - 2) (Jeffreys), with psi* = phi* - G q.
template <typename Scalar, typename D>
LimitTrust<Scalar> limit_trust(const Eigen::MatrixBase<D>& psi_star, const FieldModel<Scalar>& model,
                               BetaPriorKind prior_kind) {
  const auto n = model.size();
  require(psi_star.size() == n, "limit_trust: field length does not match the mesh");
  require(prior_kind != BetaPriorKind::gaussian, "limit_trust: only flat and Jeffreys priors have a closed form");
  if (prior_kind == BetaPriorKind::jeffreys) require(n > 2, "limit_trust: Jeffreys prior needs n > 2");
  LimitTrust<Scalar> out;
  out.energy = psi_star.dot(model.stiffness * psi_star);
  if (out.energy <= Scalar(1e-14) * Scalar(n)) return out;
  const Scalar dims = prior_kind == BetaPriorKind::jeffreys ? Scalar(n - 2) : Scalar(n);
  out.beta = dims / out.energy;
  return out;
}

/// Closed-form curvature of H(beta; d) at the Jeffreys optimum in the
/// infinite-data limit, 1/2 beta*^{-2} (n - 1).
template <typename Scalar>
Scalar second_derivative_at_optimum(Scalar beta_star, Eigen::Index n, BetaPriorKind prior_kind) {
  require(prior_kind == BetaPriorKind::jeffreys, "second_derivative_at_optimum: defined for the Jeffreys prior");
  require(std::isfinite(beta_star) && beta_star > 0,
          "second_derivative_at_optimum: beta* must be finite and positive (diverged trust)");
  require(n >= 1, "second_derivative_at_optimum: n must be positive");
  return Scalar(0.5) * Scalar(n - 1) / (beta_star * beta_star);
}

/// d = R phi* (+ sigma z with z standard normal drawn from `seed`).
template <typename Scalar>
Vector<Scalar> synthesize_data(const MeasurementSetup<Scalar>& setup, const Vector<Scalar>& truth,
                               std::uint64_t seed, bool add_noise = true) {
  require(truth.size() == setup.operator_r.cols(), "synthesize_data: truth length does not match R");
  Vector<Scalar> d = setup.operator_r * truth;
  if (add_noise) d += std::sqrt(setup.noise_variance) * standard_normal<Scalar>(d.size(), seed);
  return d;
}

template <typename Scalar>
struct DataGeneration {
  std::uint64_t seed{0};
  bool add_noise{true};
};

/// Ground truths phi*_c = G q + c psi0 for a list of mismatch scales c.
template <typename Scalar>
struct MismatchFamily {
  Vector<Scalar> psi0;
  std::vector<Scalar> scales;
};

template <typename Scalar>
struct SweepRow {
  Scalar scale{0};
  std::optional<TrustReport<Scalar>> report;
  LimitTrust<Scalar> limit;
  std::string error;  // non-empty when the solve failed
};

template <typename Scalar>
struct SweepReport {
  std::vector<SweepRow<Scalar>> rows;
  bool all_solved{true};
  bool monotone{false};
  std::vector<Scalar> halving_ratios;  // beta(c/2) / beta(c) for every halving pair
  bool scaling_law_holds{false};       // every ratio within [3.8, 4.2]
};

/// Trust estimates along a family of mismatched ground truths. The same noise
/// draw is reused for every member. Diverged members count as beta = infinity
/// when checking that beta decreases strictly as c grows.
template <typename Scalar>
SweepReport<Scalar> model_error_sweep(const MismatchFamily<Scalar>& family,
                                      const MeasurementSetup<Scalar>& setup_template,
                                      const FieldModel<Scalar>& model, const ParameterState<Scalar>& state,
                                      const DataGeneration<Scalar>& generation,
                                      TrustOptions<Scalar> options = {}) {
  require(!family.scales.empty(), "model_error_sweep: no mismatch scales given");
  require(family.psi0.size() == model.size(), "model_error_sweep: psi0 length does not match the mesh");
  const Vector<Scalar> gq = model.green_source(state.source);
  SweepReport<Scalar> out;
  for (const Scalar c : family.scales) {
    require(std::isfinite(c) && c >= 0, "model_error_sweep: mismatch scales must be nonnegative");
    SweepRow<Scalar> row;
    row.scale = c;
    const Vector<Scalar> psi = c * family.psi0;
    row.limit = limit_trust(psi, model, state.prior.kind == BetaPriorKind::gaussian ? BetaPriorKind::flat
                                                                                    : state.prior.kind);
    const Vector<Scalar> truth = gq + psi;
    const auto setup = with_data(setup_template, synthesize_data(setup_template, truth, generation.seed,
                                                                 generation.add_noise));
    try {
      row.report = solve_trust(model, state, setup, options);
    } catch (const std::exception& e) {
      row.error = e.what();
      out.all_solved = false;
    }
    out.rows.push_back(std::move(row));
  }
  auto beta_of = [](const SweepRow<Scalar>& r) {
    return r.report->beta_hat ? *r.report->beta_hat : std::numeric_limits<Scalar>::infinity();
  };
  if (out.all_solved) {
    std::vector<const SweepRow<Scalar>*> sorted;
    for (const auto& r : out.rows) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->scale < b->scale; });
    out.monotone = true;
    for (std::size_t i = 1; i < sorted.size(); ++i)
      if (!(sorted[i]->scale > sorted[i - 1]->scale && beta_of(*sorted[i]) < beta_of(*sorted[i - 1])))
        out.monotone = false;
    for (const auto& big : out.rows) {
      for (const auto& small : out.rows) {
        if (big.scale > 0 && small.scale == big.scale / 2 && big.report->beta_hat && small.report->beta_hat)
          out.halving_ratios.push_back(*small.report->beta_hat / *big.report->beta_hat);
      }
    }
    out.scaling_law_holds = !out.halving_ratios.empty();
    for (const Scalar r : out.halving_ratios)
      if (!(r >= Scalar(3.8) && r <= Scalar(4.2))) out.scaling_law_holds = false;
  }
  return out;
}

template <typename Scalar>
struct ConvergenceRow {
  int density{0};
  Eigen::Index points{0};
  DesignMetrics<Scalar> metrics;
  std::optional<Scalar> beta_hat;
  Scalar beta_used{0};
  Scalar mean_error{0};  // ||psi* - m~||_{L2}
  Scalar cov_norm{0};    // ||s~^{1/2}||_{L2} = sqrt(sum_i w_i S~_ii)
};

template <typename Scalar>
struct ConvergenceReport {
  std::vector<ConvergenceRow<Scalar>> rows;
  // log-log slopes of the norms against the design density 1/h_X
  // (negative when the norms shrink under refinement)
  Scalar mean_slope{0};
  Scalar cov_slope{0};
  bool mean_decreasing{false};
  bool cov_decreasing{false};
};

/// Least-squares slope of log(y) against log(x).
template <typename Scalar>
Scalar loglog_slope(const std::vector<Scalar>& x, const std::vector<Scalar>& y) {
  require(x.size() == y.size() && x.size() >= 2, "loglog_slope: need at least two points");
  Scalar mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= Scalar(x.size());
  my /= Scalar(y.size());
  Scalar sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Scalar dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

/// Posterior mean error and posterior spread along nested uniform designs,
/// re-estimating the trust at every density.
template <typename Scalar>
ConvergenceReport<Scalar> convergence_study(const FieldModel<Scalar>& model, const ParameterState<Scalar>& state,
                                            const Vector<Scalar>& true_field, Scalar noise_sigma,
                                            const std::vector<int>& densities,
                                            const DataGeneration<Scalar>& generation,
                                            TrustOptions<Scalar> options = {}) {
  require(!densities.empty(), "convergence_study: density list is empty");
  require(true_field.size() == model.size(), "convergence_study: truth length does not match the mesh");
  for (std::size_t i = 0; i < densities.size(); ++i) {
    require(densities[i] >= 2, "convergence_study: densities must be at least 2");
    if (i > 0)
      require(densities[i] > densities[i - 1] && densities[i] % densities[i - 1] == 0,
              "convergence_study: designs must be nested (each density a multiple of the previous)");
  }
  options.assess_wellposedness = false;
  const Vector<Scalar> psi_star = true_field - model.green_source(state.source);
  const Vector<Scalar> w = model.laplacian.weights;

  ConvergenceReport<Scalar> out;
  std::vector<Scalar> inv_fill, mean_err, cov_norm;
  for (const int k : densities) {
    ConvergenceRow<Scalar> row;
    row.density = k;
    const Matrix<Scalar> locs = uniform_design(model.mesh, k);
    row.points = locs.rows();
    row.metrics = design_metrics(model.mesh, locs);
    auto setup = build_measurement(model.mesh, locs, noise_sigma * noise_sigma);
    setup = with_data(setup, synthesize_data(setup, true_field, generation.seed, generation.add_noise));
    const auto trust = solve_trust(model, state, setup, options);
    row.beta_hat = trust.beta_hat;
    row.beta_used = trust.beta_hat ? *trust.beta_hat : trust.last_beta_iterate;
    auto s = state;
    s.beta = row.beta_used;
    const auto post = centered_posterior(model, s, setup);
    const Vector<Scalar> err = psi_star - post.mean;
    row.mean_error = std::sqrt(err.dot(w.cwiseProduct(err)));
    row.cov_norm = std::sqrt(post.covariance.diagonal().dot(w));
    inv_fill.push_back(Scalar(1) / row.metrics.fill_distance);
    mean_err.push_back(row.mean_error);
    cov_norm.push_back(row.cov_norm);
    out.rows.push_back(row);
  }
  out.mean_decreasing = true;
  out.cov_decreasing = true;
  for (std::size_t i = 1; i < out.rows.size(); ++i) {
    if (!(mean_err[i] < mean_err[i - 1])) out.mean_decreasing = false;
    if (!(cov_norm[i] < cov_norm[i - 1])) out.cov_decreasing = false;
  }
  if (out.rows.size() >= 2) {
    out.mean_slope = loglog_slope(inv_fill, mean_err);
    out.cov_slope = loglog_slope(inv_fill, cov_norm);
  }
  return out;
}

using TrustReportd = TrustReport<double>;
using TrustOptionsd = TrustOptions<double>;

}  // namespace ift

#endif  // IFT_TRUST_INFERENCE_HPP
