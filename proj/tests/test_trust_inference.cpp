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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"

using namespace ift;
using namespace ift::testing;

namespace {

struct Dense {
  Meshd mesh;
  FieldModel<double> model;
  ParameterStated state;
  MeasurementSetupd design;
  Vectord psi0;
};

Dense dense_problem(int interior = 32, int density = 64, double sigma = 1e-3,
                    BetaPriord prior = BetaPriord::flat()) {
  Dense d{unit_line(interior + 2), {}, {}, {}, {}};
  d.model = build_field_model(d.mesh);
  d.state = ParameterStated{1.0, SourceFieldd{sample_on_interior(d.mesh, [](const Vectord&) { return 1.0; })}, prior};
  d.design = build_measurement(d.mesh, uniform_design(d.mesh, density), sigma * sigma);
  d.psi0 = sample_on_interior(d.mesh, [](const Vectord& x) {
    return std::sin(M_PI * x(0)) + 0.5 * std::sin(3 * M_PI * x(0));
  });
  return d;
}

MeasurementSetupd data_for(const Dense& d, const Vectord& truth, std::uint64_t seed, bool noise = true) {
  return with_data(d.design, synthesize_data(d.design, truth, seed, noise));
}

}  // namespace

TEST_CASE("correct model with noise-free dense data diverges") {
  const auto d = dense_problem(32, 64, 1e-4);
  const Vectord truth = d.model.green_source(d.state.source);
  const auto report = solve_trust(d.model, d.state, data_for(d, truth, 1, false));
  CHECK(report.diverged);
  CHECK_FALSE(report.beta_hat);
  CHECK(report.last_beta_iterate > 1e12);
  REQUIRE(report.verdict);
  CHECK(report.verdict->kind == VerdictKind::no_root);
}

TEST_CASE("mismatched source gives a finite trust at the gradient root") {
  for (auto prior : {BetaPriord::flat(), BetaPriord::jeffreys()}) {
    const auto d = dense_problem(32, 64, 1e-3, prior);
    const Vectord truth = d.model.green_source(d.state.source) + d.psi0;
    const auto report = solve_trust(d.model, d.state, data_for(d, truth, 2));
    REQUIRE(report.beta_hat);
    CHECK_FALSE(report.diverged);
    CHECK(report.solver == TrustSolver::fixed_point);
    const double scale = prior_expected_energy(*report.beta_hat, d.model.size());
    CHECK(std::abs(report.grad_residual) <= 1e-8 * scale);
    CHECK(report.informativeness_margin > 0);
    REQUIRE(report.verdict);
    CHECK(report.verdict->kind == VerdictKind::weakly_well_posed);
    CHECK(rel_err(*report.verdict->beta_star, *report.beta_hat) <= 1e-6);
    // balance of expected energies at the optimum
    auto s = d.state;
    s.beta = *report.beta_hat;
    const auto calc = potential_calculus(d.model, s, data_for(d, truth, 2));
    CHECK(std::abs(calc.posterior_expectation - calc.prior_expectation + calc.prior_grad) <= 1e-8 * calc.prior_expectation);
    const auto limit = limit_trust(d.psi0, d.model, prior.kind);
    REQUIRE(limit.beta);
    CHECK(rel_err(*report.beta_hat, *limit.beta) <= 0.05);
  }
}

TEST_CASE("Gaussian trust prior is solved by bisection") {
  auto d = dense_problem(16, 32, 1e-2);
  d.state.prior = BetaPriord::gaussian(5.0, 100.0);
  const Vectord truth = d.model.green_source(d.state.source) + d.psi0;
  const auto report = solve_trust(d.model, d.state, data_for(d, truth, 3));
  REQUIRE(report.beta_hat);
  CHECK(report.solver == TrustSolver::bisection);
  CHECK(std::abs(report.grad_residual) <= 1e-8 * prior_expected_energy(*report.beta_hat, d.model.size()));
}

TEST_CASE("invalid trust problems are rejected") {
  const auto tiny = unit_line(4);  // two interior nodes
  const auto model = build_field_model(tiny);
  ParameterStated s{1.0, SourceFieldd{Vectord::Ones(2)}, BetaPriord::jeffreys()};
  auto setup = with_data(build_measurement(tiny, Matrixd{{0.4}}, 0.01), Vectord(Vectord::Ones(1)));
  CHECK_THROWS_AS(solve_trust(model, s, setup), InvalidArgument);
  s.prior = BetaPriord::flat();
  CHECK_NOTHROW(solve_trust(model, s, setup));
  CHECK_THROWS_AS(solve_trust(model, s, build_measurement(tiny, Matrixd(0, 1), 0.01)), InvalidArgument);
  CHECK_THROWS_AS(solve_trust(model, s, build_measurement(tiny, Matrixd{{0.4}}, 0.01)), InvalidArgument);
  TrustOptionsd both;
  both.targets.source = true;
  CHECK_THROWS_AS(solve_trust(model, s, setup, both), InvalidArgument);
  TrustOptionsd bad;
  bad.damping = 0;
  CHECK_THROWS_AS(solve_trust(model, s, setup, bad), InvalidArgument);
}

TEST_CASE("unbracketed gradient is reported, never silent") {
  const auto d = dense_problem(12, 16, 1e-2);
  const Vectord truth = d.model.green_source(d.state.source) + d.psi0;
  TrustOptionsd opts;
  opts.max_iterations = 1;
  opts.bisection_lo = 1e3;
  opts.bisection_hi = 1e6;
  CHECK_THROWS_AS(solve_trust(d.model, d.state, data_for(d, truth, 4), opts), NumericalError);
}

TEST_CASE("limit trust") {
  const auto d = dense_problem(20, 16);
  CHECK_FALSE(limit_trust(Vectord(Vectord::Zero(20)), d.model, BetaPriorKind::flat).beta);
  const auto base = limit_trust(d.psi0, d.model, BetaPriorKind::flat);
  REQUIRE(base.beta);
  CHECK(rel_err(*base.beta, 20 / d.psi0.dot(d.model.stiffness * d.psi0)) <= 1e-15);
  for (double c : {0.5, 3.0, 1e-3}) {
    const auto scaled = limit_trust(Vectord(c * d.psi0), d.model, BetaPriorKind::flat);
    CHECK(rel_err(*scaled.beta * c * c, *base.beta) <= 1e-13);
  }
  const auto jeff = limit_trust(d.psi0, d.model, BetaPriorKind::jeffreys);
  CHECK(*jeff.beta >= *base.beta * 18.0 / 20.0 * (1 - 1e-15));
  CHECK(rel_err(*jeff.beta, *base.beta * 18.0 / 20.0) <= 1e-14);
  CHECK_THROWS_AS(limit_trust(Vectord(Vectord::Zero(3)), d.model, BetaPriorKind::flat), InvalidArgument);
  CHECK_THROWS_AS(limit_trust(d.psi0, d.model, BetaPriorKind::gaussian), InvalidArgument);
}

TEST_CASE("limit trust grows with the subspace dimension") {
  auto psi = [](const Vectord& x) { return std::sin(M_PI * x(0)) + 0.5 * std::sin(3 * M_PI * x(0)); };
  double prev = 0;
  for (int nodes : {17, 33, 65}) {
    const auto mesh = unit_line(nodes);
    const auto model = build_field_model(mesh);
    const auto lim = limit_trust(sample_on_interior(mesh, psi), model, BetaPriorKind::flat);
    REQUIRE(lim.beta);
    CHECK(*lim.beta > prev);
    prev = *lim.beta;
  }
}

TEST_CASE("second derivative at the optimum") {
  CHECK(second_derivative_at_optimum(2.0, 1, BetaPriorKind::jeffreys) == 0.0);
  CHECK(second_derivative_at_optimum(1.0, 3, BetaPriorKind::jeffreys) == 1.0);
  CHECK(second_derivative_at_optimum(0.5, 11, BetaPriorKind::jeffreys) == doctest::Approx(20.0));
  CHECK_THROWS_AS(second_derivative_at_optimum(std::numeric_limits<double>::infinity(), 5, BetaPriorKind::jeffreys),
                  InvalidArgument);
  CHECK_THROWS_AS(second_derivative_at_optimum(1.0, 5, BetaPriorKind::flat), InvalidArgument);
}

TEST_CASE("mismatch sweep follows the inverse-square law") {
  const auto d = dense_problem(32, 64, 1e-3);
  MismatchFamily<double> family{d.psi0, {1.0, 0.5, 0.25, 0.125}};
  const auto sweep = model_error_sweep(family, d.design, d.model, d.state, DataGeneration<double>{7, true});
  CHECK(sweep.rows.size() == 4);
  CHECK(sweep.all_solved);
  CHECK(sweep.monotone);
  CHECK(sweep.halving_ratios.size() == 3);
  CHECK(sweep.scaling_law_holds);
  for (std::size_t i = 1; i < sweep.rows.size(); ++i)
    CHECK(*sweep.rows[i].limit.beta > *sweep.rows[i - 1].limit.beta);
}

TEST_CASE("sweep row for the correct model diverges") {
  const auto d = dense_problem(24, 32, 1e-3);
  MismatchFamily<double> family{d.psi0, {0.5, 0.0}};
  const auto sweep = model_error_sweep(family, d.design, d.model, d.state, DataGeneration<double>{1, false});
  REQUIRE(sweep.all_solved);
  CHECK(sweep.rows[1].report->diverged);
  CHECK_FALSE(sweep.rows[1].limit.beta);
  CHECK(sweep.monotone);
  CHECK_THROWS_AS(model_error_sweep(MismatchFamily<double>{d.psi0, {}}, d.design, d.model, d.state,
                                    DataGeneration<double>{}),
                  InvalidArgument);
}

TEST_CASE("convergence along nested designs") {
  const auto mesh = unit_line(129);
  const auto model = build_field_model(mesh);
  ParameterStated s{1.0, SourceFieldd{sample_on_interior(mesh, [](const Vectord&) { return 1.0; })}, BetaPriord::flat()};
  const Vectord truth = model.green_source(s.source) +
                        sample_on_interior(mesh, [](const Vectord& x) { return std::sin(M_PI * x(0)) + 0.5 * std::sin(3 * M_PI * x(0)); });
  const auto study = convergence_study(model, s, truth, 1e-4, {8, 16, 32, 64}, DataGeneration<double>{3, true});
  REQUIRE(study.rows.size() == 4);
  for (std::size_t i = 1; i < study.rows.size(); ++i)
    CHECK(std::abs(study.rows[i].metrics.fill_distance - study.rows[i - 1].metrics.fill_distance / 2) <= 1e-12);
  CHECK(study.cov_decreasing);
  CHECK(study.mean_decreasing);
  CHECK(study.cov_slope < 0);
  CHECK(study.mean_slope <= -1);
  CHECK_THROWS_AS(convergence_study(model, s, truth, 1e-4, {}, DataGeneration<double>{}), InvalidArgument);
  CHECK_THROWS_AS(convergence_study(model, s, truth, 1e-4, {8, 12}, DataGeneration<double>{}), InvalidArgument);
  CHECK_THROWS_AS(convergence_study(model, s, truth, 1e-4, {16, 8}, DataGeneration<double>{}), InvalidArgument);
}

TEST_CASE("log-log slope") {
  CHECK(loglog_slope<double>({1, 2, 4}, {1, 0.25, 0.0625}) == doctest::Approx(-2.0));
  CHECK_THROWS_AS(loglog_slope<double>({1}, {1}), InvalidArgument);
}
