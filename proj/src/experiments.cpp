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

#include "experiments.hpp"

#include "csv.hpp"
#include "errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <random>

namespace ift::app {

namespace {

using nlohmann::json;

std::string resolve(const std::string& base, const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? path : (std::filesystem::path(base) / p).string();
}

template <typename T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

// Nodal CSV whose coordinate columns must match the interior nodes in order.
Vectord read_nodal(const std::string& path, const Meshd& mesh, const std::string& value_column) {
  const auto table = read_csv(path);
  const std::vector<std::string> expected =
      mesh.dim() == 1 ? std::vector<std::string>{"x", value_column} : std::vector<std::string>{"x", "y", value_column};
  if (table.header != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    throw ConfigError(path + ": header must be " + want);
  }
  const Matrixd pts = mesh.interior_points();
  if (Eigen::Index(table.rows.size()) != pts.rows())
    throw ConfigError(path + ": expected " + std::to_string(pts.rows()) + " rows (one per interior node), found " +
                      std::to_string(table.rows.size()));
  double tol = 0;
  for (int a = 0; a < mesh.dim(); ++a) tol = std::max(tol, 1e-9 * mesh.extent(a).length());
  Vectord v(pts.rows());
  for (Eigen::Index k = 0; k < pts.rows(); ++k) {
    const auto& row = table.rows[std::size_t(k)];
    for (int a = 0; a < mesh.dim(); ++a)
      if (std::abs(row[std::size_t(a)] - pts(k, a)) > tol)
        throw ConfigError(path + ": row " + std::to_string(k + 1) + " does not sit on interior node " +
                          std::to_string(k));
    v(k) = row[std::size_t(mesh.dim())];
  }
  return v;
}

std::string verdict_name(const TrustReportd& r) {
  return r.verdict ? std::string(to_string(r.verdict->kind)) : std::string("not_assessed");
}

json verdict_json(const std::optional<WellPosednessVerdict<double>>& v) {
  if (!v) return nullptr;
  return json{{"kind", std::string(to_string(v->kind))},
              {"beta_star", opt(v->beta_star)},
              {"grad_at_root", opt(v->grad_at_root)},
              {"informative", v->informative},
              {"convex", v->convex},
              {"sign_changes", v->sign_changes},
              {"min_margin", v->min_margin}};
}

json trust_json(const TrustReportd& r) {
  return json{{"beta_hat", opt(r.beta_hat)},
              {"diverged", r.diverged},
              {"iterations", r.iterations},
              {"residual", r.residual},
              {"last_beta_iterate", r.last_beta_iterate},
              {"grad_residual", r.grad_residual},
              {"hessian", r.hessian},
              {"informativeness_margin", r.informativeness_margin},
              {"prior_kind", std::string(to_string(r.prior_kind))},
              {"solver", std::string(to_string(r.solver))},
              {"verdict", verdict_json(r.verdict)},
              {"limit_beta", opt(r.limit_beta)},
              {"inverse_trust_trace", r.inverse_trust_trace}};
}

json metrics_json(const DesignMetrics<double>& m) {
  return json{{"fill_distance", m.fill_distance},
              {"separation_radius", opt(m.separation_radius)},
              {"mesh_ratio", opt(m.mesh_ratio)},
              {"probe_points", m.probe_points}};
}

BetaPriord make_prior(const PriorSpec& p) {
  switch (p.kind) {
    case BetaPriorKind::flat: return BetaPriord::flat();
    case BetaPriorKind::jeffreys: return BetaPriord::jeffreys();
    case BetaPriorKind::gaussian: return BetaPriord::gaussian(p.mean, p.variance);
  }
  return BetaPriord::flat();
}

Matrixd design_locations(const ExperimentConfig& c, const Meshd& mesh, std::optional<Vectord>* data) {
  if (c.measurement.uniform_density) return uniform_design(mesh, *c.measurement.uniform_density);
  const auto path = resolve(c.base_dir, c.measurement.csv);
  const auto table = read_csv(path);
  std::vector<std::string> coords = mesh.dim() == 1 ? std::vector<std::string>{"x"} : std::vector<std::string>{"x", "y"};
  auto with_d = coords;
  with_d.push_back("d");
  const bool has_d = table.header == with_d;
  if (!has_d && table.header != coords)
    throw ConfigError(path + (mesh.dim() == 1 ? ": header must be x or x,d" : ": header must be x,y or x,y,d"));
  if (table.rows.empty()) throw ConfigError(path + ": no observations");
  Matrixd locs(Eigen::Index(table.rows.size()), mesh.dim());
  Vectord d(Eigen::Index(table.rows.size()));
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    for (int a = 0; a < mesh.dim(); ++a) locs(Eigen::Index(i), a) = table.rows[i][std::size_t(a)];
    if (has_d) d(Eigen::Index(i)) = table.rows[i][std::size_t(mesh.dim())];
  }
  if (has_d && data) *data = d;
  return locs;
}

}  // namespace

json error_record(int code, const std::string& kind, const std::string& message) {
  return json{{"status", "error"}, {"exit_code", code}, {"kind", kind}, {"message", message}};
}

Vectord evaluate_source(const SourceSpec& spec, const Meshd& mesh, const std::string& base_dir) {
  if (spec.type == "csv") return read_nodal(resolve(base_dir, spec.path), mesh, "q");
  if (spec.type == "sum") {
    Vectord v = Vectord::Zero(mesh.interior_count());
    for (const auto& t : spec.terms) v += evaluate_source(t, mesh, base_dir);
    return v;
  }
  return sample_on_interior(mesh, [&](const Vectord& x) {
    if (spec.type == "constant") return spec.value;
    if (spec.type == "sine") {
      double v = spec.amplitude;
      for (int a = 0; a < mesh.dim(); ++a)
        v *= std::sin(spec.mode * M_PI * (x(a) - mesh.extent(a).lower) / mesh.extent(a).length());
      return v;
    }
    double r2 = 0;
    for (int a = 0; a < mesh.dim(); ++a) r2 += (x(a) - spec.center[std::size_t(a)]) * (x(a) - spec.center[std::size_t(a)]);
    return spec.amplitude * std::exp(-r2 / (2 * spec.width * spec.width));
  });
}

Problem build_problem(const ExperimentConfig& c) {
  const auto mesh = build_mesh<double>(c.mesh.dim, c.mesh.extent, c.mesh.nodes_per_axis);
  if (mesh.interior_count() > 4096)
    throw ConfigError("mesh: " + std::to_string(mesh.interior_count()) +
                      " interior nodes exceed the dense-operator limit of 4096");
  Problem p;
  p.model = build_field_model(mesh);
  p.state.beta = 1;
  p.state.source.values = evaluate_source(c.source, mesh, c.base_dir);
  p.state.prior = make_prior(c.prior);
  const Vectord gq = p.model.green_source(p.state.source);
  if (c.truth) {
    if (c.truth->source) {
      const Vectord q_true = evaluate_source(*c.truth->source, mesh, c.base_dir);
      p.psi0 = p.model.green.entries * (q_true - p.state.source.values);
      p.truth = gq + c.truth->scale * *p.psi0;
    } else {
      p.truth = read_nodal(resolve(c.base_dir, c.truth->csv), mesh, "phi");
    }
  }
  std::optional<Vectord> file_data;
  const Matrixd locs = design_locations(c, mesh, &file_data);
  auto setup = build_measurement(mesh, locs, c.measurement.sigma * c.measurement.sigma);
  if (file_data) {
    setup = with_data(setup, *file_data);
    p.data_from_file = true;
  } else {
    const Vectord truth = p.truth ? *p.truth : gq;
    if (!p.truth) p.truth = gq;
    setup = with_data(setup, synthesize_data(setup, truth, c.seed, c.measurement.add_noise));
  }
  p.setup = std::move(setup);
  return p;
}

namespace {

RunOutcome fail(int code, const std::string& kind, const std::string& msg) {
  RunOutcome out;
  out.exit_code = code;
  out.error = error_record(code, kind, msg);
  return out;
}

template <typename F>
RunOutcome guarded(F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    return fail(kConfigError, "config", e.what());
  } catch (const InvalidArgument& e) {
    return fail(kConfigError, "invalid_argument", e.what());
  } catch (const NumericalError& e) {
    return fail(kSolverFailure, "solver", e.what());
  } catch (const std::exception& e) {
    return fail(kSolverFailure, "runtime", e.what());
  }
}

std::vector<std::string> coord_header(const Meshd& mesh) {
  return mesh.dim() == 1 ? std::vector<std::string>{"x"} : std::vector<std::string>{"x", "y"};
}

}  // namespace

RunOutcome run_infer(const ExperimentConfig& config) {
  return guarded([&] {
    const auto p = build_problem(config);
    auto opts = config.solver;
    opts.assess_wellposedness = false;  // judged on the reported grid below
    auto report = solve_trust(p.model, p.state, p.setup, opts);
    std::optional<Vectord> psi_star;
    if (p.truth) psi_star = *p.truth - p.model.green_source(p.state.source);
    if (psi_star && p.state.prior.kind != BetaPriorKind::gaussian)
      report.limit_beta = limit_trust(*psi_star, p.model, p.state.prior.kind).beta;

    const double centre = report.beta_hat ? *report.beta_hat : 1.0;
    const auto grid = config.grid ? log_spaced_grid(config.grid->lo, config.grid->hi, config.grid->points)
                                  : log_spaced_grid(centre * 1e-2, centre * 1e1, 101);
    const auto evals = evaluate_grid(grid, p.model, p.state, p.setup);
    report.verdict = wellposedness_verdict(grid, p.model, p.state, p.setup, opts.targets);
    CsvWriter grid_csv({"beta", "potential", "grad", "hessian", "margin"});
    for (const auto& e : evals)
      grid_csv.row({format_number(e.beta), format_number(e.potential), format_number(e.grad),
                    format_number(e.hessian), format_number(e.margin)});

    auto s = p.state;
    s.beta = report.beta_hat ? *report.beta_hat : report.last_beta_iterate;
    const auto post = field_posterior(p.model, s, p.setup);
    auto header = coord_header(p.model.mesh);
    for (const char* h : {"mean", "variance"}) header.emplace_back(h);
    if (p.truth) header.emplace_back("truth");
    CsvWriter fields(header);
    const Matrixd pts = p.model.mesh.interior_points();
    for (Eigen::Index k = 0; k < pts.rows(); ++k) {
      std::vector<std::string> row;
      for (Eigen::Index a = 0; a < pts.cols(); ++a) row.push_back(format_number(pts(k, a)));
      row.push_back(format_number(post.mean(k)));
      row.push_back(format_number(post.covariance(k, k)));
      if (p.truth) row.push_back(format_number((*p.truth)(k)));
      fields.row(row);
    }

    json doc = trust_json(report);
    doc["status"] = "ok";
    doc["interior_count"] = p.model.size();
    doc["observations"] = p.setup.observation_count();
    doc["noise_sigma"] = config.measurement.sigma;
    doc["seed"] = config.seed;
    doc["beta_used_for_fields"] = s.beta;
    doc["design"] = metrics_json(design_metrics(p.model.mesh, p.setup.locations));
    RunOutcome out;
    out.artifacts = {{"trust_report.json", doc.dump(2) + "\n"},
                     {"posterior_grid.csv", grid_csv.str()},
                     {"fields.csv", fields.str()}};
    return out;
  });
}

RunOutcome run_sweep(const ExperimentConfig& config) {
  return guarded([&] {
    if (!config.sweep) throw ConfigError("config: the sweep subcommand needs a 'sweep' section");
    const auto p = build_problem(config);
    if (p.data_from_file) throw ConfigError("sweep: measurement data must be synthesized, drop the d column");
    const auto& sw = *config.sweep;
    json summary{{"status", "ok"}, {"seed", config.seed}, {"interior_count", p.model.size()}};
    RunOutcome out;

    CsvWriter sweep_csv({"scale", "status", "beta_hat", "diverged", "limit_beta", "iterations", "residual",
                         "grad_residual", "margin", "verdict", "error"});
    if (!sw.scales.empty()) {
      if (!p.psi0) throw ConfigError("sweep.scales: needs truth.source to define the mismatch direction");
      MismatchFamily<double> family{*p.psi0, sw.scales};
      const auto report = model_error_sweep(family, p.setup, p.model, p.state,
                                            DataGeneration<double>{config.seed, config.measurement.add_noise},
                                            config.solver);
      for (const auto& row : report.rows) {
        const bool ok = row.error.empty();
        std::string err = row.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        sweep_csv.row({format_number(row.scale), ok ? "ok" : "failed",
                       ok && row.report->beta_hat ? format_number(*row.report->beta_hat) : "",
                       ok ? (row.report->diverged ? "true" : "false") : "",
                       row.limit.beta ? format_number(*row.limit.beta) : "",
                       ok ? std::to_string(row.report->iterations) : "",
                       ok ? format_number(row.report->residual) : "",
                       ok ? format_number(row.report->grad_residual) : "",
                       ok ? format_number(row.report->informativeness_margin) : "",
                       ok ? verdict_name(*row.report) : "", err});
      }
      summary["mismatch"] = json{{"all_solved", report.all_solved},
                                 {"monotone", report.monotone},
                                 {"halving_ratios", report.halving_ratios},
                                 {"scaling_law_holds", report.scaling_law_holds}};
      out.artifacts.push_back({"sweep.csv", sweep_csv.str()});
    }

    if (sw.densities) {
      if (!p.truth) throw ConfigError("sweep.densities: needs a known ground truth");
      const auto study = convergence_study(p.model, p.state, *p.truth, config.measurement.sigma, *sw.densities,
                                           DataGeneration<double>{config.seed, config.measurement.add_noise},
                                           config.solver);
      CsvWriter conv({"density", "points", "fill_distance", "separation_radius", "mesh_ratio", "beta_hat",
                      "beta_used", "mean_error", "cov_norm"});
      for (const auto& r : study.rows)
        conv.row({std::to_string(r.density), std::to_string(r.points), format_number(r.metrics.fill_distance),
                  r.metrics.separation_radius ? format_number(*r.metrics.separation_radius) : "",
                  r.metrics.mesh_ratio ? format_number(*r.metrics.mesh_ratio) : "",
                  r.beta_hat ? format_number(*r.beta_hat) : "", format_number(r.beta_used),
                  format_number(r.mean_error), format_number(r.cov_norm)});
      summary["convergence"] = json{{"mean_slope", study.mean_slope},
                                    {"cov_slope", study.cov_slope},
                                    {"mean_decreasing", study.mean_decreasing},
                                    {"cov_decreasing", study.cov_decreasing}};
      out.artifacts.push_back({"convergence.csv", conv.str()});
    }
    out.artifacts.push_back({"sweep_summary.json", summary.dump(2) + "\n"});
    return out;
  });
}

// ---------------------------------------------------------------------------
// verification suite

namespace {

struct MomentInstance {
  Matrixd a;
  GaussianFieldMeasured measure;
};

Matrixd random_spd(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0, 1);
  Matrixd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) b(i, j) = normal(rng);
  Matrixd a = b * b.transpose() / double(n);
  a.diagonal().array() += 0.2;
  return 0.5 * (a + a.transpose());
}

MomentInstance moment_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0, 0.7);
  MomentInstance inst;
  inst.a = random_spd(5, rng);
  inst.measure.mean = Vectord(5);
  for (Eigen::Index i = 0; i < 5; ++i) inst.measure.mean(i) = normal(rng);
  inst.measure.covariance = random_spd(5, rng);
  return inst;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t stream, std::uint64_t k) {
  std::seed_seq seq{std::uint32_t(seed), std::uint32_t(seed >> 32), std::uint32_t(stream), std::uint32_t(k)};
  std::array<std::uint32_t, 2> w{};
  seq.generate(w.begin(), w.end());
  return (std::uint64_t(w[0]) << 32) | w[1];
}

template <typename Estimator, typename Closed>
CheckResult moment_check(const std::string& name, std::uint64_t seed, std::uint64_t stream, int instances,
                         long samples, Estimator&& est, Closed&& closed) {
  CheckResult r{name, false, 0, 3.0, instances, 0};
  for (int k = 0; k < instances; ++k) {
    const auto inst = moment_instance(mix(seed, stream, std::uint64_t(k)));
    const auto mc = est(inst.a, inst.measure, samples, mix(seed, stream + 1, std::uint64_t(k)));
    const double z = std::abs(mc.value - closed(inst.a, inst.measure)) / mc.std_error;
    r.worst_deviation = std::max(r.worst_deviation, z);
    if (z <= 3.0) ++r.passing;
  }
  r.passed = r.passing * 100 >= 95 * instances;
  return r;
}

}  // namespace

CheckResult check_moment_mean(std::uint64_t seed, int instances, long samples) {
  return moment_check("quadratic_mean_mc", seed, 1, instances, samples,
                      [](const Matrixd& a, const GaussianFieldMeasured& m, long s, std::uint64_t sd) {
                        return mc_quadratic_mean(a, m, s, sd);
                      },
                      [](const Matrixd& a, const GaussianFieldMeasured& m) { return quadratic_mean(a, m); });
}

CheckResult check_moment_second(std::uint64_t seed, int instances, long samples) {
  return moment_check("quadratic_second_moment_mc", seed, 3, instances, samples,
                      [](const Matrixd& a, const GaussianFieldMeasured& m, long s, std::uint64_t sd) {
                        return mc_quadratic_second_moment(a, m, s, sd);
                      },
                      [](const Matrixd& a, const GaussianFieldMeasured& m) { return quadratic_second_moment(a, m); });
}

CheckResult check_variance_identity(std::uint64_t seed, int instances) {
  CheckResult r{"quadratic_variance_identity", false, 0, 1e-10, instances, 0};
  for (int k = 0; k < instances; ++k) {
    const auto inst = moment_instance(mix(seed, 5, std::uint64_t(k)));
    const double mean = quadratic_mean(inst.a, inst.measure);
    const double var = quadratic_variance(inst.a, inst.measure);
    const double dev = std::abs(quadratic_second_moment(inst.a, inst.measure) - mean * mean - var) / var;
    r.worst_deviation = std::max(r.worst_deviation, dev);
    if (dev <= r.tolerance) ++r.passing;
  }
  r.passed = r.passing == instances;
  return r;
}

IdentityProblem identity_problem(std::uint64_t seed, BetaPriord prior) {
  const auto mesh = build_mesh<double>(1, {Intervald{0, 1}}, {18});
  IdentityProblem p;
  p.model = build_field_model(mesh);
  p.state.beta = 1;
  p.state.source.values = 10.0 * standard_normal<double>(16, mix(seed, 7, 0));
  p.state.prior = prior;
  std::mt19937_64 rng(mix(seed, 7, 1));
  std::uniform_real_distribution<double> u(0.02, 0.98);
  Matrixd locs(8, 1);
  for (Eigen::Index i = 0; i < 8; ++i) locs(i, 0) = u(rng);
  auto setup = build_measurement(mesh, locs, 0.05 * 0.05);
  const Vectord truth = p.model.green_source(p.state.source) + 0.05 * standard_normal<double>(16, mix(seed, 7, 2));
  p.setup = with_data(setup, synthesize_data(setup, truth, mix(seed, 7, 3)));
  return p;
}

namespace {

template <typename Exact, typename Numeric>
CheckResult fd_check(const std::string& name, double tol, std::uint64_t seed, const std::vector<double>& betas,
                     int problems, Exact&& exact, Numeric&& numeric) {
  CheckResult r{name, false, 0, tol, 0, 0};
  for (int k = 0; k < problems; ++k) {
    const auto prior = k % 2 ? BetaPriord::jeffreys() : BetaPriord::flat();
    auto p = identity_problem(mix(seed, 11, std::uint64_t(k)), prior);
    for (double beta : betas) {
      p.state.beta = beta;
      const double e = exact(p);
      const auto fd = fd_derivative<double>([&](double b) { return numeric(p, b); }, beta, 1);
      const double dev = std::abs(e - fd.value) / std::max(std::abs(fd.value), 1e-300);
      r.worst_deviation = std::max(r.worst_deviation, dev);
      ++r.instances;
      if (dev <= tol) ++r.passing;
    }
  }
  r.passed = r.passing == r.instances;
  return r;
}

}  // namespace

CheckResult check_gradient_fd(std::uint64_t seed, const std::vector<double>& betas, int problems) {
  return fd_check(
      "gradient_vs_fd_marginal", 1e-6, seed, betas, problems,
      [](const IdentityProblem& p) { return grad_param_potential(p.model, p.state, p.setup)(0); },
      [](const IdentityProblem& p, double b) {
        auto s = p.state;
        s.beta = b;
        return marginal_neg_log_posterior(p.model, s, p.setup);
      });
}

CheckResult check_hessian_fd(std::uint64_t seed, const std::vector<double>& betas, int problems) {
  return fd_check(
      "hessian_vs_fd_gradient", 1e-5, seed, betas, problems,
      [](const IdentityProblem& p) { return hessian_param_potential(p.model, p.state, p.setup)(0, 0); },
      [](const IdentityProblem& p, double b) {
        auto s = p.state;
        s.beta = b;
        return grad_param_potential(p.model, s, p.setup)(0);
      });
}

CheckResult check_partition_derivative() {
  CheckResult r{"partition_derivative", false, 0, 1e-8, 0, 0};
  for (int nodes : {3, 6, 66}) {
    const auto model = build_field_model(build_mesh<double>(1, {Intervald{0, 1}}, {nodes}));
    for (double beta : {0.1, 1.0, 10.0}) {
      const auto fd = fd_derivative<double>([&](double b) { return log_partition(model, b); }, beta, 1);
      const double expected = prior_expected_energy(beta, model.size());
      const double dev = std::abs(-fd.value - expected) / expected;
      r.worst_deviation = std::max(r.worst_deviation, dev);
      ++r.instances;
      if (dev <= r.tolerance) ++r.passing;
    }
  }
  r.passed = r.passing == r.instances;
  return r;
}

CheckResult check_prior_traces() {
  CheckResult r{"prior_trace_identities", false, 0, 1e-12, 0, 0};
  for (int nodes : {3, 6, 66}) {
    const auto model = build_field_model(build_mesh<double>(1, {Intervald{0, 1}}, {nodes}));
    const auto n = model.size();
    for (double beta : {0.1, 1.0, 10.0}) {
      // traces of A S and (A S)^2 from the assembled operators
      const Matrixd as = model.stiffness * (model.unit_covariance / beta);
      const double mean = 0.5 * as.trace();
      const double cov = 0.5 * trace_of_product(as, as);
      const double dev = std::max(std::abs(prior_expected_energy(beta, n) - mean) / mean,
                                  std::abs(prior_energy_covariance(beta, n) - cov) / cov);
      r.worst_deviation = std::max(r.worst_deviation, dev);
      ++r.instances;
      if (dev <= r.tolerance) ++r.passing;
    }
  }
  r.passed = r.passing == r.instances;
  return r;
}

RunOutcome run_verify(std::uint64_t seed) {
  return guarded([&] {
    const std::vector<CheckResult> checks{
        check_moment_mean(seed),
        check_moment_second(seed),
        check_variance_identity(seed),
        check_gradient_fd(seed, {0.5, 1.0, 2.0}, 20),
        check_hessian_fd(seed, {0.5, 1.0, 2.0}, 20),
        check_partition_derivative(),
        check_prior_traces(),
    };
    json list = json::array();
    bool all = true;
    for (const auto& c : checks) {
      all = all && c.passed;
      list.push_back(json{{"name", c.name},
                          {"status", c.passed ? "pass" : "fail"},
                          {"worst_deviation", c.worst_deviation},
                          {"tolerance", c.tolerance},
                          {"instances", c.instances},
                          {"passing", c.passing}});
    }
    json doc{{"seed", seed}, {"status", all ? "pass" : "fail"}, {"checks", list}};
    RunOutcome out;
    out.exit_code = all ? kSuccess : kVerificationFailure;
    out.artifacts = {{"verify.json", doc.dump(2) + "\n"}};
    return out;
  });
}

}  // namespace ift::app
