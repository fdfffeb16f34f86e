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

TEST_CASE("1D Laplacian is the second-difference stencil") {
  const auto l = build_laplacian(unit_line(5));
  Matrixd expected(3, 3);
  expected << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  expected *= 16.0;
  CHECK((l.entries - expected).cwiseAbs().maxCoeff() == 0.0);
  CHECK(l.symmetric);
}

TEST_CASE("Laplacian eigenvalues match the tridiagonal Toeplitz formula") {
  for (int nodes : {3, 6, 17, 40}) {
    const auto mesh = build_mesh<double>(1, {Intervald{0, 2}}, {nodes});
    const double h = mesh.spacing(0);
    const int n = nodes - 2;
    Eigen::SelfAdjointEigenSolver<Matrixd> es(build_laplacian(mesh).entries);
    for (int k = 1; k <= n; ++k) {
      const double lam = 2.0 / (h * h) * (1 - std::cos(k * M_PI / (n + 1)));
      CHECK(rel_err(es.eigenvalues()(k - 1), lam) <= 1e-10);
    }
    CHECK(smallest_eigenvalue(build_laplacian(mesh).entries) > 0);
  }
}

TEST_CASE("2D Laplacian is symmetric positive definite") {
  for (int nodes : {3, 5, 12}) {
    const auto l = build_laplacian(build_mesh<double>(2, {Intervald{0, 1}, Intervald{0, 3}}, {nodes, nodes + 2}));
    CHECK(is_symmetric(l.entries));
    CHECK(smallest_eigenvalue(l.entries) > 0);
  }
}

TEST_CASE("Laplacian of sin(pi x) converges to pi^2 sin(pi x)") {
  double prev = 0;
  for (int k = 0; k < 4; ++k) {
    const auto mesh = unit_line((8 << k) + 1);
    auto f = [](const Vectord& p) { return std::sin(M_PI * p(0)); };
    const Vectord v = sample_on_interior(mesh, f);
    const double err = max_abs(Vectord(build_laplacian(mesh).entries * v - M_PI * M_PI * v));
    if (k > 0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.02));
    prev = err;
  }
  const auto sq = unit_square(33);
  auto g = [](const Vectord& p) { return std::sin(M_PI * p(0)) * std::sin(2 * M_PI * p(1)); };
  const Vectord v = sample_on_interior(sq, g);
  CHECK(max_abs(Vectord(build_laplacian(sq).entries * v - 5 * M_PI * M_PI * v)) < 0.2);
}

TEST_CASE("Green operator inverts the Laplacian") {
  for (const auto& mesh : {unit_line(3), unit_line(20), unit_square(7)}) {
    const auto l = build_laplacian(mesh);
    const auto g = green_operator(l);
    const auto n = l.rows();
    CHECK((g.entries * l.entries - Matrixd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK((l.entries * g.entries - Matrixd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(is_symmetric(g.entries));
    // Column-by-column solve oracle.
    Eigen::PartialPivLU<Matrixd> lu(l.entries);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Vectord col = lu.solve(Vectord::Unit(n, i));
      CHECK(max_abs(Vectord(col - g.entries.col(i))) <= 1e-10 * max_abs(col));
    }
  }
  const auto g1 = green_operator(build_laplacian(unit_line(3)));
  CHECK(build_laplacian(unit_line(3)).entries(0, 0) == 8.0);
  CHECK(g1.entries(0, 0) == doctest::Approx(0.125).epsilon(1e-15));
}

TEST_CASE("Green operator reports a singular operator") {
  OperatorMatrixd bad;
  bad.entries = Matrixd::Ones(3, 3);
  bad.weights = Vectord::Ones(3);
  CHECK_THROWS_AS(green_operator(bad), NumericalError);
  bad.entries = -Matrixd::Identity(2, 2);
  try {
    green_operator(bad);
    FAIL("expected a NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("-1") != std::string::npos);
  }
}

TEST_CASE("Dirichlet energy vanishes at zero and is minimised at G q") {
  const auto mesh = unit_line(14);
  const auto l = build_laplacian(mesh);
  const auto g = green_operator(l);
  SourceFieldd q{random_vector(12, 5, 3)};
  CHECK(dirichlet_energy(l, q, Vectord::Zero(12)) == 0.0);
  const Vectord gq = g.entries * q.values;
  const double emin = dirichlet_energy(l, q, gq);
  CHECK(rel_err(emin, -0.5 * q.values.dot(l.weights.cwiseProduct(gq))) <= 1e-12);
  for (int t = 0; t < 100; ++t) {
    const Vectord delta = random_vector(12, 1000 + t, 1e-3 * (1 + t % 7));
    CHECK(dirichlet_energy(l, q, Vectord(gq + delta)) >= emin);
  }
  CHECK(max_abs(dirichlet_energy_gradient(l, q, gq)) <= 1e-10 * max_abs(q.values));
}

TEST_CASE("Dirichlet energy gradient matches finite differences") {
  for (const auto& mesh : {unit_line(11), unit_square(6)}) {
    const auto l = build_laplacian(mesh);
    const auto n = l.rows();
    SourceFieldd q{random_vector(n, 17)};
    const Vectord phi = random_vector(n, 18);
    const Vectord grad = dirichlet_energy_gradient(l, q, phi);
    CHECK(max_abs(Vectord(grad.cwiseQuotient(l.weights) - (l.entries * phi - q.values))) <= 1e-10);
    for (Eigen::Index i = 0; i < n; ++i) {
      auto f = [&](double x) {
        Vectord p = phi;
        p(i) = x;
        return dirichlet_energy(l, q, p);
      };
      const auto fd = fd_derivative<double>(f, phi(i), 1);
      CHECK(std::abs(fd.value - grad(i)) <= 1e-6 * std::max(1.0, std::abs(grad(i))));
    }
  }
}

TEST_CASE("dimension mismatches are rejected") {
  const auto l = build_laplacian(unit_line(6));
  SourceFieldd q{Vectord::Zero(3)};
  CHECK_THROWS_AS(dirichlet_energy(l, q, Vectord::Zero(4)), InvalidArgument);
  SourceFieldd q4{Vectord::Zero(4)};
  CHECK_THROWS_AS(dirichlet_energy(l, q4, Vectord::Zero(5)), InvalidArgument);
}
