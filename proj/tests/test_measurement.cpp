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

Matrixd points_1d(std::initializer_list<double> xs) {
  Matrixd m(xs.size(), 1);
  int i = 0;
  for (double x : xs) m(i++, 0) = x;
  return m;
}

Matrixd endpoint_grid(int count) {
  Matrixd m(count, 1);
  for (int i = 0; i < count; ++i) m(i, 0) = double(i) / (count - 1);
  return m;
}

double brute_fill(const Matrixd& probes, const Matrixd& locs) {
  double fill = 0;
  for (Eigen::Index p = 0; p < probes.rows(); ++p) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index k = 0; k < locs.rows(); ++k) best = std::min(best, (probes.row(p) - locs.row(k)).norm());
    fill = std::max(fill, best);
  }
  return fill;
}

}  // namespace

TEST_CASE("observation at a node selects that coefficient") {
  const auto mesh = unit_line(5);
  const auto s = build_measurement(mesh, points_1d({0.5, 0.25}), 0.1);
  CHECK(s.operator_r.row(0) == Eigen::RowVector3d(0, 1, 0));
  CHECK(s.operator_r.row(1) == Eigen::RowVector3d(1, 0, 0));
  CHECK(s.noise_covariance() == 0.1 * Matrixd::Identity(2, 2));
  CHECK_FALSE(s.has_data());
}

TEST_CASE("midpoint observation gets equal weights") {
  const auto s = build_measurement(unit_line(5), points_1d({0.375, 0.125}), 1.0);
  CHECK(s.operator_r(0, 0) == 0.5);
  CHECK(s.operator_r(0, 1) == 0.5);
  CHECK(s.operator_r(0, 2) == 0.0);
  // next to the boundary only the interior node carries weight
  CHECK(s.operator_r(1, 0) == 0.5);
  CHECK(s.operator_r.row(1).sum() == 0.5);
}

TEST_CASE("2D bilinear interpolation") {
  const auto mesh = unit_square(5);
  const auto s = build_measurement(mesh, Matrixd{{0.375, 0.5}, {0.5, 0.5}, {0.3, 0.6}}, 1.0);
  CHECK(s.operator_r(0, mesh.interior_index(0, 1)) == 0.5);
  CHECK(s.operator_r(0, mesh.interior_index(1, 1)) == 0.5);
  CHECK(s.operator_r(1, mesh.interior_index(1, 1)) == 1.0);
  CHECK(s.operator_r.row(2).sum() == doctest::Approx(1.0));
  auto f = [](const Vectord& p) { return 2 * p(0) + 3 * p(1) - 5 * p(0) * p(1); };
  // bilinear functions away from the boundary are reproduced exactly
  CHECK(s.operator_r.row(2).dot(sample_on_interior(mesh, f)) == doctest::Approx(f(Vectord{{0.3, 0.6}})));
}

TEST_CASE("interpolation error of x(1-x) is second order") {
  auto f = [](const Vectord& p) { return p(0) * (1 - p(0)); };
  const Matrixd locs = random_locations_1d(40, 3);
  double prev = 0;
  for (int k = 0; k < 4; ++k) {
    const auto mesh = unit_line((8 << k) + 1);
    const auto s = build_measurement(mesh, locs, 1.0);
    double err = 0;
    for (Eigen::Index i = 0; i < locs.rows(); ++i)
      err = std::max(err, std::abs(s.operator_r.row(i).dot(sample_on_interior(mesh, f)) - f(locs.row(i).transpose())));
    CHECK(err <= mesh.spacing(0) * mesh.spacing(0) / 4 + 1e-15);
    if (k > 0) CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("boundary and outside locations are rejected") {
  const auto mesh = unit_line(6);
  CHECK_THROWS_AS(build_measurement(mesh, points_1d({0.0}), 1.0), InvalidArgument);
  CHECK_THROWS_AS(build_measurement(mesh, points_1d({1.0}), 1.0), InvalidArgument);
  CHECK_THROWS_AS(build_measurement(mesh, points_1d({1.5}), 1.0), InvalidArgument);
  CHECK_THROWS_AS(build_measurement(mesh, points_1d({0.5}), 0.0), InvalidArgument);
  CHECK_THROWS_AS(build_measurement(mesh, points_1d({0.5}), -1.0), InvalidArgument);
  CHECK_THROWS_AS(build_measurement(unit_square(5), Matrixd{{0.5, 1.0}}, 1.0), InvalidArgument);
  CHECK_THROWS_AS(build_measurement(unit_square(5), points_1d({0.5}), 1.0), InvalidArgument);
  const auto s = build_measurement(mesh, points_1d({0.5}), 1.0);
  CHECK_THROWS_AS(with_data(s, Vectord(Vectord::Zero(2))), InvalidArgument);
}

TEST_CASE("duplicate locations are kept as replicates") {
  const auto s = build_measurement(unit_line(5), points_1d({0.5, 0.5}), 1.0);
  CHECK(s.observation_count() == 2);
  CHECK(s.operator_r.row(0) == s.operator_r.row(1));
}

TEST_CASE("uniform grid with endpoints has unit mesh ratio") {
  const auto mesh = unit_line(5);
  for (int n : {2, 3, 5, 9, 17}) {
    const auto m = design_metrics(mesh, endpoint_grid(n));
    const double h = 1.0 / (2 * (n - 1));
    CHECK(rel_err(m.fill_distance, h) <= 1e-12);
    REQUIRE(m.separation_radius);
    CHECK(rel_err(*m.separation_radius, h) <= 1e-12);
    CHECK(rel_err(*m.mesh_ratio, 1.0) <= 1e-12);
  }
}

TEST_CASE("single point has fill distance but no separation radius") {
  const auto m = design_metrics(unit_line(5), points_1d({0.5}));
  CHECK(m.fill_distance == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(m.separation_radius);
  CHECK_FALSE(m.mesh_ratio);
  CHECK_THROWS_AS(design_metrics(unit_line(5), Matrixd(0, 1)), InvalidArgument);
}

TEST_CASE("fill distance matches a brute-force search over the probe grid") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto mesh = unit_line(5);
    const Matrixd locs = random_locations_1d(7 + int(seed), 100 + seed);
    const auto m = design_metrics(mesh, locs);
    const Matrixd probes = fill_probe_grid(mesh, locs, m.separation_radius);
    CHECK(probes.rows() == m.probe_points);
    CHECK(m.fill_distance == doctest::Approx(brute_fill(probes, locs)).epsilon(1e-14));
  }
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const auto sq = unit_square(5);
  Matrixd locs(12, 2);
  for (Eigen::Index i = 0; i < locs.rows(); ++i) locs.row(i) << u(rng), u(rng);
  const auto m = design_metrics(sq, locs);
  CHECK(m.fill_distance == doctest::Approx(brute_fill(fill_probe_grid(sq, locs, m.separation_radius), locs)).epsilon(1e-14));
  // the probe grid is at least 8x finer than the smallest location spacing
  const double probe_step = 1.0 / (std::sqrt(double(m.probe_points)) - 1);
  CHECK(probe_step <= 2 * *m.separation_radius / 8 + 1e-15);
}

TEST_CASE("nested uniform designs halve the fill distance") {
  const auto mesh = unit_line(65);
  double prev_h = 0, prev_ratio = 0;
  for (int k : {4, 8, 16, 32, 64}) {
    const Matrixd x = uniform_design(mesh, k);
    CHECK(x.rows() == k - 1);
    const auto m = design_metrics(mesh, x);
    CHECK(rel_err(m.fill_distance, 1.0 / k) <= 1e-12);
    CHECK(rel_err(*m.separation_radius, 0.5 / k) <= 1e-12);
    if (prev_h > 0) {
      CHECK(std::abs(m.fill_distance - prev_h / 2) <= 1e-12);
      CHECK(std::abs(*m.mesh_ratio - prev_ratio) <= 1e-12);
    }
    prev_h = m.fill_distance;
    prev_ratio = *m.mesh_ratio;
  }
  for (int k : {4, 8, 16}) {
    const auto e = design_metrics(mesh, endpoint_grid(k + 1));
    CHECK(rel_err(*e.mesh_ratio, 1.0) <= 1e-12);
  }
  CHECK(uniform_design(unit_square(5), 4).rows() == 9);
  CHECK_THROWS_AS(uniform_design(mesh, 1), InvalidArgument);
}
