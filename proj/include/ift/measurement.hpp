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

#ifndef IFT_MEASUREMENT_HPP
#define IFT_MEASUREMENT_HPP

#include "ift/core.hpp"
#include "ift/mesh.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace ift {

/// Point observations d = R phi + noise with noise covariance sigma^2 I.
template <typename Scalar>
struct MeasurementSetup {
  Matrix<Scalar> locations;  // one row per observation
  Matrix<Scalar> operator_r;  // observations x interior nodes
  Scalar noise_variance{1};
  Vector<Scalar> data;  // empty until attached

  Eigen::Index observation_count() const { return operator_r.rows(); }
  bool has_data() const { return data.size() == operator_r.rows(); }

  Matrix<Scalar> noise_covariance() const {
    return noise_variance * Matrix<Scalar>::Identity(observation_count(), observation_count());
  }
};

namespace detail {

// Interpolation stencil along one axis: (interior index or -1, weight) pairs.
template <typename Scalar>
std::array<std::pair<int, Scalar>, 2> axis_stencil(const Mesh<Scalar>& mesh, int axis, Scalar x) {
  const int nodes = mesh.nodes(axis);
  const Scalar t = (x - mesh.extent(axis).lower) / mesh.spacing(axis);
  int cell = static_cast<int>(std::floor(t));
  Scalar frac = t - Scalar(cell);
  constexpr Scalar snap = Scalar(1e-12);
  if (frac < snap) frac = 0;
  if (Scalar(1) - frac < snap) {
    ++cell;
    frac = 0;
  }
  cell = std::clamp(cell, 0, nodes - 2);
  auto interior_of = [&](int node) { return (node >= 1 && node <= nodes - 2) ? node - 1 : -1; };
  return {{{interior_of(cell), Scalar(1) - frac}, {interior_of(cell + 1), frac}}};
}

}  // namespace detail

/// Linear (1D) or bilinear (2D) interpolation from interior-node coefficients
/// to the given locations. Boundary nodes carry the Dirichlet value 0.
template <typename Scalar>
Matrix<Scalar> interpolation_matrix(const Mesh<Scalar>& mesh, const Matrix<Scalar>& locations) {
  require(locations.cols() == mesh.dim(), "interpolation_matrix: location dimension mismatch");
  Matrix<Scalar> r = Matrix<Scalar>::Zero(locations.rows(), mesh.interior_count());
  for (Eigen::Index row = 0; row < locations.rows(); ++row) {
    const auto sx = detail::axis_stencil(mesh, 0, locations(row, 0));
    if (mesh.dim() == 1) {
      for (const auto& [i, w] : sx)
        if (i >= 0 && w != 0) r(row, i) += w;
      continue;
    }
    const auto sy = detail::axis_stencil(mesh, 1, locations(row, 1));
    for (const auto& [j, wy] : sy)
      for (const auto& [i, wx] : sx)
        if (i >= 0 && j >= 0 && wx * wy != 0) r(row, mesh.interior_index(i, j)) += wx * wy;
  }
  return r;
}

/// Builds R and Gamma = sigma^2 I for point observations strictly inside the domain.
template <typename Scalar>
MeasurementSetup<Scalar> build_measurement(const Mesh<Scalar>& mesh, const Matrix<Scalar>& locations,
                                           Scalar noise_variance) {
  require(locations.rows() == 0 || locations.cols() == mesh.dim(),
          "build_measurement: locations must have one column per mesh axis");
  require(std::isfinite(noise_variance) && noise_variance > 0,
          "build_measurement: noise variance must be positive");
  for (Eigen::Index k = 0; k < locations.rows(); ++k) {
    const Vector<Scalar> p = locations.row(k).transpose();
    require(mesh.contains_strictly(p), "build_measurement: observation " + std::to_string(k) +
                                           " lies on or outside the domain boundary");
  }
  MeasurementSetup<Scalar> setup;
  setup.locations = locations.rows() == 0 ? Matrix<Scalar>(0, mesh.dim()) : locations;
  setup.operator_r = interpolation_matrix(mesh, setup.locations);
  setup.noise_variance = noise_variance;
  return setup;
}

template <typename Scalar>
MeasurementSetup<Scalar> with_data(MeasurementSetup<Scalar> setup, Vector<Scalar> data) {
  require(data.size() == setup.observation_count(),
          "with_data: data length must equal the number of observations");
  setup.data = std::move(data);
  return setup;
}

/// Uniform design of density k: the points lower + j * length / k for
/// j = 1..k-1 on each axis (tensor product in 2D). Doubling k nests designs.
template <typename Scalar>
Matrix<Scalar> uniform_design(const Mesh<Scalar>& mesh, int density) {
  require(density >= 2, "uniform_design: density must be at least 2");
  const int per_axis = density - 1;
  const int ny = mesh.dim() == 2 ? per_axis : 1;
  Matrix<Scalar> pts(Eigen::Index(per_axis) * ny, mesh.dim());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < per_axis; ++i) {
      const auto row = i + Eigen::Index(per_axis) * j;
      pts(row, 0) = mesh.extent(0).lower + Scalar(i + 1) * mesh.extent(0).length() / Scalar(density);
      if (mesh.dim() == 2)
        pts(row, 1) = mesh.extent(1).lower + Scalar(j + 1) * mesh.extent(1).length() / Scalar(density);
    }
  }
  return pts;
}

template <typename Scalar>
struct DesignMetrics {
  Scalar fill_distance{0};
  std::optional<Scalar> separation_radius;  // absent with fewer than 2 distinct points
  std::optional<Scalar> mesh_ratio;
  Eigen::Index probe_points{0};
};

/// Half the smallest distance between distinct locations.
template <typename Scalar>
std::optional<Scalar> separation_radius(const Matrix<Scalar>& locations) {
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (Eigen::Index i = 0; i < locations.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < locations.rows(); ++j) {
      const Scalar d = (locations.row(i) - locations.row(j)).norm();
      if (d > 0) best = std::min(best, d);
    }
  }
  if (!std::isfinite(best)) return std::nullopt;
  return best / 2;
}

namespace detail {

// Uniform bucket grid for nearest-location queries.
template <typename Scalar>
class BucketGrid {
 public:
  BucketGrid(const Mesh<Scalar>& mesh, const Matrix<Scalar>& points) : mesh_(mesh), points_(points) {
    const auto m = points.rows();
    const int per_axis = mesh.dim() == 1
                             ? int(std::max<Eigen::Index>(1, m))
                             : int(std::max<Scalar>(1, std::ceil(std::sqrt(Scalar(m)))));
    for (int a = 0; a < 2; ++a) cells_[a] = a < mesh.dim() ? per_axis : 1;
    for (int a = 0; a < mesh.dim(); ++a) size_[a] = mesh.extent(a).length() / Scalar(cells_[a]);
    buckets_.assign(std::size_t(cells_[0]) * cells_[1], {});
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto c = cell_of(points.row(k).transpose());
      buckets_[std::size_t(c[0] + cells_[0] * c[1])].push_back(k);
    }
  }

  Scalar nearest_distance(const Vector<Scalar>& p) const {
    const auto c = cell_of(p);
    Scalar best = std::numeric_limits<Scalar>::infinity();
    const Scalar min_size = mesh_.dim() == 1 ? size_[0] : std::min(size_[0], size_[1]);
    const int max_ring = std::max(cells_[0], cells_[1]);
    for (int ring = 0; ring <= max_ring; ++ring) {
      for (int j = c[1] - ring; j <= c[1] + ring; ++j) {
        for (int i = c[0] - ring; i <= c[0] + ring; ++i) {
          if (std::max(std::abs(i - c[0]), std::abs(j - c[1])) != ring) continue;
          if (i < 0 || j < 0 || i >= cells_[0] || j >= cells_[1]) continue;
          for (auto k : buckets_[std::size_t(i + cells_[0] * j)])
            best = std::min(best, (points_.row(k).transpose() - p).norm());
        }
      }
      // Points in rings beyond `ring` are at least ring * min_size away.
      if (best <= Scalar(ring) * min_size) break;
    }
    return best;
  }

 private:
  std::array<int, 2> cell_of(const Vector<Scalar>& p) const {
    std::array<int, 2> c{0, 0};
    for (int a = 0; a < mesh_.dim(); ++a) {
      const int v = int(std::floor((p(a) - mesh_.extent(a).lower) / size_[a]));
      c[a] = std::clamp(v, 0, cells_[a] - 1);
    }
    return c;
  }

  const Mesh<Scalar>& mesh_;
  const Matrix<Scalar>& points_;
  std::array<int, 2> cells_{1, 1};
  std::array<Scalar, 2> size_{1, 1};
  std::vector<std::vector<Eigen::Index>> buckets_;
};

}  // namespace detail

/// Probe grid used for the fill-distance supremum: uniform over the closed
/// domain with spacing at most 1/8 of the smallest location spacing (capped at
/// 2^16 intervals in 1D and 2048 per axis in 2D).
template <typename Scalar>
Matrix<Scalar> fill_probe_grid(const Mesh<Scalar>& mesh, const Matrix<Scalar>& locations,
                               const std::optional<Scalar>& sep) {
  std::array<int, 2> count{1, 1};
  for (int a = 0; a < mesh.dim(); ++a) {
    const Scalar len = mesh.extent(a).length();
    const Scalar spacing = (sep && *sep > 0)
                               ? Scalar(2) * *sep
                               : len / Scalar(std::max<Eigen::Index>(1, locations.rows()));
    const int cap = mesh.dim() == 1 ? (1 << 16) : 2048;
    const int intervals =
        int(std::clamp(std::ceil(Scalar(8) * len / spacing), Scalar(64), Scalar(cap)));
    count[a] = intervals + 1;
  }
  Matrix<Scalar> probes(Eigen::Index(count[0]) * count[1], mesh.dim());
  for (int j = 0; j < count[1]; ++j) {
    for (int i = 0; i < count[0]; ++i) {
      const auto row = i + Eigen::Index(count[0]) * j;
      const auto& ex = mesh.extent(0);
      probes(row, 0) = i == count[0] - 1 ? ex.upper
                                         : ex.lower + Scalar(i) * ex.length() / Scalar(count[0] - 1);
      if (mesh.dim() == 2) {
        const auto& ey = mesh.extent(1);
        probes(row, 1) = j == count[1] - 1
                             ? ey.upper
                             : ey.lower + Scalar(j) * ey.length() / Scalar(count[1] - 1);
      }
    }
  }
  return probes;
}

/// Fill distance, separation radius and mesh ratio of a design over the mesh domain.
template <typename Scalar>
DesignMetrics<Scalar> design_metrics(const Mesh<Scalar>& mesh, const Matrix<Scalar>& locations) {
  require(locations.rows() >= 1, "design_metrics: at least one location is required");
  require(locations.cols() == mesh.dim(), "design_metrics: location dimension mismatch");
  DesignMetrics<Scalar> out;
  out.separation_radius = separation_radius(locations);
  const Matrix<Scalar> probes = fill_probe_grid(mesh, locations, out.separation_radius);
  out.probe_points = probes.rows();
  const detail::BucketGrid<Scalar> grid(mesh, locations);
  Scalar fill = 0;
  for (Eigen::Index k = 0; k < probes.rows(); ++k)
    fill = std::max(fill, grid.nearest_distance(probes.row(k).transpose()));
  out.fill_distance = fill;
  if (out.separation_radius) out.mesh_ratio = fill / *out.separation_radius;
  return out;
}

using MeasurementSetupd = MeasurementSetup<double>;

}  // namespace ift

#endif  // IFT_MEASUREMENT_HPP
