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

#ifndef IFT_MESH_HPP
#define IFT_MESH_HPP

#include "ift/core.hpp"

#include <array>
#include <vector>

namespace ift {

template <typename Scalar>
struct Interval {
  Scalar lower{0};
  Scalar upper{1};

  Scalar length() const { return upper - lower; }
  bool contains_strictly(Scalar x) const { return x > lower && x < upper; }
};

/// Uniform tensor-product grid on a 1D interval or 2D rectangle.
///
/// Only interior nodes carry degrees of freedom; the field is pinned to zero
/// on the boundary. Interior nodes are numbered with the x index running
/// fastest: k = i + (nodes(0) - 2) * j.
template <typename Scalar>
class Mesh {
 public:
  int dim() const { return dim_; }
  const Interval<Scalar>& extent(int axis) const { return extent_[axis]; }
  int nodes(int axis) const { return nodes_[axis]; }
  int interior(int axis) const { return nodes_[axis] - 2; }

  Eigen::Index interior_count() const {
    Eigen::Index n = 1;
    for (int a = 0; a < dim_; ++a) n *= interior(a);
    return n;
  }

  Scalar spacing(int axis) const { return extent_[axis].length() / Scalar(nodes_[axis] - 1); }

  /// Coordinate of node i (0 <= i < nodes(axis)) along an axis, boundary included.
  Scalar coordinate(int axis, int i) const {
    if (i == nodes_[axis] - 1) return extent_[axis].upper;
    return extent_[axis].lower + Scalar(i) * spacing(axis);
  }

  Scalar cell_volume() const {
    Scalar v = 1;
    for (int a = 0; a < dim_; ++a) v *= spacing(a);
    return v;
  }

  Scalar volume() const {
    Scalar v = 1;
    for (int a = 0; a < dim_; ++a) v *= extent_[a].length();
    return v;
  }

  /// Flat index of the interior node with per-axis interior indices (i, j).
  Eigen::Index interior_index(int i, int j = 0) const {
    return Eigen::Index(i) + Eigen::Index(interior(0)) * j;
  }

  /// Interior node coordinates, one row per node.
  Matrix<Scalar> interior_points() const {
    Matrix<Scalar> p(interior_count(), dim_);
    const int ny = dim_ == 2 ? interior(1) : 1;
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < interior(0); ++i) {
        const auto k = interior_index(i, j);
        p(k, 0) = coordinate(0, i + 1);
        if (dim_ == 2) p(k, 1) = coordinate(1, j + 1);
      }
    }
    return p;
  }

  /// Trapezoidal weights of the interior nodes (all equal to the cell volume).
  Vector<Scalar> quadrature_weights() const {
    return Vector<Scalar>::Constant(interior_count(), cell_volume());
  }

  /// Trapezoidal weights over every node, boundary included; these sum to the
  /// domain volume. Boundary values of admissible fields vanish, so only the
  /// interior weights enter the discrete L2 pairing.
  Vector<Scalar> full_trapezoid_weights() const {
    const int nx = nodes_[0];
    const int ny = dim_ == 2 ? nodes_[1] : 1;
    Vector<Scalar> w(Eigen::Index(nx) * ny);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        Scalar v = spacing(0) * ((i == 0 || i == nx - 1) ? Scalar(0.5) : Scalar(1));
        if (dim_ == 2) v *= spacing(1) * ((j == 0 || j == ny - 1) ? Scalar(0.5) : Scalar(1));
        w(i + Eigen::Index(nx) * j) = v;
      }
    }
    return w;
  }

  /// Whether a point lies strictly inside the domain.
  template <typename Derived>
  bool contains_strictly(const Eigen::MatrixBase<Derived>& x) const {
    for (int a = 0; a < dim_; ++a)
      if (!extent_[a].contains_strictly(x(a))) return false;
    return true;
  }

  template <typename S>
  friend Mesh<S> build_mesh(int, const std::vector<Interval<S>>&, const std::vector<int>&);

 private:
  int dim_{1};
  std::array<Interval<Scalar>, 2> extent_{};
  std::array<int, 2> nodes_{3, 1};
};

/// Builds a uniform mesh. `nodes_per_axis` counts boundary nodes and is either
/// a single value shared by all axes or one value per axis.
template <typename Scalar>
Mesh<Scalar> build_mesh(int dim, const std::vector<Interval<Scalar>>& extent,
                        const std::vector<int>& nodes_per_axis) {
  require(dim == 1 || dim == 2, "mesh dimension must be 1 or 2, got " + std::to_string(dim));
  require(extent.size() == std::size_t(dim), "mesh extent needs one interval per axis");
  require(nodes_per_axis.size() == 1 || nodes_per_axis.size() == std::size_t(dim),
          "nodes_per_axis needs one value or one value per axis");
  Mesh<Scalar> mesh;
  mesh.dim_ = dim;
  for (int a = 0; a < dim; ++a) {
    const int nodes = nodes_per_axis.size() == 1 ? nodes_per_axis[0] : nodes_per_axis[a];
    require(nodes >= 3, "nodes_per_axis must be at least 3 (one interior node), got " +
                            std::to_string(nodes));
    require(std::isfinite(extent[a].lower) && std::isfinite(extent[a].upper) &&
                extent[a].length() > 0,
            "mesh extent must have positive length on every axis");
    mesh.extent_[a] = extent[a];
    mesh.nodes_[a] = nodes;
  }
  return mesh;
}

/// Evaluates `f(point)` at every interior node.
template <typename Scalar, typename F>
Vector<Scalar> sample_on_interior(const Mesh<Scalar>& mesh, F&& f) {
  const Matrix<Scalar> pts = mesh.interior_points();
  Vector<Scalar> v(pts.rows());
  for (Eigen::Index k = 0; k < pts.rows(); ++k) {
    const Vector<Scalar> p = pts.row(k).transpose();
    v(k) = f(p);
  }
  return v;
}

/// Discrete L2 pairing psi^T W phi with trapezoidal interior weights.
template <typename Scalar, typename DA, typename DB>
Scalar l2_pairing(const Mesh<Scalar>& mesh, const Eigen::MatrixBase<DA>& phi,
                  const Eigen::MatrixBase<DB>& psi) {
  require(phi.size() == mesh.interior_count() && psi.size() == mesh.interior_count(),
          "l2_pairing: field length does not match the mesh");
  return mesh.cell_volume() * phi.dot(psi);
}

template <typename Scalar, typename D>
Scalar l2_norm(const Mesh<Scalar>& mesh, const Eigen::MatrixBase<D>& phi) {
  return std::sqrt(l2_pairing(mesh, phi, phi));
}

using Meshd = Mesh<double>;
using Intervald = Interval<double>;

}  // namespace ift

#endif  // IFT_MESH_HPP
