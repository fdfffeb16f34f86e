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

#ifndef IFT_OPERATORS_HPP
#define IFT_OPERATORS_HPP

#include "ift/core.hpp"
#include "ift/mesh.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <sstream>

namespace ift {

/// Dense operator on interior-node coefficients together with the quadrature
/// weights W that turn vector inner products into L2 pairings.
template <typename Scalar>
struct OperatorMatrix {
  Matrix<Scalar> entries;
  bool symmetric{false};
  Vector<Scalar> weights;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
};

/// Interior values of a source term q.
template <typename Scalar>
struct SourceField {
  Vector<Scalar> values;
};

/// Negative Laplacian with homogeneous Dirichlet rows eliminated
/// (3-point stencil in 1D, 5-point stencil in 2D).
template <typename Scalar>
OperatorMatrix<Scalar> build_laplacian(const Mesh<Scalar>& mesh) {
  const auto n = mesh.interior_count();
  OperatorMatrix<Scalar> op;
  op.entries = Matrix<Scalar>::Zero(n, n);
  op.symmetric = true;
  op.weights = mesh.quadrature_weights();

  const int nx = mesh.interior(0);
  const int ny = mesh.dim() == 2 ? mesh.interior(1) : 1;
  const Scalar cx = Scalar(1) / (mesh.spacing(0) * mesh.spacing(0));
  const Scalar cy = mesh.dim() == 2 ? Scalar(1) / (mesh.spacing(1) * mesh.spacing(1)) : Scalar(0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const auto k = mesh.interior_index(i, j);
      op.entries(k, k) = 2 * cx + 2 * cy;
      if (i > 0) op.entries(k, mesh.interior_index(i - 1, j)) = -cx;
      if (i + 1 < nx) op.entries(k, mesh.interior_index(i + 1, j)) = -cx;
      if (j > 0) op.entries(k, mesh.interior_index(i, j - 1)) = -cy;
      if (j + 1 < ny) op.entries(k, mesh.interior_index(i, j + 1)) = -cy;
    }
  }
  return op;
}

/// Smallest eigenvalue of a symmetric matrix.
template <typename Scalar>
Scalar smallest_eigenvalue(const Matrix<Scalar>& a) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Green's operator G = L^{-1}. Throws NumericalError when L is not
/// symmetric positive definite, reporting its smallest eigenvalue.
template <typename Scalar>
OperatorMatrix<Scalar> green_operator(const OperatorMatrix<Scalar>& laplacian) {
  const auto& l = laplacian.entries;
  require(l.rows() == l.cols() && l.rows() > 0, "green_operator: operator must be square");
  Eigen::LLT<Matrix<Scalar>> llt(l);
  if (!is_symmetric(l) || llt.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "green_operator: operator is not invertible as SPD (smallest eigenvalue "
        << smallest_eigenvalue<Scalar>(Scalar(0.5) * (l + l.transpose())) << ")";
    throw NumericalError(msg.str());
  }
  OperatorMatrix<Scalar> g;
  g.entries = llt.solve(Matrix<Scalar>::Identity(l.rows(), l.cols()));
  g.entries = Scalar(0.5) * (g.entries + g.entries.transpose()).eval();
  g.symmetric = true;
  g.weights = laplacian.weights;
  return g;
}

/// Matrix of the quadratic form phi -> phi^T W L phi, i.e. W L. With uniform
/// interior weights this is symmetric positive definite whenever L is.
template <typename Scalar>
Matrix<Scalar> stiffness(const OperatorMatrix<Scalar>& laplacian) {
  return laplacian.weights.asDiagonal() * laplacian.entries;
}

/// E(phi) = 1/2 phi^T W L phi - q^T W phi, minimised at phi = G q.
template <typename Scalar, typename D>
Scalar dirichlet_energy(const OperatorMatrix<Scalar>& laplacian, const SourceField<Scalar>& q,
                        const Eigen::MatrixBase<D>& phi) {
  const auto n = laplacian.rows();
  require(phi.size() == n && q.values.size() == n,
          "dirichlet_energy: field and source lengths must match the operator");
  const auto& w = laplacian.weights;
  const Vector<Scalar> lphi = laplacian.entries * phi;
  return Scalar(0.5) * phi.dot(w.cwiseProduct(lphi)) - q.values.dot(w.cwiseProduct(phi));
}

/// Gradient of dirichlet_energy with respect to the nodal coefficients: W (L phi - q).
template <typename Scalar, typename D>
Vector<Scalar> dirichlet_energy_gradient(const OperatorMatrix<Scalar>& laplacian,
                                         const SourceField<Scalar>& q,
                                         const Eigen::MatrixBase<D>& phi) {
  require(phi.size() == laplacian.rows() && q.values.size() == laplacian.rows(),
          "dirichlet_energy_gradient: dimension mismatch");
  return laplacian.weights.cwiseProduct(laplacian.entries * phi - q.values);
}

using OperatorMatrixd = OperatorMatrix<double>;
using SourceFieldd = SourceField<double>;

}  // namespace ift

#endif  // IFT_OPERATORS_HPP
