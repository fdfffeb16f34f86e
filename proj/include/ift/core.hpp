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

#ifndef IFT_CORE_HPP
#define IFT_CORE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ift {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vectord = Vector<double>;
using Matrixd = Matrix<double>;

// Invalid inputs: bad shapes, out-of-domain parameters, rejected configurations.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Factorization failures, non-invertible operators, solver breakdown.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

template <typename Scalar>
constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;

template <typename Derived>
typename Derived::Scalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? typename Derived::Scalar(0) : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_symmetric(const Eigen::MatrixBase<Derived>& m,
                  typename Derived::Scalar rel_tol = typename Derived::Scalar(1e-12)) {
  if (m.rows() != m.cols()) return false;
  const auto scale = max_abs(m);
  return max_abs(m - m.transpose()) <= rel_tol * scale;
}

// tr(A B) without forming the product.
template <typename DA, typename DB>
typename DA::Scalar trace_of_product(const Eigen::MatrixBase<DA>& a,
                                     const Eigen::MatrixBase<DB>& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

}  // namespace ift

#endif  // IFT_CORE_HPP
