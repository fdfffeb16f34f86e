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

#ifndef IFT_TESTS_SUPPORT_HPP
#define IFT_TESTS_SUPPORT_HPP

#include "ift/ift.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace ift::testing {

inline double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

inline Meshd unit_line(int nodes) { return build_mesh<double>(1, {Intervald{0, 1}}, {nodes}); }

inline Meshd unit_square(int nodes) {
  return build_mesh<double>(2, {Intervald{0, 1}, Intervald{0, 1}}, {nodes});
}

inline Vectord random_vector(Eigen::Index n, std::uint64_t seed, double scale = 1) {
  return scale * standard_normal<double>(n, seed);
}

inline Matrixd random_spd(Eigen::Index n, std::uint64_t seed, double shift = 0.5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0, 1);
  Matrixd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) b(i, j) = normal(rng);
  Matrixd a = b * b.transpose() / double(n);
  a.diagonal().array() += shift;
  return 0.5 * (a + a.transpose());
}

inline Matrixd random_locations_1d(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.02, 0.98);
  Matrixd x(count, 1);
  for (int i = 0; i < count; ++i) x(i, 0) = u(rng);
  return x;
}

// 1D Poisson test problem with random source and noisy point data.
struct Problem {
  Meshd mesh;
  FieldModel<double> model;
  ParameterState<double> state;
  MeasurementSetupd setup;
};

inline Problem make_problem(int interior, int observations, double sigma, std::uint64_t seed,
                            BetaPrior<double> prior = BetaPrior<double>::flat()) {
  Problem p{unit_line(interior + 2), {}, {}, {}};
  p.model = build_field_model(p.mesh);
  p.state.beta = 1;
  p.state.source.values = random_vector(interior, seed, 10);
  p.state.prior = prior;
  auto setup = build_measurement(p.mesh, random_locations_1d(observations, seed + 1), sigma * sigma);
  const Vectord truth = p.model.green_source(p.state.source) + random_vector(interior, seed + 2, 0.05);
  p.setup = with_data(setup, synthesize_data(setup, truth, seed + 3));
  return p;
}

}  // namespace ift::testing

#endif  // IFT_TESTS_SUPPORT_HPP
