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

#ifndef IFT_MC_ORACLE_HPP
#define IFT_MC_ORACLE_HPP

#include "ift/core.hpp"
#include "ift/gaussian.hpp"

#include <cstdint>
#include <functional>
#include <random>

namespace ift {

template <typename Scalar>
struct MCEstimate {
  Scalar value{0};
  Scalar std_error{0};  // sample std / sqrt(sample_count)
  long sample_count{0};
  std::uint64_t seed{0};
};

namespace detail {

template <typename Scalar>
void require_quadratic_inputs(const Matrix<Scalar>& a, const GaussianFieldMeasure<Scalar>& measure) {
  require(a.rows() == a.cols(), "quadratic form: A must be square");
  require(a.rows() == measure.size(), "quadratic form: A does not match the measure dimension");
  require(is_symmetric(a), "quadratic form: A must be symmetric");
}

// Streams f(1/2 phi^T A phi) over phi ~ measure; Welford accumulation.
template <typename Scalar, typename F>
MCEstimate<Scalar> mc_quadratic(const Matrix<Scalar>& a, const GaussianFieldMeasure<Scalar>& measure, long samples,
                                std::uint64_t seed, F&& transform) {
  require_quadratic_inputs(a, measure);
  require(samples >= 2, "Monte Carlo: at least two samples are required");
  const auto chol = cholesky_with_jitter(measure.covariance);
  const auto n = measure.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<Scalar> normal(0, 1);
  Vector<Scalar> z(n), phi(n);
  Scalar mean = 0, m2 = 0;
  for (long k = 0; k < samples; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) z(i) = normal(rng);
    phi = measure.mean;
    if (n > 0) phi.noalias() += chol.lower.template triangularView<Eigen::Lower>() * z;
    const Scalar v = transform(Scalar(0.5) * phi.dot(a * phi));
    const Scalar delta = v - mean;
    mean += delta / Scalar(k + 1);
    m2 += delta * (v - mean);
  }
  MCEstimate<Scalar> out;
  out.value = mean;
  out.std_error = std::sqrt(m2 / Scalar(samples - 1) / Scalar(samples));
  out.sample_count = samples;
  out.seed = seed;
  return out;
}

}  // namespace detail

/// Monte Carlo estimate of E[1/2 phi^T A phi] under the measure.
template <typename Scalar>
MCEstimate<Scalar> mc_quadratic_mean(const Matrix<Scalar>& a, const GaussianFieldMeasure<Scalar>& measure,
                                     long samples, std::uint64_t seed) {
  return detail::mc_quadratic(a, measure, samples, seed, [](Scalar v) { return v; });
}

/// Monte Carlo estimate of E[(1/2 phi^T A phi)^2].
template <typename Scalar>
MCEstimate<Scalar> mc_quadratic_second_moment(const Matrix<Scalar>& a, const GaussianFieldMeasure<Scalar>& measure,
                                              long samples, std::uint64_t seed) {
  return detail::mc_quadratic(a, measure, samples, seed, [](Scalar v) { return v * v; });
}

/// 1/2 m^T A m + 1/2 tr(A D)
template <typename Scalar>
Scalar quadratic_mean(const Matrix<Scalar>& a, const GaussianFieldMeasure<Scalar>& measure) {
  detail::require_quadratic_inputs(a, measure);
  const auto& m = measure.mean;
  return Scalar(0.5) * m.dot(a * m) + Scalar(0.5) * trace_of_product(a, measure.covariance);
}

/// 1/4 (m^T A m)^2 + 1/2 (m^T A m) tr(AD) + m^T ADA m + 1/2 tr(ADAD) + 1/4 tr(AD)^2
template <typename Scalar>
Scalar quadratic_second_moment(const Matrix<Scalar>& a, const GaussianFieldMeasure<Scalar>& measure) {
  detail::require_quadratic_inputs(a, measure);
  const auto& m = measure.mean;
  const Matrix<Scalar> ad = a * measure.covariance;
  const Vector<Scalar> am = a * m;
  const Scalar mam = m.dot(am);
  const Scalar tr = ad.trace();
  return Scalar(0.25) * mam * mam + Scalar(0.5) * mam * tr + am.dot(measure.covariance * am) +
         Scalar(0.5) * trace_of_product(ad, ad) + Scalar(0.25) * tr * tr;
}

/// m^T ADA m + 1/2 tr(ADAD)
template <typename Scalar>
Scalar quadratic_variance(const Matrix<Scalar>& a, const GaussianFieldMeasure<Scalar>& measure) {
  detail::require_quadratic_inputs(a, measure);
  const Matrix<Scalar> ad = a * measure.covariance;
  const Vector<Scalar> am = a * measure.mean;
  return am.dot(measure.covariance * am) + Scalar(0.5) * trace_of_product(ad, ad);
}

template <typename Scalar>
struct FdResult {
  Scalar value{0};          // Richardson-extrapolated estimate
  Scalar coarse{0};         // plain central difference at the base step
  Scalar disagreement{0};   // relative gap between the two step sizes
  bool flagged{false};      // disagreement > 1e-4
  Scalar step{0};
};

/// Central finite difference of order 1 or 2 with one Richardson step.
/// Base step 1e-5 max(1,|x|) for the first derivative; the second derivative
/// uses 1e-4 max(1,|x|) to keep cancellation error below truncation error.
/// Throws NumericalError if f is not finite on the stencil.
template <typename Scalar>
FdResult<Scalar> fd_derivative(const std::function<Scalar(Scalar)>& f, Scalar x, int order) {
  require(order == 1 || order == 2, "fd_derivative: order must be 1 or 2");
  require(std::isfinite(x), "fd_derivative: point must be finite");
  const Scalar base = (order == 1 ? Scalar(1e-5) : Scalar(1e-4)) * std::max(Scalar(1), std::abs(x));
  auto eval = [&](Scalar at) {
    const Scalar v = f(at);
    if (!std::isfinite(v)) throw NumericalError("fd_derivative: function is not finite at a stencil point");
    return v;
  };
  auto central = [&](Scalar eps) {
    volatile Scalar up = x + eps;
    volatile Scalar down = x - eps;
    const Scalar h = (up - down) / 2;
    if (order == 1) return (eval(up) - eval(down)) / (2 * h);
    return (eval(up) - 2 * eval(x) + eval(down)) / (h * h);
  };
  FdResult<Scalar> out;
  out.step = base;
  out.coarse = central(base);
  const Scalar fine = central(base / 2);
  out.value = (4 * fine - out.coarse) / 3;
  const Scalar denom = std::max(std::abs(out.value), std::numeric_limits<Scalar>::min());
  out.disagreement = std::abs(fine - out.coarse) / denom;
  out.flagged = out.disagreement > Scalar(1e-4);
  return out;
}

}  // namespace ift

#endif  // IFT_MC_ORACLE_HPP
