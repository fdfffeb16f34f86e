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

#ifndef IFT_APP_EXPERIMENTS_HPP
#define IFT_APP_EXPERIMENTS_HPP

#include "config.hpp"
#include "output.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ift::app {

/// Everything a run needs, resolved from the config: operators, the trust
/// state at beta = 1, the measurement setup with data, and the ground truth
/// when it is known.
struct Problem {
  FieldModel<double> model;
  ParameterStated state;
  MeasurementSetupd setup;
  std::optional<Vectord> truth;   // phi*
  std::optional<Vectord> psi0;    // G (q' - q) for mismatch sweeps
  bool data_from_file{false};
};

Problem build_problem(const ExperimentConfig& config);
Vectord evaluate_source(const SourceSpec& spec, const Meshd& mesh, const std::string& base_dir);

struct RunOutcome {
  int exit_code{0};
  std::vector<Artifact> artifacts;
  nlohmann::json error;  // null on success
};

RunOutcome run_infer(const ExperimentConfig& config);
RunOutcome run_sweep(const ExperimentConfig& config);
RunOutcome run_verify(std::uint64_t seed);

/// One identity of the verification suite.
struct CheckResult {
  std::string name;
  bool passed{false};
  double worst_deviation{0};
  double tolerance{0};
  int instances{0};
  int passing{0};
};

CheckResult check_moment_mean(std::uint64_t seed, int instances = 100, long samples = 100000);
CheckResult check_moment_second(std::uint64_t seed, int instances = 100, long samples = 200000);
CheckResult check_variance_identity(std::uint64_t seed, int instances = 100);
CheckResult check_gradient_fd(std::uint64_t seed, const std::vector<double>& betas, int problems);
CheckResult check_hessian_fd(std::uint64_t seed, const std::vector<double>& betas, int problems);
CheckResult check_partition_derivative();
CheckResult check_prior_traces();

/// 16-interior-node 1D problem with random source, 8 noisy point observations
/// (sigma = 0.05) and a slightly perturbed ground truth.
struct IdentityProblem {
  FieldModel<double> model;
  ParameterStated state;
  MeasurementSetupd setup;
};
IdentityProblem identity_problem(std::uint64_t seed, BetaPriord prior = BetaPriord::flat());

nlohmann::json error_record(int code, const std::string& kind, const std::string& message);

}  // namespace ift::app

#endif  // IFT_APP_EXPERIMENTS_HPP
