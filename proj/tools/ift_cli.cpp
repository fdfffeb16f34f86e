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

#include "config.hpp"
#include "errors.hpp"
#include "experiments.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

int finish(const ift::app::RunOutcome& outcome, const std::string& out_dir) {
  using namespace ift::app;
  if (!outcome.error.is_null()) {
    std::cerr << outcome.error.dump() << std::endl;
    return outcome.exit_code;
  }
  try {
    write_artifacts(out_dir, outcome.artifacts);
  } catch (const std::exception& e) {
    std::cerr << error_record(kConfigError, "io", e.what()).dump() << std::endl;
    return kConfigError;
  }
  for (const auto& a : outcome.artifacts) std::cout << out_dir << "/" << a.name << "\n";
  return outcome.exit_code;
}

int with_config(const std::string& path, std::string out_dir,
                ift::app::RunOutcome (*run)(const ift::app::ExperimentConfig&)) {
  using namespace ift::app;
  ExperimentConfig config;
  try {
    config = load_config(path);
  } catch (const std::exception& e) {
    std::cerr << error_record(kConfigError, "config", e.what()).dump() << std::endl;
    return kConfigError;
  }
  if (out_dir.empty()) out_dir = config.output_dir;
  if (out_dir.empty()) {
    std::cerr << error_record(kConfigError, "config", "no output directory: pass --out or set output_dir").dump()
              << std::endl;
    return kConfigError;
  }
  return finish(run(config), out_dir);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-trust inference for physics-informed Gaussian field priors"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;

  auto* infer = app.add_subcommand("infer", "Infer the model trust for one experiment");
  infer->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  infer->add_option("--out", out_dir, "Output directory");

  auto* sweep = app.add_subcommand("sweep", "Mismatch sweep and design-refinement study");
  sweep->add_option("--config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out_dir, "Output directory");

  auto* verify = app.add_subcommand("verify", "Check closed-form identities against Monte Carlo and finite differences");
  verify->add_option("--seed", seed, "Seed for the randomized checks");
  verify->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : ift::app::kConfigError;
  }

  if (infer->parsed()) return with_config(config_path, out_dir, &ift::app::run_infer);
  if (sweep->parsed()) return with_config(config_path, out_dir, &ift::app::run_sweep);
  return finish(ift::app::run_verify(seed), out_dir);
}
