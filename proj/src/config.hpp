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

#ifndef IFT_APP_CONFIG_HPP
#define IFT_APP_CONFIG_HPP

#include "ift/ift.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ift::app {

struct MeshSpec {
  int dim{1};
  std::vector<Intervald> extent;
  std::vector<int> nodes_per_axis;
};

/// Analytic source, nodal CSV, or a sum of sources.
struct SourceSpec {
  std::string type;  // constant | sine | bump | csv | sum
  double value{0};
  double amplitude{1};
  int mode{1};
  std::vector<double> center;
  double width{0.1};
  std::string path;
  std::vector<SourceSpec> terms;
};

struct TruthSpec {
  std::optional<SourceSpec> source;  // q' for phi* = G (q + c (q' - q))
  double scale{1};
  std::string csv;  // nodal field, header x[,y],phi
};

struct MeasurementSpec {
  std::optional<int> uniform_density;
  std::string csv;  // header x[,y] or x[,y],d
  double sigma{0};
  bool add_noise{true};
};

struct PriorSpec {
  BetaPriorKind kind{BetaPriorKind::flat};
  double mean{0};
  double variance{1};
};

struct GridSpec {
  double lo{1e-3};
  double hi{1e3};
  int points{101};
};

struct SweepSpec {
  std::vector<double> scales;
  std::optional<std::vector<int>> densities;
};

struct ExperimentConfig {
  MeshSpec mesh;
  SourceSpec source;
  std::optional<TruthSpec> truth;
  MeasurementSpec measurement;
  PriorSpec prior;
  TrustOptionsd solver;
  std::optional<GridSpec> grid;  // absent: centred on the inferred trust
  std::uint64_t seed{0};
  std::optional<SweepSpec> sweep;
  std::string output_dir;
  std::string base_dir;  // relative CSV paths resolve against this
};

/// Parses and validates a JSON experiment description. Unknown keys, missing
/// required keys and out-of-range values throw ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path);

}  // namespace ift::app

#endif  // IFT_APP_CONFIG_HPP
