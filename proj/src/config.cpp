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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace ift::app {

namespace {

using nlohmann::json;

// Object view that rejects keys nobody asked about.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  const json& at(const std::string& key) {
    if (!has(key)) throw ConfigError(where(key) + ": required key is missing");
    return j_.at(key);
  }

  std::string where(const std::string& key) const { return path_ + "." + key; }

  double number(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where(key) + ": must be finite");
    return x;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  long long integer(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
    return v.get<long long>();
  }
  long long integer(const std::string& key, long long fallback) { return has(key) ? integer(key) : fallback; }

  std::string string(const std::string& key) {
    const auto& v = at(key);
    if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
    return v.get<std::string>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = j_.at(key);
    if (!v.is_boolean()) throw ConfigError(where(key) + ": expected true or false");
    return v.get<bool>();
  }

  void finish() const {
    for (const auto& [key, value] : j_.items())
      if (!seen_.count(key)) throw ConfigError(path_ + ": unknown key '" + key + "'");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void check(bool ok, const std::string& msg) {
  if (!ok) throw ConfigError(msg);
}

std::vector<double> number_list(const json& v, const std::string& where) {
  check(v.is_array(), where + ": expected an array");
  std::vector<double> out;
  for (const auto& x : v) {
    check(x.is_number() && std::isfinite(x.get<double>()), where + ": expected finite numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

MeshSpec parse_mesh(const json& j) {
  Section s(j, "mesh");
  MeshSpec m;
  m.dim = int(s.integer("dim"));
  check(m.dim == 1 || m.dim == 2, "mesh.dim: must be 1 or 2");
  if (s.has("extent")) {
    const auto& e = s.at("extent");
    check(e.is_array() && e.size() == std::size_t(m.dim), "mesh.extent: expected one [lower, upper] pair per axis");
    for (const auto& pair : e) {
      const auto v = number_list(pair, "mesh.extent");
      check(v.size() == 2 && v[1] > v[0], "mesh.extent: each axis needs lower < upper");
      m.extent.push_back(Intervald{v[0], v[1]});
    }
  } else {
    m.extent.assign(std::size_t(m.dim), Intervald{0, 1});
  }
  const auto& n = s.at("nodes_per_axis");
  if (n.is_number_integer()) {
    m.nodes_per_axis = {n.get<int>()};
  } else {
    check(n.is_array() && n.size() == std::size_t(m.dim), "mesh.nodes_per_axis: integer or one integer per axis");
    for (const auto& x : n) {
      check(x.is_number_integer(), "mesh.nodes_per_axis: expected integers");
      m.nodes_per_axis.push_back(x.get<int>());
    }
  }
  for (int v : m.nodes_per_axis) check(v >= 3 && v <= 4096, "mesh.nodes_per_axis: must lie in [3, 4096]");
  s.finish();
  return m;
}

SourceSpec parse_source(const json& j, const std::string& path, int dim) {
  Section s(j, path);
  SourceSpec src;
  src.type = s.string("type");
  if (src.type == "constant") {
    src.value = s.number("value");
  } else if (src.type == "sine") {
    src.amplitude = s.number("amplitude", 1.0);
    src.mode = int(s.integer("mode", 1));
    check(src.mode >= 1, path + ".mode: must be a positive integer");
  } else if (src.type == "bump") {
    src.amplitude = s.number("amplitude", 1.0);
    src.center = number_list(s.at("center"), s.where("center"));
    check(src.center.size() == std::size_t(dim), path + ".center: one coordinate per axis");
    src.width = s.number("width");
    check(src.width > 0, path + ".width: must be positive");
  } else if (src.type == "csv") {
    src.path = s.string("path");
  } else if (src.type == "sum") {
    const auto& terms = s.at("terms");
    check(terms.is_array() && !terms.empty(), path + ".terms: expected a non-empty array");
    for (std::size_t i = 0; i < terms.size(); ++i)
      src.terms.push_back(parse_source(terms[i], path + ".terms[" + std::to_string(i) + "]", dim));
  } else {
    throw ConfigError(path + ".type: unknown source type '" + src.type + "'");
  }
  s.finish();
  return src;
}

TruthSpec parse_truth(const json& j, int dim) {
  Section s(j, "truth");
  TruthSpec t;
  const bool has_source = s.has("source");
  const bool has_csv = s.has("csv");
  check(has_source != has_csv, "truth: give exactly one of 'source' or 'csv'");
  if (has_source) {
    t.source = parse_source(s.at("source"), "truth.source", dim);
    t.scale = s.number("scale", 1.0);
    check(t.scale >= 0, "truth.scale: must be nonnegative");
  } else {
    t.csv = s.string("csv");
  }
  s.finish();
  return t;
}

MeasurementSpec parse_measurement(const json& j) {
  Section s(j, "measurement");
  MeasurementSpec m;
  const bool uniform = s.has("uniform_density");
  const bool csv = s.has("csv");
  check(uniform != csv, "measurement: give exactly one of 'uniform_density' or 'csv'");
  if (uniform) {
    const auto k = s.integer("uniform_density");
    check(k >= 2 && k <= 100000, "measurement.uniform_density: must lie in [2, 100000]");
    m.uniform_density = int(k);
  } else {
    m.csv = s.string("csv");
  }
  m.sigma = s.number("sigma");
  check(m.sigma > 0, "measurement.sigma: must be positive");
  m.add_noise = s.boolean("add_noise", true);
  s.finish();
  return m;
}

PriorSpec parse_prior(const json& j) {
  PriorSpec p;
  if (j.is_string()) {
    const auto k = j.get<std::string>();
    if (k == "flat") p.kind = BetaPriorKind::flat;
    else if (k == "jeffreys") p.kind = BetaPriorKind::jeffreys;
    else throw ConfigError("prior: expected 'flat', 'jeffreys' or a gaussian object");
    return p;
  }
  Section s(j, "prior");
  const auto k = s.string("kind");
  if (k == "flat") {
    p.kind = BetaPriorKind::flat;
  } else if (k == "jeffreys") {
    p.kind = BetaPriorKind::jeffreys;
  } else if (k == "gaussian") {
    p.kind = BetaPriorKind::gaussian;
    p.mean = s.number("mean");
    p.variance = s.number("variance");
    check(p.variance > 0, "prior.variance: must be positive");
  } else {
    throw ConfigError("prior.kind: unknown prior '" + k + "'");
  }
  s.finish();
  return p;
}

TrustOptionsd parse_solver(const json& j) {
  Section s(j, "solver");
  TrustOptionsd o;
  o.damping = s.number("damping", o.damping);
  check(o.damping > 0 && o.damping <= 1, "solver.damping: must lie in (0, 1]");
  o.tolerance = s.number("tolerance", o.tolerance);
  check(o.tolerance > 0, "solver.tolerance: must be positive");
  o.max_iterations = int(s.integer("max_iterations", o.max_iterations));
  check(o.max_iterations >= 1 && o.max_iterations <= 100000, "solver.max_iterations: must lie in [1, 100000]");
  o.initial_beta = s.number("initial_beta", o.initial_beta);
  check(o.initial_beta > 0, "solver.initial_beta: must be positive");
  o.bisection_lo = s.number("bisection_lo", o.bisection_lo);
  o.bisection_hi = s.number("bisection_hi", o.bisection_hi);
  check(o.bisection_lo > 0 && o.bisection_hi > o.bisection_lo, "solver: need 0 < bisection_lo < bisection_hi");
  s.finish();
  return o;
}

GridSpec parse_grid(const json& j) {
  Section s(j, "grid");
  GridSpec g;
  g.lo = s.number("lo", g.lo);
  g.hi = s.number("hi", g.hi);
  g.points = int(s.integer("points", g.points));
  check(g.lo > 0 && g.hi > g.lo, "grid: need 0 < lo < hi");
  check(g.points >= 3 && g.points <= 100000, "grid.points: must lie in [3, 100000]");
  s.finish();
  return g;
}

SweepSpec parse_sweep(const json& j) {
  Section s(j, "sweep");
  SweepSpec sw;
  if (s.has("scales")) {
    sw.scales = number_list(s.at("scales"), "sweep.scales");
    check(!sw.scales.empty(), "sweep.scales: must not be empty");
    for (double c : sw.scales) check(c >= 0, "sweep.scales: must be nonnegative");
  }
  if (s.has("densities")) {
    const auto& d = s.at("densities");
    check(d.is_array(), "sweep.densities: expected an array");
    std::vector<int> ks;
    for (const auto& x : d) {
      check(x.is_number_integer(), "sweep.densities: expected integers");
      ks.push_back(x.get<int>());
    }
    check(!ks.empty(), "sweep.densities: must not be empty");
    for (std::size_t i = 0; i < ks.size(); ++i) {
      check(ks[i] >= 2, "sweep.densities: must be at least 2");
      if (i > 0)
        check(ks[i] > ks[i - 1] && ks[i] % ks[i - 1] == 0,
              "sweep.densities: designs must be nested (each density a multiple of the previous)");
    }
    sw.densities = std::move(ks);
  }
  check(!sw.scales.empty() || sw.densities, "sweep: give 'scales', 'densities' or both");
  s.finish();
  return sw;
}

}  // namespace

ExperimentConfig parse_config(const json& doc, const std::string& base_dir) {
  Section s(doc, "config");
  ExperimentConfig c;
  c.base_dir = base_dir;
  c.mesh = parse_mesh(s.at("mesh"));
  c.source = parse_source(s.at("source"), "source", c.mesh.dim);
  if (s.has("truth")) c.truth = parse_truth(s.at("truth"), c.mesh.dim);
  c.measurement = parse_measurement(s.at("measurement"));
  if (s.has("prior")) c.prior = parse_prior(s.at("prior"));
  if (s.has("solver")) c.solver = parse_solver(s.at("solver"));
  if (s.has("grid")) c.grid = parse_grid(s.at("grid"));
  if (s.has("seed")) {
    const auto& v = s.at("seed");
    check(v.is_number_unsigned(), "config.seed: expected a nonnegative integer");
    c.seed = v.get<std::uint64_t>();
  }
  if (s.has("sweep")) c.sweep = parse_sweep(s.at("sweep"));
  if (s.has("output_dir")) c.output_dir = s.string("output_dir");
  s.finish();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  const auto parent = std::filesystem::path(path).parent_path();
  return parse_config(doc, parent.empty() ? "." : parent.string());
}

}  // namespace ift::app
