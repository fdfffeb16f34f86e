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

#include "output.hpp"

#include "errors.hpp"

#include <filesystem>
#include <fstream>
#include <system_error>

namespace ift::app {

namespace fs = std::filesystem;

void write_artifacts(const std::string& dir, const std::vector<Artifact>& artifacts) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
  std::vector<std::pair<fs::path, fs::path>> staged;
  auto cleanup = [&] {
    for (const auto& [tmp, final_path] : staged) fs::remove(tmp, ec);
  };
  for (const auto& a : artifacts) {
    const fs::path final_path = fs::path(dir) / a.name;
    const fs::path tmp = fs::path(dir) / ("." + a.name + ".tmp");
    staged.emplace_back(tmp, final_path);
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << a.content;
    out.close();
    if (!out) {
      cleanup();
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  for (const auto& [tmp, final_path] : staged) {
    fs::rename(tmp, final_path, ec);
    if (ec) {
      cleanup();
      throw std::runtime_error("cannot move " + tmp.string() + " into place: " + ec.message());
    }
  }
}

}  // namespace ift::app
