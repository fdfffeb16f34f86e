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

#ifndef IFT_APP_OUTPUT_HPP
#define IFT_APP_OUTPUT_HPP

#include <string>
#include <vector>

namespace ift::app {

struct Artifact {
  std::string name;
  std::string content;
};

/// Writes every artifact to a temporary sibling first and renames them into
/// place only once all writes succeeded; on failure the temporaries are
/// removed and nothing is left behind.
void write_artifacts(const std::string& dir, const std::vector<Artifact>& artifacts);

}  // namespace ift::app

#endif  // IFT_APP_OUTPUT_HPP
