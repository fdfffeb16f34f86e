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

#ifndef IFT_APP_ERRORS_HPP
#define IFT_APP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ift::app {

enum ExitCode : int { kSuccess = 0, kConfigError = 2, kSolverFailure = 3, kVerificationFailure = 4 };

/// Invalid configuration or input data.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ift::app

#endif  // IFT_APP_ERRORS_HPP
