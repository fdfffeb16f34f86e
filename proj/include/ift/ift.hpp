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

#ifndef IFT_IFT_HPP
#define IFT_IFT_HPP

#include "ift/core.hpp"
#include "ift/free_theory.hpp"
#include "ift/gaussian.hpp"
#include "ift/mc_oracle.hpp"
#include "ift/measurement.hpp"
#include "ift/mesh.hpp"
#include "ift/operators.hpp"
#include "ift/parameter_posterior.hpp"
#include "ift/trust_inference.hpp"

#endif  // IFT_IFT_HPP
