// Copyright 2026 The GNM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gnm/gnm_model.hpp"

namespace gnm {

// A flat run of parameters with its gradient. Entries in [frozen_begin,
// frozen_end) are never updated and their moments stay zero.
struct ParameterBlock {
  std::span<double> values;
  std::span<const double> grad;
  std::size_t frozen_begin = 0;
  std::size_t frozen_end = 0;
};

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t step = 0;
  std::vector<std::vector<double>> first;
  std::vector<std::vector<double>> second;
};

// Bias-corrected Adam over a list of blocks. Moments are sized lazily on
// the first call; later calls must pass the same block layout.
void adam_step(std::span<const ParameterBlock> blocks, AdamState& state, double lr);

// Adam on a GNM tensor; the bias row of every step is left untouched.
void adam_step(AdjacencyTensor& a, const GradientSet& g, AdamState& state, double lr);

}  // namespace gnm
