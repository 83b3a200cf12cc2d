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
#include <span>

#include "gnm/gnm_model.hpp"
#include "gnm/linalg.hpp"

namespace gnm {

class Rng;

struct L1Result {
  double value = 0.0;
  GradientSet subgradient;
};

// lambda * sum of |a| over trainable entries (the bias row is excluded).
// The subgradient is lambda * sign(a), with sign(0) = 0.
L1Result l1_penalty(const AdjacencyTensor& a, double lambda);

// One inverted-dropout multiplier: 0 with probability p, else 1 / (1 - p).
double dropout_keep_scale(Rng& rng, double p);

// Inverted-dropout mask of length len. Indices listed in keep are forced to
// 1 (the bias coordinate, for instance).
Vector dropout_mask(Rng& rng, std::size_t len, double p, std::span<const std::size_t> keep = {});

}  // namespace gnm
