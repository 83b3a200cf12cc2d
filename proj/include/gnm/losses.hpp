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

// Losses over column-stacked outputs (c x B). Values are batch means and
// gradients are taken with respect to that mean.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gnm/linalg.hpp"

namespace gnm {

enum class LossKind : std::uint8_t { cross_entropy, binary_cross_entropy, mse };

struct LossResult {
  double value = 0.0;
  Matrix grad;
};

struct BatchTargets {
  std::vector<std::size_t> labels;  // classification
  Matrix values;                    // regression, c x B
};

Vector softmax(const Vector& z);

// Mean over samples of -log softmax(out)[label].
LossResult cross_entropy(const Matrix& outputs, std::span<const std::size_t> labels);
// Single-logit binary cross-entropy (sigmoid of the one output row).
LossResult binary_cross_entropy(const Matrix& outputs, std::span<const std::size_t> labels);
// (1/B) sum_i sum_j (y_j - out_j)^2.
LossResult mse_loss(const Matrix& outputs, const Matrix& targets);

LossResult compute_loss(LossKind kind, const Matrix& outputs, const BatchTargets& targets);

std::vector<std::size_t> predict_classes(LossKind kind, const Matrix& outputs);

}  // namespace gnm
