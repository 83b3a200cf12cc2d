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
#include <variant>
#include <vector>

#include "gnm/gnm_model.hpp"
#include "gnm/mlp.hpp"

namespace gnm {

class Rng;

struct GnmModel {
  AdjacencyTensor adjacency;
  Activation activation = Activation::relu;
  bool operator==(const GnmModel&) const = default;
};

struct MlpModel {
  MlpSpec spec;
  Activation activation = Activation::relu;
  bool operator==(const MlpModel&) const = default;
};

using Model = std::variant<GnmModel, MlpModel>;

enum class ModelKind : std::uint8_t { gnm = 0, mlp = 1 };

struct ModelConfig {
  ModelKind kind = ModelKind::gnm;
  // GNM: total node count including inputs, the bias node and outputs.
  std::size_t nodes = 50;
  // MLP: hidden widths. A single width is repeated to fill `layers - 1`.
  std::vector<std::size_t> hidden = {64};
  std::size_t layers = 2;
  Activation activation = Activation::relu;
};

Model build_model(const ModelConfig& cfg, std::size_t inputs, std::size_t outputs, Rng& rng);

// Largest GNM node count (or MLP hidden width) whose parameter count stays
// within budget. Returns 0 when even the smallest model does not fit.
std::size_t gnm_nodes_for_budget(std::size_t budget, std::size_t layers, std::size_t inputs,
                                 std::size_t outputs);
std::size_t mlp_width_for_budget(std::size_t budget, std::size_t layers, std::size_t inputs,
                                 std::size_t outputs);

ModelKind kind_of(const Model& m);
std::size_t input_count(const Model& m);
std::size_t output_count(const Model& m);
std::size_t parameter_count(const Model& m);
Activation activation_of(const Model& m);

// Inference: x is m x B, result c x B. No dropout.
Matrix predict(const Model& m, const Matrix& x);

}  // namespace gnm
