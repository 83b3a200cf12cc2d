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

// The classic MLP, its asynchronous message-passing twin on the layered DAG,
// and the exact embedding of an MLP into a GNM adjacency tensor.

#include <cstddef>
#include <map>
#include <vector>

#include "gnm/gnm_model.hpp"
#include "gnm/graph.hpp"
#include "gnm/linalg.hpp"

namespace gnm {

class Rng;

// widths = (n_0 = m, n_1, ..., n_K = c); weights[k] is n_{k+1} x n_k.
struct MlpSpec {
  std::vector<std::size_t> widths;
  std::vector<Matrix> weights;
  std::vector<Vector> biases;

  std::size_t layer_count() const { return widths.empty() ? 0 : widths.size() - 1; }
  std::size_t input_count() const { return widths.front(); }
  std::size_t output_count() const { return widths.back(); }
  std::vector<std::size_t> hidden_widths() const {
    return {widths.begin() + 1, widths.end() - 1};
  }
  std::size_t parameter_count() const;

  void validate() const;
  bool operator==(const MlpSpec&) const = default;
};

// Weights and biases ~ Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)).
MlpSpec random_mlp_spec(const std::vector<std::size_t>& widths, Rng& rng);
MlpSpec zero_mlp_spec(const std::vector<std::size_t>& widths);

Vector mlp_forward(const MlpSpec& spec, const Vector& x, Activation f);

struct MlpTape {
  std::vector<Matrix> pre;   // z_k, k = 1..K
  std::vector<Matrix> post;  // h_0 = x, h_k
  std::vector<Matrix> masks;
};

struct MlpGradients {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
};

// x is m x B. Dropout multiplies hidden activations only.
MlpTape mlp_forward_batch(const MlpSpec& spec, const Matrix& x, Activation f,
                          const DropoutConfig* dropout = nullptr);
MlpGradients mlp_backward(const MlpSpec& spec, const MlpTape& tape, Activation f,
                          const Matrix& d_outputs);

// Per-edge weights alpha_uv of the layered DAG.
using EdgeWeights = std::map<Edge, double>;

EdgeWeights transcribe_weights(const MlpGraph& g, const MlpSpec& spec);

// Asynchronous pass: nodes are updated stage by stage, each reading only
// already-final neighbours. Output nodes skip the activation.
Vector gnn_mlp_forward(const MlpGraph& g, const EdgeWeights& w, const Vector& x, Activation f);
// Same, with an explicit update schedule (for order-independence checks).
Vector gnn_mlp_forward(const MlpGraph& g, const EdgeWeights& w, const Vector& x, Activation f,
                       const std::vector<std::vector<std::size_t>>& schedule);

struct EmbeddedMlp {
  GnmGraph graph;
  AdjacencyTensor adjacency;
};

// K-step tensor over m + N + 1 nodes reproducing spec exactly: step k holds
// W_k in the block mapping layer k-1 onto layer k, b_k in the bias column of
// those rows, and the unit bias row.
EmbeddedMlp embed_mlp(const MlpSpec& spec);

// GNM node index of neuron i in MLP layer t under embed_mlp's layout.
std::size_t embedded_node(const MlpSpec& spec, std::size_t layer, std::size_t i);

}  // namespace gnm
