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

// Synchronous message passing on the near-complete graph:
//
//   h(k) = f(A(k) h(k-1)),  k = 1..K
//
// with f skipped on the last step and the bias coordinate pinned to 1.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "gnm/graph.hpp"
#include "gnm/linalg.hpp"

namespace gnm {

class Rng;

enum class Activation : std::uint8_t { relu = 0, identity = 1 };

double activate(Activation f, double z);
double activate_grad(Activation f, double z);

// K stacked n x n weight matrices; steps[k](i, j) is the weight of edge
// j -> i used at step k + 1. The bias row of every step is (0, ..., 0, 1).
struct AdjacencyTensor {
  NodePartition layout;
  std::vector<Matrix> steps;

  std::size_t step_count() const { return steps.size(); }
  std::size_t node_count() const { return layout.total(); }
  std::size_t bias_index() const { return layout.first_bias(); }

  // Throws std::invalid_argument if any invariant is broken.
  void validate() const;

  bool operator==(const AdjacencyTensor&) const = default;
};

// Pre-activations and activations of one (batched) forward pass. post[0]
// is the annotated input; masks holds the dropout multipliers applied after
// each activated step (empty when dropout was off).
struct GnmTape {
  std::vector<Matrix> pre;
  std::vector<Matrix> post;
  std::vector<Matrix> masks;
};

struct GradientSet {
  std::vector<Matrix> steps;
};

struct DropoutConfig {
  double p = 0.0;
  Rng* rng = nullptr;
};

// h(0): inputs = x, bias = 1, everything else 0.
Vector annotate_input(const GnmGraph& g, const Vector& x);
// Column-stacked version: x is m x B, result n x B.
Matrix annotate_batch(const NodePartition& layout, const Matrix& x);

struct GnmForwardResult {
  Vector outputs;
  GnmTape tape;
};

GnmForwardResult gnm_forward(const AdjacencyTensor& a, const Vector& h0, Activation f);

// Batched forward; h0 is n x B. Dropout, when given, multiplies hidden and
// output coordinates after each activated step.
GnmTape gnm_forward_batch(const AdjacencyTensor& a, const Matrix& h0, Activation f,
                          const DropoutConfig* dropout = nullptr);

// Output rows (last c coordinates) of the final state, c x B.
Matrix gnm_outputs(const AdjacencyTensor& a, const GnmTape& tape);

// Reverse pass of gnm_forward_batch. d_outputs is dL/d(outputs), c x B.
GradientSet gnm_backward(const AdjacencyTensor& a, const GnmTape& tape, Activation f,
                         const Matrix& d_outputs);
GradientSet gnm_backward(const AdjacencyTensor& a, const GnmTape& tape, Activation f,
                         const Vector& d_outputs);

// Trainable entries ~ Uniform(-1/sqrt(n), 1/sqrt(n)).
AdjacencyTensor init_gnm(const GnmGraph& g, std::size_t steps, Rng& rng);

// Trainable parameter count K * (n - 1) * n.
std::size_t gnm_parameter_count(std::size_t nodes, std::size_t steps);

}  // namespace gnm
