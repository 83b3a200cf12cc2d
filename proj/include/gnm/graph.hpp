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
#include <utility>
#include <vector>

namespace gnm {

// Node bookkeeping shared by both graph kinds. Indices are laid out as
// [inputs | hidden | bias node(s) | outputs]; class j maps to node
// total() - outputs + j.
struct NodePartition {
  std::size_t inputs = 0;
  std::size_t hidden = 0;
  std::size_t bias = 0;
  std::size_t outputs = 0;

  std::size_t total() const { return inputs + hidden + bias + outputs; }
  std::size_t first_hidden() const { return inputs; }
  std::size_t first_bias() const { return inputs + hidden; }
  std::size_t first_output() const { return inputs + hidden + bias; }

  bool is_input(std::size_t v) const { return v < inputs; }
  bool is_hidden(std::size_t v) const { return v >= first_hidden() && v < first_bias(); }
  bool is_bias(std::size_t v) const { return v >= first_bias() && v < first_output(); }
  bool is_output(std::size_t v) const { return v >= first_output() && v < total(); }

  bool operator==(const NodePartition&) const = default;
};

// Near-complete digraph: the subgraph on inputs, hidden and outputs is
// complete with self-loops, and the single bias node feeds every other node
// while receiving nothing. trainable(i, j) refers to the weight of edge
// j -> i, i.e. entry (i, j) of an adjacency matrix.
class GnmGraph {
 public:
  GnmGraph() = default;

  const NodePartition& partition() const { return partition_; }
  std::size_t size() const { return partition_.total(); }
  std::size_t bias_index() const { return partition_.first_bias(); }

  bool trainable(std::size_t row, std::size_t col) const { return mask_[row * size() + col] != 0; }
  std::size_t trainable_count() const;
  std::size_t in_degree(std::size_t v) const;

  bool operator==(const GnmGraph&) const = default;

  friend GnmGraph build_gnm_graph(std::size_t inputs, std::size_t hidden, std::size_t outputs);

 private:
  NodePartition partition_;
  std::vector<unsigned char> mask_;
};

GnmGraph build_gnm_graph(std::size_t inputs, std::size_t hidden, std::size_t outputs);

struct Edge {
  std::size_t from = 0;
  std::size_t to = 0;
  bool operator==(const Edge&) const = default;
  auto operator<=>(const Edge&) const = default;
};

// Layered DAG of a K-layer MLP with one bias node per non-input layer.
// Layer 0 is the inputs, layer K the outputs.
class MlpGraph {
 public:
  const NodePartition& partition() const { return partition_; }
  std::size_t size() const { return partition_.total(); }
  std::size_t layer_count() const { return widths_.size() - 1; }
  // widths()[t] is the neuron count of layer t, t = 0..K.
  const std::vector<std::size_t>& widths() const { return widths_; }

  std::size_t node(std::size_t layer, std::size_t i) const;
  // Bias node feeding layer t, t = 1..K.
  std::size_t bias_node(std::size_t layer) const;

  const std::vector<Edge>& edges() const { return edges_; }
  // In-neighbours of v ordered as previous layer first, bias last.
  const std::vector<std::size_t>& in_neighbors(std::size_t v) const { return in_[v]; }

  friend MlpGraph build_mlp_graph(std::size_t inputs, const std::vector<std::size_t>& hidden,
                                  std::size_t outputs);

 private:
  NodePartition partition_;
  std::vector<std::size_t> widths_;
  std::vector<std::size_t> layer_offset_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> in_;
};

MlpGraph build_mlp_graph(std::size_t inputs, const std::vector<std::size_t>& hidden,
                         std::size_t outputs);

// Update schedule of the asynchronous pass: stage 0 holds the inputs and
// the first bias node, stage t the neurons of layer t and the bias feeding
// layer t + 1. Sources are scheduled as late as their successors allow.
std::vector<std::vector<std::size_t>> topological_layers(const MlpGraph& g);

}  // namespace gnm
