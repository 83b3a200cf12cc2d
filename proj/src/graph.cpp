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

#include "gnm/graph.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace gnm {

std::size_t GnmGraph::trainable_count() const {
  return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1));
}

std::size_t GnmGraph::in_degree(std::size_t v) const {
  const std::size_t n = size();
  std::size_t deg = 0;
  for (std::size_t j = 0; j < n; ++j) deg += mask_[v * n + j];
  return deg;
}

GnmGraph build_gnm_graph(std::size_t inputs, std::size_t hidden, std::size_t outputs) {
  if (inputs == 0) throw std::invalid_argument("build_gnm_graph: need at least one input");
  if (outputs == 0) throw std::invalid_argument("build_gnm_graph: need at least one output");
  GnmGraph g;
  g.partition_ = {inputs, hidden, 1, outputs};
  const std::size_t n = g.size();
  const std::size_t bias = g.bias_index();
  g.mask_.assign(n * n, 1);
  for (std::size_t j = 0; j < n; ++j) g.mask_[bias * n + j] = 0;
  return g;
}

std::size_t MlpGraph::node(std::size_t layer, std::size_t i) const {
  if (layer >= widths_.size() || i >= widths_[layer]) {
    throw std::out_of_range("MlpGraph::node: no such neuron");
  }
  return layer_offset_[layer] + i;
}

std::size_t MlpGraph::bias_node(std::size_t layer) const {
  if (layer == 0 || layer > layer_count()) throw std::out_of_range("MlpGraph::bias_node");
  return partition_.first_bias() + layer - 1;
}

MlpGraph build_mlp_graph(std::size_t inputs, const std::vector<std::size_t>& hidden,
                         std::size_t outputs) {
  if (inputs == 0 || outputs == 0) {
    throw std::invalid_argument("build_mlp_graph: inputs and outputs must be positive");
  }
  if (std::find(hidden.begin(), hidden.end(), std::size_t{0}) != hidden.end()) {
    throw std::invalid_argument("build_mlp_graph: hidden layer of width 0");
  }
  MlpGraph g;
  const std::size_t k = hidden.size() + 1;
  const std::size_t hidden_total = std::accumulate(hidden.begin(), hidden.end(), std::size_t{0});
  g.partition_ = {inputs, hidden_total, k, outputs};

  g.widths_.push_back(inputs);
  g.widths_.insert(g.widths_.end(), hidden.begin(), hidden.end());
  g.widths_.push_back(outputs);

  g.layer_offset_.resize(k + 1);
  g.layer_offset_[0] = 0;
  std::size_t offset = inputs;
  for (std::size_t t = 1; t < k; ++t) {
    g.layer_offset_[t] = offset;
    offset += g.widths_[t];
  }
  g.layer_offset_[k] = g.partition_.first_output();

  g.in_.resize(g.size());
  for (std::size_t t = 1; t <= k; ++t) {
    for (std::size_t i = 0; i < g.widths_[t]; ++i) {
      const std::size_t v = g.node(t, i);
      for (std::size_t j = 0; j < g.widths_[t - 1]; ++j) {
        const std::size_t u = g.node(t - 1, j);
        g.edges_.push_back({u, v});
        g.in_[v].push_back(u);
      }
      g.edges_.push_back({g.bias_node(t), v});
      g.in_[v].push_back(g.bias_node(t));
    }
  }
  return g;
}

std::vector<std::vector<std::size_t>> topological_layers(const MlpGraph& g) {
  const std::size_t n = g.size();
  std::vector<std::vector<std::size_t>> out_edges(n);
  std::vector<std::size_t> indeg(n, 0);
  for (const Edge& e : g.edges()) {
    out_edges[e.from].push_back(e.to);
    ++indeg[e.to];
  }

  // Kahn's algorithm with longest-path depth for nodes that have parents.
  std::vector<std::size_t> depth(n, 0);
  std::vector<std::size_t> pending = indeg;
  std::vector<std::size_t> queue;
  for (std::size_t v = 0; v < n; ++v)
    if (indeg[v] == 0) queue.push_back(v);
  std::size_t visited = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t u = queue[head];
    ++visited;
    for (std::size_t v : out_edges[u]) {
      depth[v] = std::max(depth[v], depth[u] + 1);
      if (--pending[v] == 0) queue.push_back(v);
    }
  }
  if (visited != n) throw std::logic_error("topological_layers: graph has a cycle");

  // Sources sit one stage before their earliest consumer.
  for (std::size_t v = 0; v < n; ++v) {
    if (indeg[v] != 0 || out_edges[v].empty()) continue;
    std::size_t earliest = std::numeric_limits<std::size_t>::max();
    for (std::size_t w : out_edges[v]) earliest = std::min(earliest, depth[w]);
    depth[v] = earliest - 1;
  }

  const std::size_t stages = *std::max_element(depth.begin(), depth.end()) + 1;
  std::vector<std::vector<std::size_t>> layers(stages);
  for (std::size_t v = 0; v < n; ++v) layers[depth[v]].push_back(v);
  return layers;
}

}  // namespace gnm
