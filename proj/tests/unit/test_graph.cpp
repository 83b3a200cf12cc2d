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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "gnm/graph.hpp"

using namespace gnm;

namespace {

std::vector<std::size_t> sorted(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_CASE("GNM graph of the two-input example") {
  const GnmGraph g = build_gnm_graph(2, 2, 1);
  CHECK(g.size() == 6);
  CHECK(g.bias_index() == 4);
  CHECK(g.partition().first_output() == 5);
  for (std::size_t j = 0; j < 6; ++j) CHECK_FALSE(g.trainable(4, j));
  for (std::size_t i = 0; i < 6; ++i) {
    if (i == 4) continue;
    for (std::size_t j = 0; j < 6; ++j) CHECK(g.trainable(i, j));
  }
}

TEST_CASE("smallest GNM graph") {
  const GnmGraph g = build_gnm_graph(1, 0, 1);
  CHECK(g.size() == 3);
  CHECK(g.trainable_count() == 6);
  CHECK_THROWS(build_gnm_graph(0, 3, 1));
  CHECK_THROWS(build_gnm_graph(2, 3, 0));
}

TEST_CASE("trainable count and in-degrees") {
  for (std::size_t m : {1, 2, 5})
    for (std::size_t h : {0, 1, 7})
      for (std::size_t c : {1, 3}) {
        const GnmGraph g = build_gnm_graph(m, h, c);
        const std::size_t k = m + h + c;
        CHECK(g.trainable_count() == k * k + k);
        for (std::size_t v = 0; v < g.size(); ++v) {
          CHECK(g.in_degree(v) == (v == g.bias_index() ? 0 : g.size()));
        }
      }
}

TEST_CASE("identical arguments build identical graphs") {
  CHECK(build_gnm_graph(3, 4, 2) == build_gnm_graph(3, 4, 2));
  CHECK(build_mlp_graph(3, {4, 5}, 2).edges() == build_mlp_graph(3, {4, 5}, 2).edges());
}

TEST_CASE("MLP graph node counts") {
  const MlpGraph g = build_mlp_graph(2, {3, 4}, 2);
  CHECK(g.size() == 2 + 3 + 4 + 3 + 2);
  CHECK(g.layer_count() == 3);
  const MlpGraph linear = build_mlp_graph(1, {}, 1);
  CHECK(linear.size() == 3);
  CHECK(linear.edges().size() == 2);
  CHECK_THROWS(build_mlp_graph(2, {3, 0}, 1));
}

TEST_CASE("MLP graph edges") {
  const MlpGraph g = build_mlp_graph(3, {5}, 2);
  CHECK(g.edges().size() == 32);
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t v = g.node(2, i);
    const auto& in = g.in_neighbors(v);
    CHECK(in.size() == 6);
    for (std::size_t j = 0; j < 5; ++j) CHECK(in[j] == g.node(1, j));
    CHECK(in.back() == g.bias_node(2));
  }
  for (std::size_t t = 1; t <= 2; ++t) CHECK(g.in_neighbors(g.bias_node(t)).empty());
}

TEST_CASE("topological layers follow the staged updates") {
  const MlpGraph g = build_mlp_graph(2, {3, 3}, 1);
  const auto layers = topological_layers(g);
  REQUIRE(layers.size() == 4);
  CHECK(sorted(layers[0]) == sorted({g.node(0, 0), g.node(0, 1), g.bias_node(1)}));
  CHECK(sorted(layers[1]) == sorted({g.node(1, 0), g.node(1, 1), g.node(1, 2), g.bias_node(2)}));
  CHECK(sorted(layers[2]) == sorted({g.node(2, 0), g.node(2, 1), g.node(2, 2), g.bias_node(3)}));
  CHECK(layers[3] == std::vector<std::size_t>{g.node(3, 0)});

  const auto flat = topological_layers(build_mlp_graph(2, {}, 2));
  REQUIRE(flat.size() == 2);
  CHECK(flat[0].size() == 3);
  CHECK(flat[1].size() == 2);
}

TEST_CASE("topological layers partition the nodes") {
  for (const auto& widths : std::vector<std::vector<std::size_t>>{{}, {1}, {4, 2}, {3, 3, 3}}) {
    const MlpGraph g = build_mlp_graph(3, widths, 2);
    std::multiset<std::size_t> seen;
    for (const auto& layer : topological_layers(g)) seen.insert(layer.begin(), layer.end());
    CHECK(seen.size() == g.size());
    for (std::size_t v = 0; v < g.size(); ++v) CHECK(seen.count(v) == 1);
  }
}
