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

#include <cmath>
#include <limits>

#include "gnm/mlp.hpp"
#include "gnm/rng.hpp"
#include "gnm/sparsity.hpp"

using namespace gnm;

namespace {

AdjacencyTensor random_tensor(std::size_t m, std::size_t hidden, std::size_t c, std::size_t k,
                              Rng& rng) {
  return init_gnm(build_gnm_graph(m, hidden, c), k, rng);
}

// Five nodes: input 0, hidden 1 and 2, bias 3, output 4.
AdjacencyTensor five_node(std::size_t steps) {
  AdjacencyTensor a;
  a.layout = {1, 2, 1, 1};
  for (std::size_t k = 0; k < steps; ++k) {
    Matrix s(5, 5);
    s(3, 3) = 1.0;
    a.steps.push_back(s);
  }
  return a;
}

}  // namespace

TEST_CASE("csr round trip") {
  const Matrix a{{0, 1.5, 0}, {0, 0, 0}, {-2, 0, 3}};
  const SparseMatrix s = to_sparse(a);
  CHECK(s.nnz() == 3);
  CHECK(s.offsets == std::vector<std::size_t>{0, 1, 1, 3});
  CHECK(s.indices == std::vector<std::size_t>{1, 0, 2});
  CHECK(s.to_dense() == a);
  CHECK(sparse_matvec(s, Vector{1, 2, 3}) == Vector{3, 0, 7});

  const SparseMatrix id = to_sparse(Matrix::identity(6));
  CHECK(id.nnz() == 6);
  const SparseMatrix empty = to_sparse(Matrix(4, 4));
  CHECK(empty.nnz() == 0);
  CHECK(sparse_matvec(empty, Vector(4, 1.0)) == Vector(4, 0.0));
}

TEST_CASE("sparse matvec agrees with dense on 90 percent sparse matrices") {
  Rng rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t rows = 1 + rng.below(40);
    const std::size_t cols = 1 + rng.below(40);
    Matrix a(rows, cols);
    for (double& v : a.span()) v = rng.uniform(0, 1) < 0.1 ? rng.uniform(-3, 3) : 0.0;
    Vector x(cols);
    for (double& v : x) v = rng.uniform(-2, 2);
    const Vector dense = matvec(a, x);
    const Vector sparse = sparse_matvec(to_sparse(a), x);
    for (std::size_t i = 0; i < rows; ++i) CHECK(std::abs(dense[i] - sparse[i]) <= 1e-12);
  }
}

TEST_CASE("prune thresholds") {
  Rng rng(2);
  const AdjacencyTensor a = random_tensor(3, 10, 2, 2, rng);
  CHECK(prune(a, 0.0) == a);
  const AdjacencyTensor all = prune(a, std::numeric_limits<double>::infinity());
  CHECK(nonzero_count(all) == 0);
  for (const Matrix& s : all.steps) {
    CHECK(s(a.bias_index(), a.bias_index()) == 1.0);
  }
  CHECK_NOTHROW(all.validate());
  const AdjacencyTensor once = prune(a, 0.1);
  CHECK(prune(once, 0.1) == once);
  std::size_t last = nonzero_count(a);
  for (double tau = 0.0; tau < 0.5; tau += 0.02) {
    const std::size_t nnz = nonzero_count(prune(a, tau));
    CHECK(nnz <= last);
    last = nnz;
  }
  CHECK_THROWS(prune(a, -1.0));
}

TEST_CASE("prune keeps entries at the threshold") {
  AdjacencyTensor a = five_node(1);
  a.steps[0](4, 0) = 0.5;
  a.steps[0](4, 1) = -0.25;
  const AdjacencyTensor p = prune(a, 0.5);
  CHECK(p.steps[0](4, 0) == 0.5);
  CHECK(p.steps[0](4, 1) == 0.0);
  CHECK(nonzero_count(p) == 1);
}

TEST_CASE("sparse forward matches dense on pruned models") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const GnmGraph g = build_gnm_graph(1 + rng.below(5), rng.below(30), 1 + rng.below(4));
    const AdjacencyTensor dense = init_gnm(g, 1 + rng.below(4), rng);
    const AdjacencyTensor pruned = prune(dense, 0.9 / std::sqrt(static_cast<double>(g.size())));
    const SparseAdjacency sparse = to_sparse(pruned);
    for (int s = 0; s < 10; ++s) {
      Vector x(g.partition().inputs);
      for (double& v : x) v = rng.uniform(-2, 2);
      const Vector h0 = annotate_input(g, x);
      const Vector ref = gnm_forward(pruned, h0, Activation::relu).outputs;
      const Vector got = sparse_gnm_forward(sparse, h0, Activation::relu);
      REQUIRE(got.size() == ref.size());
      for (std::size_t j = 0; j < ref.size(); ++j) CHECK(std::abs(got[j] - ref[j]) <= 1e-12);
    }
  }
}

TEST_CASE("structure of a hand-built tensor") {
  AdjacencyTensor a = five_node(2);
  a.steps[0](1, 0) = 0.5;
  a.steps[0](1, 3) = 0.2;
  a.steps[0](2, 1) = 0.3;
  a.steps[1](4, 1) = 1.5;
  a.steps[1](2, 0) = 0.7;
  const StructureReport r = extract_structure(a);
  CHECK(r.nnz() == 5);
  CHECK(r.positions[0] == std::vector<Edge>{{0, 1}, {1, 2}, {3, 1}});
  CHECK(r.live_edges[0] == std::vector<Edge>{{0, 1}, {3, 1}});
  CHECK(r.live_edges[1] == std::vector<Edge>{{1, 4}});
  CHECK(r.live_hidden == 1);
  CHECK(r.layered);
  CHECK(r.widths == std::vector<std::size_t>{1});
  CHECK(r.bias_steps == std::vector<std::size_t>{1});
  CHECK(r.to_text() ==
        "1: (0,1) (1,2) (3,1)\n"
        "2: (0,2) (1,4)\n"
        "live: 0 1 3 4\n"
        "live_hidden: 1\n"
        "layered: yes widths: 1\n"
        "bias_steps: 1\n");
}

TEST_CASE("a node reused across steps is not layered") {
  AdjacencyTensor a = five_node(3);
  a.steps[0](1, 0) = 1.0;
  a.steps[1](2, 1) = 1.0;
  a.steps[1](1, 3) = 1.0;
  a.steps[2](4, 2) = 1.0;
  a.steps[2](4, 1) = 1.0;
  const StructureReport r = extract_structure(a);
  CHECK(r.live_hidden == 2);
  CHECK_FALSE(r.layered);
  CHECK(r.widths.empty());
  CHECK(r.layers[0] == std::vector<std::size_t>{1});
  CHECK(r.layers[1] == std::vector<std::size_t>{1, 2});
  CHECK(r.bias_steps == std::vector<std::size_t>{2});
}

TEST_CASE("embedded MLPs are recovered as layered structures") {
  Rng rng(4);
  for (const std::vector<std::size_t>& widths :
       {std::vector<std::size_t>{2, 3, 1}, {3, 4, 5, 2}, {1, 6, 2, 3, 1}}) {
    const EmbeddedMlp e = embed_mlp(random_mlp_spec(widths, rng));
    const StructureReport r = extract_structure(e.adjacency);
    CHECK(r.layered);
    const std::vector<std::size_t> hidden(widths.begin() + 1, widths.end() - 1);
    CHECK(r.widths == hidden);
    std::size_t total = 0;
    for (std::size_t w : hidden) total += w;
    CHECK(r.live_hidden == total);
    CHECK(r.bias_steps.size() == widths.size() - 1);
  }
}

TEST_CASE("dense tensors are fully live") {
  Rng rng(5);
  const AdjacencyTensor a = random_tensor(2, 6, 1, 2, rng);
  const StructureReport r = extract_structure(a);
  CHECK(r.live_hidden == 6);
  CHECK_FALSE(r.layered);
}
