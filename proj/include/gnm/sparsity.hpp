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
#include <string>
#include <vector>

#include "gnm/gnm_model.hpp"
#include "gnm/graph.hpp"
#include "gnm/linalg.hpp"

namespace gnm {

// Compressed sparse row storage.
struct SparseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> offsets;  // rows + 1 entries
  std::vector<std::size_t> indices;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }
  Matrix to_dense() const;
  bool operator==(const SparseMatrix&) const = default;
};

SparseMatrix to_sparse(const Matrix& a);

// Accumulates each row left to right, like matvec, so results agree with
// the dense product up to the sign of zero.
Vector sparse_matvec(const SparseMatrix& s, const Vector& x);

struct SparseAdjacency {
  NodePartition layout;
  std::vector<SparseMatrix> steps;
};

SparseAdjacency to_sparse(const AdjacencyTensor& a);

// Same recurrence as gnm_forward with sparse steps; returns the outputs.
Vector sparse_gnm_forward(const SparseAdjacency& a, const Vector& h0, Activation f);

// Zeroes trainable entries with |a| < tau. The bias row is left alone.
AdjacencyTensor prune(const AdjacencyTensor& a, double tau);

std::size_t nonzero_count(const AdjacencyTensor& a);

struct StructureReport {
  // Nonzero trainable entries per step as (source, target) pairs, sorted.
  std::vector<std::vector<Edge>> positions;
  // Edges on some input-to-output path through the steps in order.
  std::vector<std::vector<Edge>> live_edges;
  // Targets of live edges at each step; layers[k] belongs to step k + 1.
  std::vector<std::vector<std::size_t>> layers;
  std::vector<bool> live;  // per node, the bias included when it feeds a live edge
  std::size_t live_hidden = 0;
  bool layered = false;
  std::vector<std::size_t> widths;  // hidden widths when layered
  std::vector<std::size_t> bias_steps;  // steps whose live edges leave the bias

  std::size_t nnz() const;
  std::string to_text() const;
};

StructureReport extract_structure(const AdjacencyTensor& a);

}  // namespace gnm
