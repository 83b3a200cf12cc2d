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


#include "gnm/sparsity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "gnm/errors.hpp"

namespace gnm {

Matrix SparseMatrix::to_dense() const {
  Matrix a(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) a(i, indices[p]) = values[p];
  return a;
}

SparseMatrix to_sparse(const Matrix& a) {
  SparseMatrix s;
  s.rows = a.rows();
  s.cols = a.cols();
  s.offsets.reserve(a.rows() + 1);
  s.offsets.push_back(0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto row = a.row(i);
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j] != 0.0) {
        s.indices.push_back(j);
        s.values.push_back(row[j]);
      }
    }
    s.offsets.push_back(s.values.size());
  }
  return s;
}

Vector sparse_matvec(const SparseMatrix& s, const Vector& x) {
  if (s.cols != x.size()) {
    throw ShapeError("sparse_matvec: " + std::to_string(s.rows) + "x" + std::to_string(s.cols) +
                     " times vector of length " + std::to_string(x.size()));
  }
  Vector y(s.rows);
  for (std::size_t i = 0; i < s.rows; ++i) {
    double acc = 0.0;
    for (std::size_t p = s.offsets[i]; p < s.offsets[i + 1]; ++p) acc += s.values[p] * x[s.indices[p]];
    y[i] = acc;
  }
  return y;
}

SparseAdjacency to_sparse(const AdjacencyTensor& a) {
  SparseAdjacency s;
  s.layout = a.layout;
  for (const Matrix& m : a.steps) s.steps.push_back(to_sparse(m));
  return s;
}

Vector sparse_gnm_forward(const SparseAdjacency& a, const Vector& h0, Activation f) {
  const std::size_t n = a.layout.total();
  if (h0.size() != n) throw ShapeError("sparse_gnm_forward: state length does not match graph");
  const std::size_t bias = a.layout.first_bias();
  Vector h = h0;
  for (std::size_t k = 0; k < a.steps.size(); ++k) {
    Vector z = sparse_matvec(a.steps[k], h);
    if (!all_finite(z.span())) {
      throw NumericError("sparse_gnm_forward: non-finite pre-activation at step " +
                             std::to_string(k + 1),
                         k + 1);
    }
    if (k + 1 < a.steps.size()) {
      for (double& v : z) v = activate(f, v);
    }
    z[bias] = 1.0;
    h = std::move(z);
  }
  const std::size_t c = a.layout.outputs;
  Vector out(c);
  for (std::size_t j = 0; j < c; ++j) out[j] = h[n - c + j];
  return out;
}

AdjacencyTensor prune(const AdjacencyTensor& a, double tau) {
  if (!(tau >= 0.0)) throw std::invalid_argument("prune: threshold must be >= 0");
  AdjacencyTensor out = a;
  const std::size_t bias = a.bias_index();
  for (Matrix& m : out.steps) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == bias) continue;
      for (double& v : m.row(i)) {
        if (std::abs(v) < tau) v = 0.0;
      }
    }
  }
  return out;
}

std::size_t nonzero_count(const AdjacencyTensor& a) {
  std::size_t count = 0;
  const std::size_t bias = a.bias_index();
  for (const Matrix& m : a.steps)
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == bias) continue;
      for (double v : m.row(i)) count += v != 0.0;
    }
  return count;
}

std::size_t StructureReport::nnz() const {
  std::size_t total = 0;
  for (const auto& step : positions) total += step.size();
  return total;
}

StructureReport extract_structure(const AdjacencyTensor& a) {
  const std::size_t n = a.node_count();
  const std::size_t steps = a.step_count();
  const std::size_t bias = a.bias_index();
  const NodePartition& part = a.layout;

  StructureReport r;
  r.positions.resize(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    const Matrix& m = a.steps[k];
    for (std::size_t i = 0; i < n; ++i) {
      if (i == bias) continue;
      for (std::size_t j = 0; j < n; ++j)
        if (m(i, j) != 0.0) r.positions[k].push_back({j, i});
    }
    std::sort(r.positions[k].begin(), r.positions[k].end());
  }

  // active[k]: nodes carrying a signal after step k; needed[k]: nodes whose
  // value after step k reaches an output.
  std::vector<std::vector<bool>> active(steps + 1, std::vector<bool>(n, false));
  for (std::size_t v = 0; v < part.inputs; ++v) active[0][v] = true;
  for (std::size_t k = 0; k <= steps; ++k) active[k][bias] = true;
  for (std::size_t k = 1; k <= steps; ++k)
    for (const Edge& e : r.positions[k - 1])
      if (active[k - 1][e.from]) active[k][e.to] = true;

  std::vector<std::vector<bool>> needed(steps + 1, std::vector<bool>(n, false));
  for (std::size_t v = part.first_output(); v < n; ++v) needed[steps][v] = true;
  for (std::size_t k = steps; k >= 1; --k)
    for (const Edge& e : r.positions[k - 1])
      if (needed[k][e.to]) needed[k - 1][e.from] = true;

  r.live_edges.resize(steps);
  r.layers.resize(steps);
  r.live.assign(n, false);
  for (std::size_t k = 1; k <= steps; ++k) {
    bool from_bias = false;
    for (const Edge& e : r.positions[k - 1]) {
      if (!active[k - 1][e.from] || !needed[k][e.to]) continue;
      r.live_edges[k - 1].push_back(e);
      r.layers[k - 1].push_back(e.to);
      r.live[e.from] = r.live[e.to] = true;
      from_bias = from_bias || e.from == bias;
    }
    auto& layer = r.layers[k - 1];
    std::sort(layer.begin(), layer.end());
    layer.erase(std::unique(layer.begin(), layer.end()), layer.end());
    if (from_bias) r.bias_steps.push_back(k);
  }
  for (std::size_t v = part.first_hidden(); v < part.first_bias(); ++v) r.live_hidden += r.live[v];

  // Layered: no node computes at two different depths, so each step acts
  // as one MLP layer.
  std::vector<std::size_t> depth_of(n, 0);
  r.layered = steps > 0;
  for (std::size_t k = 1; k <= steps && r.layered; ++k) {
    for (std::size_t v : r.layers[k - 1]) {
      if (depth_of[v] != 0) {
        r.layered = false;
        break;
      }
      depth_of[v] = k;
    }
  }
  if (r.layered) {
    for (std::size_t k = 1; k < steps; ++k) r.widths.push_back(r.layers[k - 1].size());
  }
  return r;
}

std::string StructureReport::to_text() const {
  std::ostringstream out;
  for (std::size_t k = 0; k < positions.size(); ++k) {
    out << k + 1 << ':';
    for (const Edge& e : positions[k]) out << " (" << e.from << ',' << e.to << ')';
    out << '\n';
  }
  out << "live:";
  for (std::size_t v = 0; v < live.size(); ++v)
    if (live[v]) out << ' ' << v;
  out << '\n';
  out << "live_hidden: " << live_hidden << '\n';
  out << "layered: " << (layered ? "yes" : "no");
  if (layered) {
    out << " widths:";
    for (std::size_t w : widths) out << ' ' << w;
  }
  out << '\n';
  out << "bias_steps:";
  for (std::size_t k : bias_steps) out << ' ' << k;
  out << '\n';
  return out.str();
}

}  // namespace gnm
