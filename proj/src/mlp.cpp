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

#include "gnm/mlp.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "gnm/errors.hpp"
#include "gnm/regularization.hpp"
#include "gnm/rng.hpp"

namespace gnm {

std::size_t MlpSpec::parameter_count() const {
  std::size_t total = 0;
  for (std::size_t k = 0; k + 1 < widths.size(); ++k) total += (widths[k] + 1) * widths[k + 1];
  return total;
}

void MlpSpec::validate() const {
  if (widths.size() < 3) throw std::invalid_argument("MlpSpec: need at least two layers");
  for (std::size_t w : widths)
    if (w == 0) throw std::invalid_argument("MlpSpec: layer of width 0");
  const std::size_t k = layer_count();
  if (weights.size() != k || biases.size() != k) {
    throw ShapeError("MlpSpec: expected " + std::to_string(k) + " weight/bias pairs");
  }
  for (std::size_t t = 0; t < k; ++t) {
    if (weights[t].rows() != widths[t + 1] || weights[t].cols() != widths[t] ||
        biases[t].size() != widths[t + 1]) {
      throw ShapeError("MlpSpec: layer " + std::to_string(t + 1) + " has inconsistent shapes");
    }
  }
}

MlpSpec random_mlp_spec(const std::vector<std::size_t>& widths, Rng& rng) {
  MlpSpec spec = zero_mlp_spec(widths);
  for (std::size_t t = 0; t < spec.layer_count(); ++t) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(widths[t]));
    for (double& v : spec.weights[t].span()) v = rng.uniform(-bound, bound);
    for (double& v : spec.biases[t]) v = rng.uniform(-bound, bound);
  }
  return spec;
}

MlpSpec zero_mlp_spec(const std::vector<std::size_t>& widths) {
  MlpSpec spec;
  spec.widths = widths;
  for (std::size_t t = 0; t + 1 < widths.size(); ++t) {
    spec.weights.emplace_back(widths[t + 1], widths[t]);
    spec.biases.emplace_back(widths[t + 1]);
  }
  spec.validate();
  return spec;
}

Vector mlp_forward(const MlpSpec& spec, const Vector& x, Activation f) {
  if (x.size() != spec.input_count()) {
    throw ShapeError("mlp_forward: expected " + std::to_string(spec.input_count()) +
                     " features, got " + std::to_string(x.size()));
  }
  Vector h = x;
  const std::size_t k = spec.layer_count();
  for (std::size_t t = 0; t < k; ++t) {
    Vector z = matvec(spec.weights[t], h);
    for (std::size_t i = 0; i < z.size(); ++i) z[i] += spec.biases[t][i];
    if (t + 1 < k) {
      for (double& v : z) v = activate(f, v);
    }
    h = std::move(z);
  }
  return h;
}

MlpTape mlp_forward_batch(const MlpSpec& spec, const Matrix& x, Activation f,
                          const DropoutConfig* dropout) {
  if (x.rows() != spec.input_count()) {
    throw ShapeError("mlp_forward: expected " + std::to_string(spec.input_count()) +
                     " feature rows, got " + std::to_string(x.rows()));
  }
  const bool use_dropout = dropout && dropout->p > 0.0;
  if (use_dropout && !dropout->rng) throw std::invalid_argument("mlp_forward: dropout needs an rng");
  const std::size_t k = spec.layer_count();
  MlpTape tape;
  tape.post.push_back(x);
  for (std::size_t t = 0; t < k; ++t) {
    Matrix z = matmul(spec.weights[t], tape.post.back());
    for (std::size_t i = 0; i < z.rows(); ++i) {
      const double b = spec.biases[t][i];
      for (double& v : z.row(i)) v += b;
    }
    if (!all_finite(z.span())) {
      throw NumericError("mlp_forward: non-finite pre-activation at layer " + std::to_string(t + 1),
                         t + 1);
    }
    Matrix h = z;
    if (t + 1 < k) {
      for (double& v : h.span()) v = activate(f, v);
      if (use_dropout) {
        Matrix mask(h.rows(), h.cols());
        for (double& m : mask.span()) m = dropout_keep_scale(*dropout->rng, dropout->p);
        for (std::size_t i = 0; i < h.size(); ++i) h.span()[i] *= mask.span()[i];
        tape.masks.push_back(std::move(mask));
      }
    }
    tape.pre.push_back(std::move(z));
    tape.post.push_back(std::move(h));
  }
  return tape;
}

MlpGradients mlp_backward(const MlpSpec& spec, const MlpTape& tape, Activation f,
                          const Matrix& d_outputs) {
  const std::size_t k = spec.layer_count();
  if (tape.pre.size() != k) throw std::invalid_argument("mlp_backward: tape/layer mismatch");
  if (d_outputs.rows() != spec.output_count() || d_outputs.cols() != tape.post[0].cols()) {
    throw ShapeError("mlp_backward: upstream gradient has the wrong shape");
  }
  MlpGradients g;
  g.weights.resize(k);
  g.biases.resize(k);
  Matrix delta = d_outputs;
  for (std::size_t t = k; t-- > 0;) {
    if (t + 1 < k) {
      const auto pre = tape.pre[t].span();
      auto d = delta.span();
      for (std::size_t i = 0; i < d.size(); ++i) {
        double scale = activate_grad(f, pre[i]);
        if (!tape.masks.empty()) scale *= tape.masks[t].span()[i];
        d[i] *= scale;
      }
    }
    g.weights[t] = matmul_a_bt(delta, tape.post[t]);
    Vector db(delta.rows());
    for (std::size_t i = 0; i < delta.rows(); ++i) {
      const auto r = delta.row(i);
      db[i] = std::accumulate(r.begin(), r.end(), 0.0);
    }
    g.biases[t] = std::move(db);
    if (t > 0) delta = matmul_at_b(spec.weights[t], delta);
  }
  return g;
}

EdgeWeights transcribe_weights(const MlpGraph& g, const MlpSpec& spec) {
  spec.validate();
  if (g.widths() != spec.widths) throw ShapeError("transcribe_weights: graph/spec widths differ");
  EdgeWeights w;
  for (std::size_t t = 1; t <= spec.layer_count(); ++t) {
    for (std::size_t i = 0; i < spec.widths[t]; ++i) {
      const std::size_t v = g.node(t, i);
      for (std::size_t j = 0; j < spec.widths[t - 1]; ++j) {
        w[{g.node(t - 1, j), v}] = spec.weights[t - 1](i, j);
      }
      w[{g.bias_node(t), v}] = spec.biases[t - 1][i];
    }
  }
  return w;
}

Vector gnn_mlp_forward(const MlpGraph& g, const EdgeWeights& w, const Vector& x, Activation f) {
  return gnn_mlp_forward(g, w, x, f, topological_layers(g));
}

Vector gnn_mlp_forward(const MlpGraph& g, const EdgeWeights& w, const Vector& x, Activation f,
                       const std::vector<std::vector<std::size_t>>& schedule) {
  const NodePartition& p = g.partition();
  if (x.size() != p.inputs) {
    throw ShapeError("gnn_mlp_forward: expected " + std::to_string(p.inputs) + " features");
  }
  if (w.size() != g.edges().size()) {
    throw std::invalid_argument("gnn_mlp_forward: weights cover " + std::to_string(w.size()) +
                                " of " + std::to_string(g.edges().size()) + " edges");
  }
  // Initial annotation: inputs = x, bias nodes = 1, the rest 0.
  std::vector<double> h(g.size(), 0.0);
  for (std::size_t i = 0; i < p.inputs; ++i) h[i] = x[i];
  for (std::size_t b = p.first_bias(); b < p.first_output(); ++b) h[b] = 1.0;

  for (const auto& stage : schedule) {
    for (std::size_t v : stage) {
      const auto& in = g.in_neighbors(v);
      if (in.empty()) continue;
      double acc = 0.0;
      for (std::size_t u : in) {
        const auto it = w.find({u, v});
        if (it == w.end()) {
          throw std::invalid_argument("gnn_mlp_forward: missing weight for edge " +
                                      std::to_string(u) + "->" + std::to_string(v));
        }
        acc += it->second * h[u];
      }
      h[v] = p.is_output(v) ? acc : activate(f, acc);
    }
  }
  Vector out(p.outputs);
  for (std::size_t j = 0; j < p.outputs; ++j) out[j] = h[p.first_output() + j];
  return out;
}

std::size_t embedded_node(const MlpSpec& spec, std::size_t layer, std::size_t i) {
  const std::size_t k = spec.layer_count();
  if (layer == 0) return i;
  std::size_t offset = spec.widths[0];
  for (std::size_t t = 1; t < layer && t < k; ++t) offset += spec.widths[t];
  if (layer < k) return offset + i;
  // Outputs come after every hidden neuron and the bias node.
  std::size_t hidden = 0;
  for (std::size_t t = 1; t < k; ++t) hidden += spec.widths[t];
  return spec.widths[0] + hidden + 1 + i;
}

EmbeddedMlp embed_mlp(const MlpSpec& spec) {
  spec.validate();
  const std::size_t k = spec.layer_count();
  std::size_t hidden = 0;
  for (std::size_t t = 1; t < k; ++t) hidden += spec.widths[t];

  EmbeddedMlp e;
  e.graph = build_gnm_graph(spec.input_count(), hidden, spec.output_count());
  const std::size_t n = e.graph.size();
  const std::size_t bias = e.graph.bias_index();
  e.adjacency.layout = e.graph.partition();
  for (std::size_t t = 1; t <= k; ++t) {
    Matrix a(n, n);
    for (std::size_t i = 0; i < spec.widths[t]; ++i) {
      const std::size_t row = embedded_node(spec, t, i);
      for (std::size_t j = 0; j < spec.widths[t - 1]; ++j) {
        a(row, embedded_node(spec, t - 1, j)) = spec.weights[t - 1](i, j);
      }
      a(row, bias) = spec.biases[t - 1][i];
    }
    a(bias, bias) = 1.0;
    e.adjacency.steps.push_back(std::move(a));
  }
  return e;
}

}  // namespace gnm
