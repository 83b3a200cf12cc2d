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

#include "gnm/gnm_model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gnm/errors.hpp"
#include "gnm/regularization.hpp"
#include "gnm/rng.hpp"

namespace gnm {

double activate(Activation f, double z) {
  switch (f) {
    case Activation::relu:
      return z > 0.0 ? z : 0.0;
    case Activation::identity:
      return z;
  }
  throw std::invalid_argument("activate: unknown activation");
}

double activate_grad(Activation f, double z) {
  switch (f) {
    case Activation::relu:
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::identity:
      return 1.0;
  }
  throw std::invalid_argument("activate_grad: unknown activation");
}

void AdjacencyTensor::validate() const {
  const std::size_t n = node_count();
  if (layout.bias != 1) throw std::invalid_argument("AdjacencyTensor: exactly one bias node");
  const std::size_t b = bias_index();
  for (std::size_t k = 0; k < steps.size(); ++k) {
    const Matrix& m = steps[k];
    if (m.rows() != n || m.cols() != n) {
      throw ShapeError("AdjacencyTensor: step " + std::to_string(k + 1) + " is not " +
                       std::to_string(n) + "x" + std::to_string(n));
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (m(b, j) != (j == b ? 1.0 : 0.0)) {
        throw std::invalid_argument("AdjacencyTensor: bias row of step " + std::to_string(k + 1) +
                                    " is not the unit row");
      }
    }
    if (!all_finite(m.span())) {
      throw std::invalid_argument("AdjacencyTensor: non-finite weight at step " +
                                  std::to_string(k + 1));
    }
  }
}

Vector annotate_input(const GnmGraph& g, const Vector& x) {
  const NodePartition& p = g.partition();
  if (x.size() != p.inputs) {
    throw ShapeError("annotate_input: expected " + std::to_string(p.inputs) + " features, got " +
                     std::to_string(x.size()));
  }
  Vector h(p.total());
  for (std::size_t i = 0; i < x.size(); ++i) h[i] = x[i];
  h[g.bias_index()] = 1.0;
  return h;
}

Matrix annotate_batch(const NodePartition& layout, const Matrix& x) {
  if (x.rows() != layout.inputs) {
    throw ShapeError("annotate_batch: expected " + std::to_string(layout.inputs) +
                     " feature rows, got " + std::to_string(x.rows()));
  }
  Matrix h(layout.total(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto src = x.row(i);
    std::copy(src.begin(), src.end(), h.row(i).begin());
  }
  for (std::size_t b = layout.first_bias(); b < layout.first_output(); ++b) h.fill_row(b, 1.0);
  return h;
}

GnmTape gnm_forward_batch(const AdjacencyTensor& a, const Matrix& h0, Activation f,
                          const DropoutConfig* dropout) {
  const std::size_t n = a.node_count();
  const std::size_t steps = a.step_count();
  if (h0.rows() != n) {
    throw ShapeError("gnm_forward: state has " + std::to_string(h0.rows()) + " rows, graph has " +
                     std::to_string(n) + " nodes");
  }
  const std::size_t bias = a.bias_index();
  const std::size_t batch = h0.cols();
  const bool use_dropout = dropout && dropout->p > 0.0;
  if (use_dropout && !dropout->rng) throw std::invalid_argument("gnm_forward: dropout needs an rng");

  GnmTape tape;
  tape.pre.reserve(steps);
  tape.post.reserve(steps + 1);
  tape.post.push_back(h0);

  for (std::size_t k = 0; k < steps; ++k) {
    Matrix z = matmul(a.steps[k], tape.post.back());
    if (!all_finite(z.span())) {
      throw NumericError("gnm_forward: non-finite pre-activation at step " + std::to_string(k + 1),
                         k + 1);
    }
    const bool last = k + 1 == steps;
    Matrix h = z;
    if (!last) {
      for (double& v : h.span()) v = activate(f, v);
    }
    h.fill_row(bias, 1.0);
    if (use_dropout && !last) {
      Matrix mask(n, batch, 1.0);
      for (std::size_t c = 0; c < batch; ++c) {
        for (std::size_t v = a.layout.first_hidden(); v < n; ++v) {
          if (a.layout.is_bias(v)) continue;
          mask(v, c) = dropout_keep_scale(*dropout->rng, dropout->p);
        }
      }
      for (std::size_t i = 0; i < h.size(); ++i) h.span()[i] *= mask.span()[i];
      tape.masks.push_back(std::move(mask));
    }
    tape.pre.push_back(std::move(z));
    tape.post.push_back(std::move(h));
  }
  return tape;
}

GnmForwardResult gnm_forward(const AdjacencyTensor& a, const Vector& h0, Activation f) {
  if (h0.size() != a.node_count()) {
    throw ShapeError("gnm_forward: state length " + std::to_string(h0.size()) + " != " +
                     std::to_string(a.node_count()));
  }
  if (h0[a.bias_index()] != 1.0) throw std::invalid_argument("gnm_forward: bias coordinate must be 1");
  GnmForwardResult r;
  r.tape = gnm_forward_batch(a, Matrix::column(h0), f);
  r.outputs = gnm_outputs(a, r.tape).col(0);
  return r;
}

Matrix gnm_outputs(const AdjacencyTensor& a, const GnmTape& tape) {
  const Matrix& last = tape.post.back();
  const std::size_t c = a.layout.outputs;
  const std::size_t first = a.layout.first_output();
  Matrix out(c, last.cols());
  for (std::size_t j = 0; j < c; ++j) {
    const auto src = last.row(first + j);
    std::copy(src.begin(), src.end(), out.row(j).begin());
  }
  return out;
}

GradientSet gnm_backward(const AdjacencyTensor& a, const GnmTape& tape, Activation f,
                         const Matrix& d_outputs) {
  const std::size_t steps = a.step_count();
  if (tape.pre.size() != steps || tape.post.size() != steps + 1) {
    throw std::invalid_argument("gnm_backward: tape does not match the tensor's step count");
  }
  const std::size_t n = a.node_count();
  const std::size_t batch = tape.post[0].cols();
  if (d_outputs.rows() != a.layout.outputs || d_outputs.cols() != batch) {
    throw ShapeError("gnm_backward: upstream gradient has the wrong shape");
  }
  const std::size_t bias = a.bias_index();
  const bool has_masks = !tape.masks.empty();

  // delta = dL/dh(k), seeded on the output rows of the final state.
  Matrix delta(n, batch);
  for (std::size_t j = 0; j < a.layout.outputs; ++j) {
    const auto src = d_outputs.row(j);
    std::copy(src.begin(), src.end(), delta.row(a.layout.first_output() + j).begin());
  }

  GradientSet grads;
  grads.steps.resize(steps);
  for (std::size_t k = steps; k-- > 0;) {
    const bool last = k + 1 == steps;
    // delta becomes dL/dz(k) in place.
    if (!last) {
      const auto pre = tape.pre[k].span();
      auto d = delta.span();
      if (has_masks) {
        const auto mask = tape.masks[k].span();
        for (std::size_t i = 0; i < d.size(); ++i) d[i] *= mask[i] * activate_grad(f, pre[i]);
      } else {
        for (std::size_t i = 0; i < d.size(); ++i) d[i] *= activate_grad(f, pre[i]);
      }
    }
    delta.fill_row(bias, 0.0);
    grads.steps[k] = matmul_a_bt(delta, tape.post[k]);
    if (k > 0) {
      delta = matmul_at_b(a.steps[k], delta);
      delta.fill_row(bias, 0.0);
    }
  }
  return grads;
}

GradientSet gnm_backward(const AdjacencyTensor& a, const GnmTape& tape, Activation f,
                         const Vector& d_outputs) {
  return gnm_backward(a, tape, f, Matrix::column(d_outputs));
}

AdjacencyTensor init_gnm(const GnmGraph& g, std::size_t steps, Rng& rng) {
  if (steps == 0) throw std::invalid_argument("init_gnm: need at least one step");
  const std::size_t n = g.size();
  const double bound = 1.0 / std::sqrt(static_cast<double>(n));
  AdjacencyTensor a;
  a.layout = g.partition();
  a.steps.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (g.trainable(i, j)) m(i, j) = rng.uniform(-bound, bound);
    m(g.bias_index(), g.bias_index()) = 1.0;
    a.steps.push_back(std::move(m));
  }
  return a;
}

std::size_t gnm_parameter_count(std::size_t nodes, std::size_t steps) {
  return nodes == 0 ? 0 : steps * (nodes - 1) * nodes;
}

}  // namespace gnm
