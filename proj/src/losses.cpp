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

#include "gnm/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gnm/errors.hpp"
#include "gnm/regularization.hpp"
#include "gnm/rng.hpp"

namespace gnm {

namespace {

void check_labels(const Matrix& outputs, std::span<const std::size_t> labels, std::size_t classes) {
  if (labels.size() != outputs.cols()) {
    throw ShapeError("loss: " + std::to_string(labels.size()) + " labels for " +
                     std::to_string(outputs.cols()) + " samples");
  }
  for (std::size_t y : labels) {
    if (y >= classes) throw std::out_of_range("loss: label " + std::to_string(y) + " out of range");
  }
}

// log(1 + exp(x)) without overflow.
double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

Vector softmax(const Vector& z) {
  Vector p(z.size());
  if (z.empty()) return p;
  const double peak = *std::max_element(z.begin(), z.end());
  double total = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    p[i] = std::exp(z[i] - peak);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

LossResult cross_entropy(const Matrix& outputs, std::span<const std::size_t> labels) {
  check_labels(outputs, labels, outputs.rows());
  const std::size_t c = outputs.rows();
  const std::size_t batch = outputs.cols();
  LossResult r{0.0, Matrix(c, batch)};
  if (batch == 0) return r;
  const double inv = 1.0 / static_cast<double>(batch);
  for (std::size_t s = 0; s < batch; ++s) {
    double peak = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < c; ++j) peak = std::max(peak, outputs(j, s));
    double total = 0.0;
    for (std::size_t j = 0; j < c; ++j) total += std::exp(outputs(j, s) - peak);
    const double log_norm = peak + std::log(total);
    r.value += log_norm - outputs(labels[s], s);
    for (std::size_t j = 0; j < c; ++j) {
      const double prob = std::exp(outputs(j, s) - log_norm);
      r.grad(j, s) = (prob - (j == labels[s] ? 1.0 : 0.0)) * inv;
    }
  }
  r.value *= inv;
  return r;
}

LossResult binary_cross_entropy(const Matrix& outputs, std::span<const std::size_t> labels) {
  if (outputs.rows() != 1) throw ShapeError("binary_cross_entropy: expects a single output row");
  check_labels(outputs, labels, 2);
  const std::size_t batch = outputs.cols();
  LossResult r{0.0, Matrix(1, batch)};
  if (batch == 0) return r;
  const double inv = 1.0 / static_cast<double>(batch);
  for (std::size_t s = 0; s < batch; ++s) {
    const double z = outputs(0, s);
    const double y = labels[s] == 1 ? 1.0 : 0.0;
    // -[y log sigma(z) + (1-y) log(1 - sigma(z))] = softplus(z) - y z
    r.value += softplus(z) - y * z;
    r.grad(0, s) = (sigmoid(z) - y) * inv;
  }
  r.value *= inv;
  return r;
}

LossResult mse_loss(const Matrix& outputs, const Matrix& targets) {
  if (outputs.rows() != targets.rows() || outputs.cols() != targets.cols()) {
    throw ShapeError("mse_loss: outputs and targets differ in shape");
  }
  const std::size_t batch = outputs.cols();
  LossResult r{0.0, Matrix(outputs.rows(), batch)};
  if (batch == 0) return r;
  const double inv = 1.0 / static_cast<double>(batch);
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const double diff = outputs.span()[i] - targets.span()[i];
    r.value += diff * diff;
    r.grad.span()[i] = 2.0 * diff * inv;
  }
  r.value *= inv;
  return r;
}

LossResult compute_loss(LossKind kind, const Matrix& outputs, const BatchTargets& targets) {
  switch (kind) {
    case LossKind::cross_entropy:
      return cross_entropy(outputs, targets.labels);
    case LossKind::binary_cross_entropy:
      return binary_cross_entropy(outputs, targets.labels);
    case LossKind::mse:
      return mse_loss(outputs, targets.values);
  }
  throw std::invalid_argument("compute_loss: unknown loss");
}

std::vector<std::size_t> predict_classes(LossKind kind, const Matrix& outputs) {
  std::vector<std::size_t> pred(outputs.cols());
  for (std::size_t s = 0; s < outputs.cols(); ++s) {
    if (kind == LossKind::binary_cross_entropy) {
      pred[s] = outputs(0, s) > 0.0 ? 1 : 0;
      continue;
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < outputs.rows(); ++j)
      if (outputs(j, s) > outputs(best, s)) best = j;
    pred[s] = best;
  }
  return pred;
}

L1Result l1_penalty(const AdjacencyTensor& a, double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("l1_penalty: lambda must be >= 0");
  L1Result r;
  const std::size_t n = a.node_count();
  const std::size_t bias = a.bias_index();
  for (const Matrix& m : a.steps) {
    Matrix g(n, n);
    if (lambda > 0.0) {
      for (std::size_t i = 0; i < n; ++i) {
        if (i == bias) continue;
        for (std::size_t j = 0; j < n; ++j) {
          const double v = m(i, j);
          r.value += std::abs(v);
          g(i, j) = v > 0.0 ? lambda : (v < 0.0 ? -lambda : 0.0);
        }
      }
    }
    r.subgradient.steps.push_back(std::move(g));
  }
  r.value *= lambda;
  return r;
}

double dropout_keep_scale(Rng& rng, double p) {
  if (!(p >= 0.0 && p < 1.0)) throw std::invalid_argument("dropout: p must lie in [0, 1)");
  if (p == 0.0) return 1.0;
  return rng.uniform() < p ? 0.0 : 1.0 / (1.0 - p);
}

Vector dropout_mask(Rng& rng, std::size_t len, double p, std::span<const std::size_t> keep) {
  Vector mask(len, 1.0);
  for (std::size_t i = 0; i < len; ++i) mask[i] = dropout_keep_scale(rng, p);
  for (std::size_t i : keep)
    if (i < len) mask[i] = 1.0;
  return mask;
}

}  // namespace gnm
