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

#include "gnm/optim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gnm/errors.hpp"

namespace gnm {

void adam_step(std::span<const ParameterBlock> blocks, AdamState& state, double lr) {
  if (state.first.empty()) {
    state.first.resize(blocks.size());
    state.second.resize(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      state.first[b].assign(blocks[b].values.size(), 0.0);
      state.second[b].assign(blocks[b].values.size(), 0.0);
    }
  }
  if (state.first.size() != blocks.size()) throw ShapeError("adam_step: block count changed");

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correct1 = 1.0 - std::pow(state.beta1, t);
  const double correct2 = 1.0 - std::pow(state.beta2, t);

  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const ParameterBlock& blk = blocks[b];
    if (blk.grad.size() != blk.values.size() || state.first[b].size() != blk.values.size()) {
      throw ShapeError("adam_step: block " + std::to_string(b) + " changed size");
    }
    auto& m = state.first[b];
    auto& v = state.second[b];
    for (std::size_t i = 0; i < blk.values.size(); ++i) {
      if (i >= blk.frozen_begin && i < blk.frozen_end) continue;
      const double g = blk.grad[i];
      m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g;
      v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g * g;
      const double m_hat = m[i] / correct1;
      const double v_hat = v[i] / correct2;
      blk.values[i] -= lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
  }
}

void adam_step(AdjacencyTensor& a, const GradientSet& g, AdamState& state, double lr) {
  if (g.steps.size() != a.steps.size()) throw ShapeError("adam_step: gradient/tensor step mismatch");
  const std::size_t n = a.node_count();
  const std::size_t bias = a.bias_index();
  std::vector<ParameterBlock> blocks;
  for (std::size_t k = 0; k < a.steps.size(); ++k) {
    if (g.steps[k].rows() != n || g.steps[k].cols() != n) {
      throw ShapeError("adam_step: gradient of step " + std::to_string(k + 1) + " has wrong shape");
    }
    blocks.push_back({a.steps[k].span(), g.steps[k].span(), bias * n, (bias + 1) * n});
  }
  adam_step(blocks, state, lr);
}

}  // namespace gnm
