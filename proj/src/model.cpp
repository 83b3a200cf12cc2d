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

#include "gnm/model.hpp"

#include <stdexcept>
#include <string>

#include "gnm/rng.hpp"

namespace gnm {

namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

std::vector<std::size_t> mlp_widths(const ModelConfig& cfg, std::size_t inputs,
                                    std::size_t outputs) {
  if (cfg.layers < 2) throw std::invalid_argument("MLP needs at least 2 layers");
  std::vector<std::size_t> hidden = cfg.hidden;
  if (hidden.size() == 1 && cfg.layers > 2) hidden.assign(cfg.layers - 1, hidden.front());
  if (hidden.size() != cfg.layers - 1) {
    throw std::invalid_argument("MLP with " + std::to_string(cfg.layers) + " layers needs " +
                                std::to_string(cfg.layers - 1) + " hidden widths");
  }
  std::vector<std::size_t> widths{inputs};
  widths.insert(widths.end(), hidden.begin(), hidden.end());
  widths.push_back(outputs);
  return widths;
}

}  // namespace

Model build_model(const ModelConfig& cfg, std::size_t inputs, std::size_t outputs, Rng& rng) {
  if (cfg.kind == ModelKind::gnm) {
    if (cfg.layers < 1) throw std::invalid_argument("GNM needs at least one step");
    if (cfg.nodes < inputs + outputs + 1) {
      throw std::invalid_argument("GNM with " + std::to_string(inputs) + " inputs and " +
                                  std::to_string(outputs) + " outputs needs at least " +
                                  std::to_string(inputs + outputs + 1) + " nodes");
    }
    const GnmGraph g = build_gnm_graph(inputs, cfg.nodes - inputs - outputs - 1, outputs);
    return GnmModel{init_gnm(g, cfg.layers, rng), cfg.activation};
  }
  return MlpModel{random_mlp_spec(mlp_widths(cfg, inputs, outputs), rng), cfg.activation};
}

std::size_t gnm_nodes_for_budget(std::size_t budget, std::size_t layers, std::size_t inputs,
                                 std::size_t outputs) {
  std::size_t n = inputs + outputs + 1;
  if (gnm_parameter_count(n, layers) > budget) return 0;
  while (gnm_parameter_count(n + 1, layers) <= budget) ++n;
  return n;
}

std::size_t mlp_width_for_budget(std::size_t budget, std::size_t layers, std::size_t inputs,
                                 std::size_t outputs) {
  auto count = [&](std::size_t h) {
    ModelConfig cfg;
    cfg.kind = ModelKind::mlp;
    cfg.layers = layers;
    cfg.hidden = {h};
    return zero_mlp_spec(mlp_widths(cfg, inputs, outputs)).parameter_count();
  };
  if (count(1) > budget) return 0;
  std::size_t h = 1;
  while (count(h + 1) <= budget) ++h;
  return h;
}

ModelKind kind_of(const Model& m) {
  return std::holds_alternative<GnmModel>(m) ? ModelKind::gnm : ModelKind::mlp;
}

std::size_t input_count(const Model& m) {
  return std::visit(overloaded{[](const GnmModel& g) { return g.adjacency.layout.inputs; },
                               [](const MlpModel& p) { return p.spec.input_count(); }},
                    m);
}

std::size_t output_count(const Model& m) {
  return std::visit(overloaded{[](const GnmModel& g) { return g.adjacency.layout.outputs; },
                               [](const MlpModel& p) { return p.spec.output_count(); }},
                    m);
}

std::size_t parameter_count(const Model& m) {
  return std::visit(overloaded{[](const GnmModel& g) {
                                 return gnm_parameter_count(g.adjacency.node_count(),
                                                            g.adjacency.step_count());
                               },
                               [](const MlpModel& p) { return p.spec.parameter_count(); }},
                    m);
}

Activation activation_of(const Model& m) {
  return std::visit([](const auto& v) { return v.activation; }, m);
}

Matrix predict(const Model& m, const Matrix& x) {
  return std::visit(
      overloaded{[&](const GnmModel& g) {
                   const GnmTape tape = gnm_forward_batch(
                       g.adjacency, annotate_batch(g.adjacency.layout, x), g.activation);
                   return gnm_outputs(g.adjacency, tape);
                 },
                 [&](const MlpModel& p) {
                   MlpTape tape = mlp_forward_batch(p.spec, x, p.activation);
                   return std::move(tape.post.back());
                 }},
      m);
}

}  // namespace gnm
