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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "gnm/errors.hpp"
#include "gnm/optim.hpp"
#include "gnm/regularization.hpp"
#include "gnm/rng.hpp"
#include "gnm/train.hpp"

namespace gnm {

namespace {

constexpr std::size_t kEvalChunk = 1024;

struct FrozenRange {
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::vector<FrozenRange> frozen_ranges(const Model& model) {
  if (const auto* g = std::get_if<GnmModel>(&model)) {
    const std::size_t n = g->adjacency.node_count();
    const std::size_t b = g->adjacency.bias_index();
    return std::vector<FrozenRange>(g->adjacency.step_count(), {b * n, (b + 1) * n});
  }
  const auto& p = std::get<MlpModel>(model);
  return std::vector<FrozenRange>(2 * p.spec.layer_count());
}

void add_l1(std::span<const double> values, std::vector<double>& grad, FrozenRange frozen,
            double lambda, double& penalty) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i >= frozen.begin && i < frozen.end) continue;
    const double v = values[i];
    penalty += lambda * std::abs(v);
    if (v > 0.0) grad[i] += lambda;
    if (v < 0.0) grad[i] -= lambda;
  }
}

std::vector<double> to_flat(std::span<const double> s) { return {s.begin(), s.end()}; }

}  // namespace

void TrainConfig::validate() const {
  if (batch_size == 0) throw std::invalid_argument("TrainConfig: batch size must be positive");
  if (!(lr >= 0.0)) throw std::invalid_argument("TrainConfig: learning rate must be >= 0");
  if (!(l1_lambda >= 0.0)) throw std::invalid_argument("TrainConfig: l1 lambda must be >= 0");
  if (!(dropout >= 0.0 && dropout < 1.0)) {
    throw std::invalid_argument("TrainConfig: dropout must lie in [0, 1)");
  }
}

std::string TrainHistory::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "epoch,train_loss,val_loss,ms\n";
  for (const EpochRecord& r : epochs) {
    out << r.epoch << ',' << r.train_loss << ',' << r.val_loss << ',' << r.ms << '\n';
  }
  return out.str();
}

Matrix gather_features(const Dataset& ds, std::span<const std::size_t> rows) {
  Matrix x(ds.feature_count(), rows.size());
  for (std::size_t s = 0; s < rows.size(); ++s) {
    const auto src = ds.features.row(rows[s]);
    for (std::size_t f = 0; f < src.size(); ++f) x(f, s) = src[f];
  }
  return x;
}

BatchTargets gather_targets(const Dataset& ds, std::span<const std::size_t> rows) {
  BatchTargets t;
  if (ds.task == TaskKind::classification) {
    t.labels.reserve(rows.size());
    for (std::size_t r : rows) t.labels.push_back(ds.labels[r]);
  } else {
    t.values = Matrix(ds.targets.cols(), rows.size());
    for (std::size_t s = 0; s < rows.size(); ++s)
      for (std::size_t j = 0; j < ds.targets.cols(); ++j) t.values(j, s) = ds.targets(rows[s], j);
  }
  return t;
}

std::vector<std::span<double>> parameter_blocks(Model& model) {
  std::vector<std::span<double>> blocks;
  if (auto* g = std::get_if<GnmModel>(&model)) {
    for (Matrix& m : g->adjacency.steps) blocks.push_back(m.span());
    return blocks;
  }
  auto& p = std::get<MlpModel>(model);
  for (std::size_t t = 0; t < p.spec.layer_count(); ++t) {
    blocks.push_back(p.spec.weights[t].span());
    blocks.push_back(p.spec.biases[t].span());
  }
  return blocks;
}

Objective evaluate_objective(const Model& model, const Matrix& x, const BatchTargets& targets,
                             LossKind loss, double l1_lambda, const DropoutConfig* dropout) {
  Objective obj;
  std::vector<std::span<const double>> values;
  if (const auto* g = std::get_if<GnmModel>(&model)) {
    const GnmTape tape = gnm_forward_batch(g->adjacency, annotate_batch(g->adjacency.layout, x),
                                           g->activation, dropout);
    const LossResult lr = compute_loss(loss, gnm_outputs(g->adjacency, tape), targets);
    obj.data_loss = lr.value;
    GradientSet grads = gnm_backward(g->adjacency, tape, g->activation, lr.grad);
    for (std::size_t k = 0; k < grads.steps.size(); ++k) {
      obj.grads.push_back(to_flat(grads.steps[k].span()));
      values.push_back(g->adjacency.steps[k].span());
    }
  } else {
    const auto& p = std::get<MlpModel>(model);
    const MlpTape tape = mlp_forward_batch(p.spec, x, p.activation, dropout);
    const LossResult lr = compute_loss(loss, tape.post.back(), targets);
    obj.data_loss = lr.value;
    const MlpGradients grads = mlp_backward(p.spec, tape, p.activation, lr.grad);
    for (std::size_t t = 0; t < p.spec.layer_count(); ++t) {
      obj.grads.push_back(to_flat(grads.weights[t].span()));
      obj.grads.push_back(to_flat(grads.biases[t].span()));
      values.push_back(p.spec.weights[t].span());
      values.push_back(p.spec.biases[t].span());
    }
  }
  if (l1_lambda > 0.0) {
    const auto frozen = frozen_ranges(model);
    for (std::size_t b = 0; b < values.size(); ++b) {
      add_l1(values[b], obj.grads[b], frozen[b], l1_lambda, obj.penalty);
    }
  }
  return obj;
}

double evaluate_loss(const Model& model, const Dataset& ds, LossKind loss) {
  if (ds.size() == 0) throw DataError("evaluate_loss: empty dataset");
  std::vector<std::size_t> rows(ds.size());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  double total = 0.0;
  for (std::size_t start = 0; start < rows.size(); start += kEvalChunk) {
    const std::size_t len = std::min(kEvalChunk, rows.size() - start);
    const std::span<const std::size_t> chunk(rows.data() + start, len);
    const Matrix out = predict(model, gather_features(ds, chunk));
    total += compute_loss(loss, out, gather_targets(ds, chunk)).value * static_cast<double>(len);
  }
  return total / static_cast<double>(ds.size());
}

TrainResult train(const Model& init, const Dataset& train_set, const Dataset& val_set,
                  const TrainConfig& cfg) {
  cfg.validate();
  if (train_set.size() == 0) throw DataError("train: empty training split");
  if (cfg.selection == Selection::best_validation && val_set.size() == 0) {
    throw DataError("train: empty validation split");
  }
  using Clock = std::chrono::steady_clock;

  TrainResult result{init, {}, 0, std::numeric_limits<double>::quiet_NaN()};
  Model model = init;
  AdamState adam;
  const Rng root(cfg.seed);
  Rng shuffle_rng = root.fork(1);
  Rng dropout_rng = root.fork(2);
  DropoutConfig dropout{cfg.dropout, &dropout_rng};
  const auto frozen = frozen_ranges(model);

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  double best = std::numeric_limits<double>::infinity();

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const auto t0 = Clock::now();
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t len = std::min(cfg.batch_size, order.size() - start);
      const std::span<const std::size_t> rows(order.data() + start, len);
      Objective obj;
      try {
        obj = evaluate_objective(model, gather_features(train_set, rows),
                                 gather_targets(train_set, rows), cfg.loss, cfg.l1_lambda,
                                 cfg.dropout > 0.0 ? &dropout : nullptr);
      } catch (const NumericError& e) {
        throw TrainingError("training diverged at epoch " + std::to_string(epoch) + ": " + e.what(),
                            epoch);
      }
      if (!std::isfinite(obj.data_loss)) {
        throw TrainingError("training loss is not finite at epoch " + std::to_string(epoch), epoch);
      }
      loss_sum += obj.data_loss * static_cast<double>(len);

      auto params = parameter_blocks(model);
      std::vector<ParameterBlock> blocks;
      blocks.reserve(params.size());
      for (std::size_t b = 0; b < params.size(); ++b) {
        blocks.push_back({params[b], obj.grads[b], frozen[b].begin, frozen[b].end});
      }
      adam_step(blocks, adam, cfg.lr);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss_sum / static_cast<double>(order.size());
    if (val_set.size() > 0) {
      try {
        rec.val_loss = evaluate_loss(model, val_set, cfg.loss);
      } catch (const NumericError& e) {
        throw TrainingError("validation diverged at epoch " + std::to_string(epoch) + ": " +
                                e.what(),
                            epoch);
      }
      if (!std::isfinite(rec.val_loss)) {
        throw TrainingError("validation loss is not finite at epoch " + std::to_string(epoch),
                            epoch);
      }
    }
    rec.ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    result.history.epochs.push_back(rec);

    if (cfg.selection == Selection::best_validation && rec.val_loss < best) {
      best = rec.val_loss;
      result.model = model;
      result.best_epoch = epoch;
      result.best_val_loss = rec.val_loss;
    }
  }

  if (cfg.selection == Selection::last_epoch && cfg.epochs > 0) {
    result.model = std::move(model);
    result.best_epoch = cfg.epochs;
    result.best_val_loss = result.history.epochs.back().val_loss;
  }
  return result;
}

}  // namespace gnm
