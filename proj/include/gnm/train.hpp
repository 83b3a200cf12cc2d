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
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gnm/data.hpp"
#include "gnm/losses.hpp"
#include "gnm/model.hpp"

namespace gnm {

enum class Selection : std::uint8_t { best_validation, last_epoch };

struct TrainConfig {
  LossKind loss = LossKind::cross_entropy;
  std::size_t epochs = 300;
  std::size_t batch_size = 64;
  double lr = 1e-3;
  double l1_lambda = 0.0;
  double dropout = 0.0;
  std::uint64_t seed = 0;
  Selection selection = Selection::best_validation;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_loss = 0.0;
  double val_loss = std::numeric_limits<double>::quiet_NaN();
  double ms = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;

  std::size_t size() const { return epochs.size(); }
  // "epoch,train_loss,val_loss,ms" then one row per epoch.
  std::string to_csv() const;
};

struct TrainResult {
  Model model;
  TrainHistory history;
  std::size_t best_epoch = 0;  // 0 = initialization
  double best_val_loss = std::numeric_limits<double>::quiet_NaN();
};

class TrainingError : public std::runtime_error {
 public:
  TrainingError(const std::string& what, std::size_t epoch)
      : std::runtime_error(what), epoch_(epoch) {}
  std::size_t epoch() const { return epoch_; }

 private:
  std::size_t epoch_;
};

// Features of the given rows, column-stacked (m x B).
Matrix gather_features(const Dataset& ds, std::span<const std::size_t> rows);
BatchTargets gather_targets(const Dataset& ds, std::span<const std::size_t> rows);

// Data loss, L1 penalty and the gradient of their sum, laid out like the
// model's parameter blocks (GNM: one n x n block per step; MLP: W_1, b_1,
// W_2, b_2, ...). Frozen entries get zero gradient.
struct Objective {
  double data_loss = 0.0;
  double penalty = 0.0;
  std::vector<std::vector<double>> grads;
};

Objective evaluate_objective(const Model& model, const Matrix& x, const BatchTargets& targets,
                             LossKind loss, double l1_lambda, const DropoutConfig* dropout = nullptr);

// Mean data loss over a whole dataset in evaluation mode.
double evaluate_loss(const Model& model, const Dataset& ds, LossKind loss);

// Flat views of a model's parameters in the block order used by Objective.
std::vector<std::span<double>> parameter_blocks(Model& model);

// Mini-batch Adam for cfg.epochs epochs with a seeded shuffle per epoch.
// With best_validation the returned model is the snapshot of lowest
// validation loss; with last_epoch it is the final state and val may be
// empty.
TrainResult train(const Model& init, const Dataset& train_set, const Dataset& val_set,
                  const TrainConfig& cfg);

}  // namespace gnm
