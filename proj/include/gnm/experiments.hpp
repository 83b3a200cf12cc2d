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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gnm/data.hpp"
#include "gnm/metrics.hpp"
#include "gnm/model.hpp"
#include "gnm/sparsity.hpp"
#include "gnm/train.hpp"

namespace gnm {

LossKind default_loss(const Dataset& ds);

// Test-split scores of a model trained on standardized data. `scaled` is
// the standardized test set, `original` the same rows in raw units.
FoldScores score_model(const Model& model, const Dataset& scaled, const Dataset& original,
                       const Standardizer& st, LossKind loss);

struct HoldoutRun {
  TrainResult result;
  Standardizer standardizer;
  Fold split;
  FoldScores scores;
  std::size_t parameters = 0;
};

HoldoutRun train_holdout(const Dataset& ds, const ModelConfig& model, const TrainConfig& cfg,
                         double test_frac, double val_frac);

struct CvModel {
  std::string name;
  ModelConfig config;
};

struct CvSettings {
  TrainConfig train;
  std::size_t folds = 10;
  double val_frac = 0.1;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

// Every model sees the same fold plan. Results do not depend on threads.
EvalReport cross_validate(const Dataset& ds, std::span<const CvModel> models,
                          const CvSettings& settings);

struct XorSettings {
  std::size_t nodes = 50;
  std::size_t layers = 2;
  std::size_t epochs = 2000;
  std::size_t batch_size = 64;
  double lr = 1e-3;
  double l1 = 7e-3;
  double tau = 1e-3;
  std::uint64_t seed = 0;
  // The points and their 180 / 20 split; kept apart from the training seed.
  std::uint64_t data_seed = 1;
};

struct XorOutcome {
  double dense_accuracy = 0.0;
  double pruned_accuracy = 0.0;
  std::size_t nnz_before = 0;
  std::size_t nnz_after = 0;
  StructureReport structure;
  GnmModel pruned;
  TrainHistory history;
};

XorOutcome run_xor(const XorSettings& s);

struct VerifyCheck {
  std::uint64_t seed = 0;
  std::vector<std::size_t> widths;
  double gnn_mlp_error = 0.0;  // max |gnn_mlp - mlp|
  double embedding_error = 0.0;  // max |gnm(embed) - mlp|
};

struct VerifySettings {
  std::size_t checks = 10;
  std::size_t inputs = 100;
  std::uint64_t seed = 0;
  bool corrupt_embedding = false;
};

// Check i uses seed + i, so a failing check reruns alone with
// --checks 1 --seed <its seed>.
std::vector<VerifyCheck> run_verify(const VerifySettings& s);

// Random spec of the verification family: m <= 8, K in {2, 3, 4},
// widths <= 16.
MlpSpec random_verify_spec(Rng& rng);

struct BenchSettings {
  std::vector<std::size_t> nodes = {50, 100, 200, 400, 800};
  std::size_t layers = 2;
  std::size_t samples = 256;
  std::size_t batch_size = 64;
  std::size_t repeats = 3;
  std::uint64_t seed = 0;
  bool k_ratio = false;  // also time 2 * layers at the largest n
  std::size_t fit_from = 200;
};

struct BenchResult {
  std::vector<std::pair<std::size_t, double>> rows;  // n, ms per epoch
  double exponent = 0.0;
  double k_ratio = 0.0;
  std::string to_csv() const;
};

double time_gnm_epoch(std::size_t nodes, std::size_t layers, const BenchSettings& s);
BenchResult run_bench(const BenchSettings& s);

// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const std::pair<std::size_t, double>> points);

}  // namespace gnm
