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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gnm/linalg.hpp"

namespace gnm {

class Rng;

enum class TaskKind : std::uint8_t { classification, regression };

// One source column and the feature columns it expanded into.
struct ColumnInfo {
  std::string name;
  bool categorical = false;
  std::vector<std::string> categories;
  std::size_t first_feature = 0;
  std::size_t width = 1;
};

struct Dataset {
  Matrix features;  // N x m, one sample per row
  TaskKind task = TaskKind::classification;
  std::vector<std::size_t> labels;  // classification
  std::size_t class_count = 0;
  std::vector<std::string> class_names;
  Matrix targets;  // regression, N x c
  std::vector<ColumnInfo> columns;
  std::size_t rejected_rows = 0;

  std::size_t size() const { return features.rows(); }
  std::size_t feature_count() const { return features.cols(); }
  std::size_t target_count() const {
    return task == TaskKind::classification ? class_count : targets.cols();
  }

  Dataset subset(std::span<const std::size_t> rows) const;
};

struct CsvOptions {
  std::optional<std::string> target;  // defaults to the last column
  std::optional<TaskKind> task;       // defaults by target type
  std::vector<std::string> categorical;
  std::vector<std::string> numeric;
};

// Comma-separated, header row, '.' decimal point. Columns with any
// non-numeric cell are one-hot encoded (categories sorted); rows with a
// missing cell ("", "?", "NA", "nan") are dropped and counted.
Dataset load_csv(const std::string& path, const CsvOptions& options = {});
Dataset parse_csv(std::string_view text, const CsvOptions& options = {});

// Per-column (x - mean) / std fitted on a subset of rows. Zero-variance
// columns map to 0. Regression targets are scaled the same way when
// scale_targets is set.
struct Standardizer {
  std::vector<std::size_t> columns;
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<double> target_mean;
  std::vector<double> target_stddev;

  void apply(Dataset& ds) const;
  void apply_features(Matrix& features) const;
  void invert_features(Matrix& features) const;
  // Maps scaled regression outputs (c x B or N x c with by_row) back to the
  // original units.
  void invert_targets(Matrix& values, bool by_row) const;
};

Standardizer standardize(std::span<const std::size_t> train_rows, const Dataset& ds,
                         bool scale_targets = true);

struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> validation;
  std::vector<std::size_t> test;
};

struct FoldPlan {
  std::vector<Fold> folds;
  std::uint64_t seed = 0;
};

// Shuffled split into near-equal test blocks; each fold's validation set is
// the last round(val_frac * rest) indices of its shuffled training part.
FoldPlan kfold(std::size_t n, std::size_t folds, double val_frac, std::uint64_t seed);

// Single shuffled train/validation/test split with the same carving rule.
Fold holdout_split(std::size_t n, double test_frac, double val_frac, std::uint64_t seed);

// Two interleaving half circles: class 0 on the unit upper half circle,
// class 1 on the lower half circle centred at (1, 0.5). Class sizes are
// floor(n/2) and ceil(n/2). Rows are shuffled.
Dataset make_moons(std::size_t n, double noise, Rng& rng);

struct TrainTestSplit {
  Dataset train;
  Dataset test;
};

// The 200 unshuffled points, blob b occupying rows [50 b, 50 b + 50).
Dataset make_xor_blobs(Rng& rng);

// Four Gaussian blobs of 50 points with covariance 0.3 I: class 0 around
// (1, 1) and (-1, -1), class 1 around (-1, 1) and (1, -1). Shuffled, then
// split 180 / 20.
TrainTestSplit make_xor_gaussians(Rng& rng);

}  // namespace gnm
