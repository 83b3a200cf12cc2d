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
#include <span>
#include <string>
#include <vector>

#include "gnm/data.hpp"

namespace gnm {

double accuracy(std::span<const std::size_t> pred, std::span<const std::size_t> truth);

// Unweighted mean of per-class F1. Classes absent from both lists are
// skipped; a present class with no true positive scores 0.
double macro_f1(std::span<const std::size_t> pred, std::span<const std::size_t> truth,
                std::size_t classes);

double mse(std::span<const double> pred, std::span<const double> truth);

// 1 - SS_res / SS_tot; throws when truth is constant.
double r2(std::span<const double> pred, std::span<const double> truth);

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // population
};

MeanStd mean_std(std::span<const double> values);

struct FoldScores {
  double first = 0.0;   // accuracy or MSE
  double second = 0.0;  // macro F1 or R2
};

struct EvalReport {
  TaskKind task = TaskKind::classification;
  std::vector<std::string> models;
  std::vector<std::vector<FoldScores>> folds;  // per model, per fold

  void add(const std::string& model, std::vector<FoldScores> scores);
  MeanStd summary(std::size_t model, bool second) const;
  std::string to_table() const;
  std::string to_csv() const;
};

}  // namespace gnm
