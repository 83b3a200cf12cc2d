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
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gnm/data.hpp"
#include "gnm/model.hpp"
#include "gnm/train.hpp"

namespace gnm::cli {

struct Options {
  std::string model = "gnm";
  std::string data = "moons";
  std::size_t nodes = 50;
  std::string hidden = "64";
  std::size_t layers = 2;
  std::string activation = "relu";
  std::size_t budget = 0;
  double lr = 1e-3;
  std::size_t epochs = 300;
  std::size_t batch_size = 64;
  double dropout = 0.0;
  double l1 = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t data_seed = 0;
  std::size_t threads = 1;
  std::string out;
  std::string config;

  std::size_t samples = 1000;
  double noise = 0.1;
  std::string target;
  std::string task = "auto";
  std::string categorical;
  std::size_t folds = 10;
  double val_frac = 0.1;
  double test_frac = 0.1;
};

// Model, data and training flags shared by the training subcommands.
void add_model_flags(CLI::App& app, Options& o);
void add_data_flags(CLI::App& app, Options& o);
void add_train_flags(CLI::App& app, Options& o);
void add_run_flags(CLI::App& app, Options& o);

std::vector<std::size_t> parse_size_list(const std::string& text);

// Reads key=value lines ('#' comments) into "--key value" pairs. Keys must
// name options of `app`; the first unknown key throws CLI::ValidationError.
std::vector<std::string> config_arguments(const std::string& path, const CLI::App& app);

Dataset load_dataset(const Options& o);
ModelConfig model_config(const Options& o, std::size_t inputs, std::size_t outputs);
TrainConfig train_config(const Options& o, const Dataset& ds);

}  // namespace gnm::cli
