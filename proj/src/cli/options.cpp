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


#include "options.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "gnm/errors.hpp"
#include "gnm/rng.hpp"

namespace gnm::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace

void add_model_flags(CLI::App& app, Options& o) {
  app.add_option("--model", o.model, "Model family")
      ->check(CLI::IsMember({"gnm", "mlp", "both"}))
      ->capture_default_str();
  app.add_option("--nodes", o.nodes, "GNM node count including inputs, bias and outputs")
      ->capture_default_str();
  app.add_option("--hidden", o.hidden, "MLP hidden widths, comma-separated")->capture_default_str();
  app.add_option("--layers", o.layers, "GNM steps / MLP layers")->capture_default_str();
  app.add_option("--activation", o.activation, "Hidden activation")
      ->check(CLI::IsMember({"relu", "identity"}))
      ->capture_default_str();
  app.add_option("--budget", o.budget,
                 "Pick the largest nodes / hidden width within this parameter count (0 = off)")
      ->capture_default_str();
}

void add_data_flags(CLI::App& app, Options& o) {
  app.add_option("--data", o.data, "CSV path, or moons / xor")->capture_default_str();
  app.add_option("--data-seed", o.data_seed, "Seed of the synthetic generators")
      ->capture_default_str();
  app.add_option("--samples", o.samples, "Noisy Moons sample count")->capture_default_str();
  app.add_option("--noise", o.noise, "Noisy Moons noise std")->capture_default_str();
  app.add_option("--target", o.target, "CSV target column (default: last)");
  app.add_option("--task", o.task, "CSV task kind")
      ->check(CLI::IsMember({"auto", "classification", "regression"}))
      ->capture_default_str();
  app.add_option("--categorical", o.categorical, "CSV columns to one-hot encode, comma-separated");
}

void add_train_flags(CLI::App& app, Options& o) {
  app.add_option("--lr", o.lr, "Adam learning rate")->capture_default_str();
  app.add_option("--epochs", o.epochs, "Training epochs")->capture_default_str();
  app.add_option("--batch-size", o.batch_size, "Mini-batch size")->capture_default_str();
  app.add_option("--dropout", o.dropout, "Dropout probability")->capture_default_str();
  app.add_option("--l1", o.l1, "L1 penalty weight")->capture_default_str();
  app.add_option("--val-frac", o.val_frac, "Validation share of the training part")
      ->capture_default_str();
}

void add_run_flags(CLI::App& app, Options& o) {
  app.add_option("--seed", o.seed, "Run seed")->capture_default_str();
  app.add_option("--threads", o.threads, "Worker threads")->capture_default_str();
  app.add_option("--out", o.out, "Output directory");
  app.add_option("--config", o.config, "key=value file; command-line flags override it");
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> values;
  for (const std::string& item : split_list(text)) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc{} || ptr != item.data() + item.size()) {
      throw CLI::ValidationError("list", "'" + item + "' is not a non-negative integer");
    }
    values.push_back(v);
  }
  return values;
}

std::vector<std::string> config_arguments(const std::string& path, const CLI::App& app) {
  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);
  std::vector<std::string> args;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CLI::ValidationError("--config", path + ":" + std::to_string(line_no) +
                                                 ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "config" || app.get_option_no_throw("--" + key) == nullptr) {
      throw CLI::ValidationError("--config", path + ":" + std::to_string(line_no) +
                                                 ": unknown key '" + key + "'");
    }
    args.push_back("--" + key + "=" + value);
  }
  return args;
}

Dataset load_dataset(const Options& o) {
  if (o.data == "moons") {
    Rng rng(o.data_seed);
    return make_moons(o.samples, o.noise, rng);
  }
  if (o.data == "xor") {
    Rng rng(o.data_seed);
    return make_xor_blobs(rng);
  }
  CsvOptions csv;
  if (!o.target.empty()) csv.target = o.target;
  if (o.task == "classification") csv.task = TaskKind::classification;
  if (o.task == "regression") csv.task = TaskKind::regression;
  csv.categorical = split_list(o.categorical);
  return load_csv(o.data, csv);
}

ModelConfig model_config(const Options& o, std::size_t inputs, std::size_t outputs) {
  ModelConfig mc;
  mc.kind = o.model == "mlp" ? ModelKind::mlp : ModelKind::gnm;
  mc.layers = o.layers;
  mc.nodes = o.nodes;
  mc.activation = o.activation == "identity" ? Activation::identity : Activation::relu;
  mc.hidden = parse_size_list(o.hidden);
  if (o.budget > 0) {
    if (mc.kind == ModelKind::gnm) {
      mc.nodes = gnm_nodes_for_budget(o.budget, o.layers, inputs, outputs);
      if (mc.nodes == 0) throw std::invalid_argument("budget is too small for any GNM");
    } else {
      const std::size_t w = mlp_width_for_budget(o.budget, o.layers, inputs, outputs);
      if (w == 0) throw std::invalid_argument("budget is too small for any MLP");
      mc.hidden = {w};
    }
  }
  return mc;
}

TrainConfig train_config(const Options& o, const Dataset& ds) {
  TrainConfig cfg;
  cfg.loss = ds.task == TaskKind::classification ? LossKind::cross_entropy : LossKind::mse;
  cfg.epochs = o.epochs;
  cfg.batch_size = o.batch_size;
  cfg.lr = o.lr;
  cfg.l1_lambda = o.l1;
  cfg.dropout = o.dropout;
  cfg.seed = o.seed;
  cfg.validate();
  return cfg;
}

}  // namespace gnm::cli
