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


#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "gnm/cli.hpp"
#include "gnm/errors.hpp"
#include "gnm/experiments.hpp"
#include "gnm/model_file.hpp"
#include "json.hpp"
#include "options.hpp"

namespace gnm {

namespace {

namespace fs = std::filesystem;
using cli::Options;
using nlohmann::json;

constexpr double kVerifyTolerance = 1e-9;

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

json standardizer_json(const Standardizer& st, const Dataset& ds, LossKind loss) {
  json j;
  j["columns"] = st.columns;
  j["mean"] = st.mean;
  j["stddev"] = st.stddev;
  j["target_mean"] = st.target_mean;
  j["target_stddev"] = st.target_stddev;
  j["task"] = ds.task == TaskKind::classification ? "classification" : "regression";
  j["loss"] = static_cast<int>(loss);
  j["class_names"] = ds.class_names;
  return j;
}

Standardizer standardizer_from_json(const json& j) {
  Standardizer st;
  st.columns = j.at("columns").get<std::vector<std::size_t>>();
  st.mean = j.at("mean").get<std::vector<double>>();
  st.stddev = j.at("stddev").get<std::vector<double>>();
  st.target_mean = j.at("target_mean").get<std::vector<double>>();
  st.target_stddev = j.at("target_stddev").get<std::vector<double>>();
  return st;
}

std::string model_name(ModelKind kind) { return kind == ModelKind::gnm ? "GNM" : "MLP"; }

int cmd_train(const Options& o, std::ostream& out) {
  const Dataset ds = cli::load_dataset(o);
  const TrainConfig cfg = cli::train_config(o, ds);
  Options single = o;
  if (single.model == "both") single.model = "gnm";
  const ModelConfig mc = cli::model_config(single, ds.feature_count(), ds.target_count());
  const HoldoutRun run = train_holdout(ds, mc, cfg, o.test_frac, o.val_frac);

  EvalReport report;
  report.task = ds.task;
  report.add(model_name(mc.kind), {run.scores});

  const fs::path dir = o.out.empty() ? fs::path("gnm_run") : fs::path(o.out);
  fs::create_directories(dir);
  save_model((dir / "model.gnm").string(), run.result.model);
  write_text(dir / "history.csv", run.result.history.to_csv());
  write_text(dir / "standardizer.json",
             standardizer_json(run.standardizer, ds, cfg.loss).dump(2) + "\n");

  std::ostringstream summary;
  summary << "samples: train " << run.split.train.size() << ", validation "
          << run.split.validation.size() << ", test " << run.split.test.size() << '\n';
  summary << "parameters: " << run.parameters << '\n';
  summary << "best epoch: " << run.result.best_epoch;
  if (run.result.best_epoch > 0) summary << " (validation loss " << fmt(run.result.best_val_loss) << ')';
  summary << '\n';
  summary << report.to_table();
  write_text(dir / "report.txt", summary.str());
  out << summary.str();
  out << "wrote " << (dir / "model.gnm").string() << ", history.csv, report.txt, standardizer.json\n";
  return kExitOk;
}

int cmd_cv(const Options& o, std::ostream& out) {
  const Dataset ds = cli::load_dataset(o);
  CvSettings s;
  s.train = cli::train_config(o, ds);
  s.folds = o.folds;
  s.val_frac = o.val_frac;
  s.seed = o.seed;
  s.threads = o.threads;
  std::vector<CvModel> models;
  for (const char* kind : {"gnm", "mlp"}) {
    if (o.model != "both" && o.model != kind) continue;
    Options single = o;
    single.model = kind;
    const ModelConfig mc = cli::model_config(single, ds.feature_count(), ds.target_count());
    models.push_back({model_name(mc.kind), mc});
  }
  const EvalReport report = cross_validate(ds, models, s);
  out << s.folds << "-fold cross-validation, " << ds.size() << " samples\n";
  out << report.to_table();
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    write_text(fs::path(o.out) / "cv.csv", report.to_csv());
  }
  return kExitOk;
}

int cmd_verify(const VerifySettings& s, std::ostream& out) {
  const auto checks = run_verify(s);
  double worst1 = 0.0;
  double worst2 = 0.0;
  std::vector<std::uint64_t> failing;
  for (const VerifyCheck& c : checks) {
    out << "seed " << c.seed << " widths";
    for (std::size_t i = 0; i < c.widths.size(); ++i) out << (i ? "," : " ") << c.widths[i];
    out << ": mlp vs gnn_mlp max |d| = " << fmt(c.gnn_mlp_error, "%.3e")
        << ", mlp vs embedded gnm max |d| = " << fmt(c.embedding_error, "%.3e") << '\n';
    worst1 = std::max(worst1, c.gnn_mlp_error);
    worst2 = std::max(worst2, c.embedding_error);
    if (!(c.gnn_mlp_error <= kVerifyTolerance && c.embedding_error <= kVerifyTolerance)) failing.push_back(c.seed);
  }
  out << "gnn_mlp: max |d| = " << fmt(worst1, "%.3e") << '\n';
  out << "embedded gnm: max |d| = " << fmt(worst2, "%.3e") << '\n';
  if (failing.empty()) {
    out << "ok: max |d| <= " << fmt(kVerifyTolerance, "%.0e") << '\n';
    return kExitOk;
  }
  out << "FAILED: tolerance " << fmt(kVerifyTolerance, "%.0e") << " exceeded for seed";
  for (auto seed : failing) out << ' ' << seed;
  out << '\n';
  return kExitCheckFailed;
}

int cmd_xor(const XorSettings& s, const std::string& dir, std::ostream& out) {
  const XorOutcome r = run_xor(s);
  out << "test accuracy (dense): " << fmt(100.0 * r.dense_accuracy, "%.1f") << "%\n";
  out << "test accuracy (pruned at " << fmt(s.tau, "%g") << "): "
      << fmt(100.0 * r.pruned_accuracy, "%.1f") << "%\n";
  out << "nonzero weights: " << r.nnz_before << " -> " << r.nnz_after << '\n';
  out << r.structure.to_text();
  if (!dir.empty()) {
    fs::create_directories(dir);
    save_model((fs::path(dir) / "xor.gnm").string(), Model{r.pruned});
    write_text(fs::path(dir) / "history.csv", r.history.to_csv());
    write_text(fs::path(dir) / "structure.txt", r.structure.to_text());
  }
  return kExitOk;
}

int cmd_bench(const BenchSettings& s, std::ostream& out) {
  const BenchResult r = run_bench(s);
  out << r.to_csv();
  out << "exponent (n >= " << s.fit_from << "): " << fmt(r.exponent, "%.3f") << '\n';
  if (s.k_ratio) out << "time ratio for " << 2 * s.layers << " vs " << s.layers << " steps: "
                     << fmt(r.k_ratio, "%.3f") << '\n';
  return kExitOk;
}

int cmd_prune(const std::string& in_path, double tau, const std::string& out_path,
              std::ostream& out) {
  const Model m = load_model(in_path);
  const auto* g = std::get_if<GnmModel>(&m);
  if (!g) throw std::invalid_argument("prune: " + in_path + " holds an MLP, not a GNM");
  const GnmModel pruned{prune(g->adjacency, tau), g->activation};
  const std::string dest = out_path.empty() ? in_path + ".pruned" : out_path;
  save_model(dest, Model{pruned});
  out << "nonzero weights: " << nonzero_count(g->adjacency) << " -> "
      << nonzero_count(pruned.adjacency) << '\n';
  out << extract_structure(pruned.adjacency).to_text();
  out << "wrote " << dest << '\n';
  return kExitOk;
}

int cmd_eval(const Options& o, const std::string& model_path, std::string standardizer_path,
             std::ostream& out) {
  const Model model = load_model(model_path);
  Dataset original = cli::load_dataset(o);
  if (input_count(model) != original.feature_count()) {
    throw ShapeError("eval: model expects " + std::to_string(input_count(model)) +
                     " features, data has " + std::to_string(original.feature_count()));
  }
  const std::size_t wanted = original.task == TaskKind::classification && output_count(model) == 1
                                ? 1
                                : original.target_count();
  if (output_count(model) != wanted || (wanted == 1 && original.class_count > 2)) {
    throw ShapeError("eval: model has " + std::to_string(output_count(model)) +
                     " outputs, data has " + std::to_string(original.target_count()) +
                     (original.task == TaskKind::classification ? " classes" : " targets"));
  }
  Standardizer st;
  LossKind loss = default_loss(original);
  if (original.task == TaskKind::classification && output_count(model) == 1) {
    loss = LossKind::binary_cross_entropy;
  }
  if (standardizer_path.empty()) {
    const fs::path sibling = fs::path(model_path).parent_path() / "standardizer.json";
    if (fs::exists(sibling)) standardizer_path = sibling.string();
  }
  if (!standardizer_path.empty()) {
    std::ifstream in(standardizer_path);
    if (!in) throw std::runtime_error("cannot open " + standardizer_path);
    const json j = json::parse(in);
    st = standardizer_from_json(j);
    loss = static_cast<LossKind>(j.at("loss").get<int>());
  }
  Dataset scaled = original;
  st.apply(scaled);
  EvalReport report;
  report.task = original.task;
  report.add(model_name(kind_of(model)), {score_model(model, scaled, original, st, loss)});
  out << original.size() << " samples\n" << report.to_table();
  return kExitOk;
}

std::vector<std::string> expand_config(const std::vector<std::string>& args, CLI::App& app) {
  if (args.empty()) return args;
  CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(args.front());
  } catch (const CLI::OptionNotFound&) {
    return args;
  }
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::vector<std::string> expanded{args.front()};
  const auto extra = cli::config_arguments(path, *sub);
  expanded.insert(expanded.end(), extra.begin(), extra.end());
  expanded.insert(expanded.end(), args.begin() + 1, args.end());
  return expanded;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Graph Neural Machines: training, verification and experiments", "gnm");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  Options o;
  auto* train = app.add_subcommand("train", "Train one model on a held-out split");
  auto* cv = app.add_subcommand("cv", "k-fold cross-validation of GNM and/or MLP");
  auto* eval = app.add_subcommand("eval", "Score a saved model on a dataset");
  for (auto* sub : {train, cv, eval}) {
    cli::add_model_flags(*sub, o);
    cli::add_data_flags(*sub, o);
    cli::add_train_flags(*sub, o);
    cli::add_run_flags(*sub, o);
  }
  train->add_option("--test-frac", o.test_frac, "Held-out test share")->capture_default_str();
  cv->add_option("--folds", o.folds, "Fold count")->capture_default_str();
  std::string model_path;
  std::string standardizer_path;
  eval->add_option("--model-file", model_path, "Saved model")->required();
  eval->add_option("--standardizer", standardizer_path,
                   "Standardizer written by train (default: next to the model)");

  VerifySettings vs;
  auto* verify = app.add_subcommand("verify", "Check MLP equivalence of GNN_MLP and the embedded GNM on random specs");
  verify->add_option("--checks", vs.checks, "Random specs")->capture_default_str();
  verify->add_option("--inputs", vs.inputs, "Inputs per spec")->capture_default_str();
  verify->add_option("--seed", vs.seed, "Seed of the first spec")->capture_default_str();
  verify->add_option("--config", o.config, "key=value file");
  verify->add_flag("--corrupt-embedding", vs.corrupt_embedding)->group("");

  XorSettings xs;
  std::string xor_out;
  auto* xr = app.add_subcommand("xor", "Sparse GNM on the four-Gaussian XOR problem");
  xr->add_option("--nodes", xs.nodes, "Node count")->capture_default_str();
  xr->add_option("--layers", xs.layers, "Steps")->capture_default_str();
  xr->add_option("--epochs", xs.epochs, "Training epochs")->capture_default_str();
  xr->add_option("--batch-size", xs.batch_size, "Mini-batch size")->capture_default_str();
  xr->add_option("--lr", xs.lr, "Adam learning rate")->capture_default_str();
  xr->add_option("--l1", xs.l1, "L1 penalty weight")->capture_default_str();
  xr->add_option("--tau", xs.tau, "Pruning threshold")->capture_default_str();
  xr->add_option("--seed", xs.seed, "Training seed")->capture_default_str();
  xr->add_option("--data-seed", xs.data_seed, "Data seed")->capture_default_str();
  xr->add_option("--out", xor_out, "Directory for the pruned model and reports");
  xr->add_option("--config", o.config, "key=value file");

  BenchSettings bs;
  std::string bench_nodes = "50,100,200,400,800";
  auto* bench = app.add_subcommand("bench", "Time one training epoch against the node count");
  bench->add_option("--nodes", bench_nodes, "Node counts, comma-separated")->capture_default_str();
  bench->add_option("--layers", bs.layers, "Steps")->capture_default_str();
  bench->add_option("--samples", bs.samples, "Training samples per epoch")->capture_default_str();
  bench->add_option("--batch-size", bs.batch_size, "Mini-batch size")->capture_default_str();
  bench->add_option("--repeats", bs.repeats, "Timed repeats; the fastest is kept")
      ->capture_default_str();
  bench->add_option("--fit-from", bs.fit_from, "Smallest n in the exponent fit")
      ->capture_default_str();
  bench->add_option("--seed", bs.seed, "Seed")->capture_default_str();
  bench->add_flag("--k-ratio", bs.k_ratio, "Also time twice the steps at the largest n");
  bench->add_option("--config", o.config, "key=value file");

  std::string prune_in;
  std::string prune_out;
  double tau = 1e-3;
  auto* pr = app.add_subcommand("prune", "Zero small GNM weights and report the structure");
  pr->add_option("--model-file", prune_in, "Saved GNM")->required();
  pr->add_option("--tau", tau, "Threshold")->capture_default_str();
  pr->add_option("--out", prune_out, "Output file (default: <model-file>.pruned)");
  pr->add_option("--config", o.config, "key=value file");

  try {
    std::vector<std::string> argv = expand_config(args, app);
    std::reverse(argv.begin(), argv.end());
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  try {
    if (train->parsed()) return cmd_train(o, out);
    if (cv->parsed()) return cmd_cv(o, out);
    if (eval->parsed()) return cmd_eval(o, model_path, standardizer_path, out);
    if (verify->parsed()) return cmd_verify(vs, out);
    if (xr->parsed()) return cmd_xor(xs, xor_out, out);
    if (bench->parsed()) {
      bs.nodes = cli::parse_size_list(bench_nodes);
      return cmd_bench(bs, out);
    }
    if (pr->parsed()) return cmd_prune(prune_in, tau, prune_out, out);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}

}  // namespace gnm
