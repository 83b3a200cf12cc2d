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


#include "gnm/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "gnm/errors.hpp"
#include "gnm/graph.hpp"
#include "gnm/mlp.hpp"
#include "gnm/rng.hpp"

namespace gnm {

namespace {

std::vector<std::size_t> all_rows(const Dataset& ds) {
  std::vector<std::size_t> rows(ds.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  return rows;
}

double class_accuracy(const Model& model, const Dataset& ds, LossKind loss) {
  const auto rows = all_rows(ds);
  const auto pred = predict_classes(loss, predict(model, gather_features(ds, rows)));
  return accuracy(pred, ds.labels);
}

struct PreparedFold {
  Dataset train;
  Dataset validation;
  Dataset test_scaled;
  Dataset test_original;
  Standardizer standardizer;
};

PreparedFold prepare(const Dataset& ds, const Fold& fold) {
  PreparedFold p;
  p.standardizer = standardize(fold.train, ds, ds.task == TaskKind::regression);
  Dataset scaled = ds;
  p.standardizer.apply(scaled);
  p.train = scaled.subset(fold.train);
  p.validation = scaled.subset(fold.validation);
  p.test_scaled = scaled.subset(fold.test);
  p.test_original = ds.subset(fold.test);
  return p;
}

}  // namespace

LossKind default_loss(const Dataset& ds) {
  return ds.task == TaskKind::classification ? LossKind::cross_entropy : LossKind::mse;
}

FoldScores score_model(const Model& model, const Dataset& scaled, const Dataset& original,
                       const Standardizer& st, LossKind loss) {
  const auto rows = all_rows(scaled);
  Matrix out = predict(model, gather_features(scaled, rows));
  FoldScores s;
  if (scaled.task == TaskKind::classification) {
    const auto pred = predict_classes(loss, out);
    s.first = accuracy(pred, original.labels);
    s.second = macro_f1(pred, original.labels, original.class_count);
    return s;
  }
  st.invert_targets(out, false);
  const std::size_t c = out.rows();
  std::vector<double> pred_all;
  std::vector<double> truth_all;
  double r2_sum = 0.0;
  for (std::size_t j = 0; j < c; ++j) {
    std::vector<double> pred(out.row(j).begin(), out.row(j).end());
    std::vector<double> truth(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) truth[i] = original.targets(i, j);
    r2_sum += r2(pred, truth);
    pred_all.insert(pred_all.end(), pred.begin(), pred.end());
    truth_all.insert(truth_all.end(), truth.begin(), truth.end());
  }
  s.first = mse(pred_all, truth_all);
  s.second = r2_sum / static_cast<double>(c);
  return s;
}

HoldoutRun train_holdout(const Dataset& ds, const ModelConfig& model, const TrainConfig& cfg,
                         double test_frac, double val_frac) {
  HoldoutRun run;
  run.split = holdout_split(ds.size(), test_frac, val_frac, cfg.seed);
  const PreparedFold p = prepare(ds, run.split);
  Rng init_rng = Rng(cfg.seed).fork(7);
  const Model init = build_model(model, ds.feature_count(), ds.target_count(), init_rng);
  run.parameters = parameter_count(init);
  run.result = train(init, p.train, p.validation, cfg);
  run.standardizer = p.standardizer;
  run.scores = score_model(run.result.model, p.test_scaled, p.test_original, p.standardizer,
                           cfg.loss);
  return run;
}

EvalReport cross_validate(const Dataset& ds, std::span<const CvModel> models,
                          const CvSettings& settings) {
  const FoldPlan plan = kfold(ds.size(), settings.folds, settings.val_frac, settings.seed);
  std::vector<PreparedFold> prepared;
  prepared.reserve(plan.folds.size());
  for (const Fold& f : plan.folds) prepared.push_back(prepare(ds, f));

  const std::size_t folds = plan.folds.size();
  std::vector<std::vector<FoldScores>> scores(models.size(), std::vector<FoldScores>(folds));
  auto run_task = [&](std::size_t task) {
    const std::size_t mi = task / folds;
    const std::size_t fi = task % folds;
    const PreparedFold& p = prepared[fi];
    Rng fold_rng = Rng(settings.seed).fork(1 + fi);
    TrainConfig cfg = settings.train;
    cfg.seed = fold_rng.next_u64();
    Rng init_rng = fold_rng.fork(100 + mi);
    const Model init =
        build_model(models[mi].config, ds.feature_count(), ds.target_count(), init_rng);
    const TrainResult r = train(init, p.train, p.validation, cfg);
    scores[mi][fi] = score_model(r.model, p.test_scaled, p.test_original, p.standardizer, cfg.loss);
  };

  const std::size_t tasks = models.size() * folds;
  const std::size_t workers = std::clamp<std::size_t>(settings.threads, 1, tasks);
  if (workers == 1) {
    for (std::size_t t = 0; t < tasks; ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t = next++; t < tasks; t = next++) {
          try {
            run_task(t);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  EvalReport report;
  report.task = ds.task;
  for (std::size_t mi = 0; mi < models.size(); ++mi) report.add(models[mi].name, scores[mi]);
  return report;
}

XorOutcome run_xor(const XorSettings& s) {
  Rng data_rng(s.data_seed);
  const TrainTestSplit data = make_xor_gaussians(data_rng);

  ModelConfig mc;
  mc.kind = ModelKind::gnm;
  mc.nodes = s.nodes;
  mc.layers = s.layers;
  // A single logit: the output is the last node, as in the 50-node layout
  // with the bias at 48 and the output at 49.
  Rng init_rng = Rng(s.seed).fork(7);
  const Model init = build_model(mc, 2, 1, init_rng);

  TrainConfig cfg;
  cfg.loss = LossKind::binary_cross_entropy;
  cfg.epochs = s.epochs;
  cfg.batch_size = s.batch_size;
  cfg.lr = s.lr;
  cfg.l1_lambda = s.l1;
  cfg.seed = s.seed;
  cfg.selection = Selection::last_epoch;
  const TrainResult r = train(init, data.train, Dataset{}, cfg);

  XorOutcome out;
  const auto& trained = std::get<GnmModel>(r.model);
  out.history = r.history;
  out.dense_accuracy = class_accuracy(r.model, data.test, cfg.loss);
  out.nnz_before = nonzero_count(trained.adjacency);
  out.pruned = GnmModel{prune(trained.adjacency, s.tau), trained.activation};
  out.nnz_after = nonzero_count(out.pruned.adjacency);
  out.pruned_accuracy = class_accuracy(Model{out.pruned}, data.test, cfg.loss);
  out.structure = extract_structure(out.pruned.adjacency);
  return out;
}

MlpSpec random_verify_spec(Rng& rng) {
  const std::size_t layers = 2 + rng.below(3);
  std::vector<std::size_t> widths{1 + rng.below(8)};
  for (std::size_t t = 1; t < layers; ++t) widths.push_back(1 + rng.below(16));
  widths.push_back(1 + rng.below(8));
  MlpSpec spec = random_mlp_spec(widths, rng);
  // Larger weights than the fan-in init so ReLU gates flip across inputs.
  for (auto& w : spec.weights)
    for (double& v : w.span()) v *= 2.0;
  for (auto& b : spec.biases)
    for (double& v : b.span()) v = rng.uniform(-0.5, 0.5);
  return spec;
}

std::vector<VerifyCheck> run_verify(const VerifySettings& s) {
  std::vector<VerifyCheck> checks;
  for (std::size_t i = 0; i < s.checks; ++i) {
    VerifyCheck check;
    check.seed = s.seed + i;
    Rng rng(check.seed);
    const MlpSpec spec = random_verify_spec(rng);
    check.widths = spec.widths;
    const MlpGraph g = build_mlp_graph(spec.input_count(), spec.hidden_widths(), spec.output_count());
    const EdgeWeights w = transcribe_weights(g, spec);
    EmbeddedMlp emb = embed_mlp(spec);
    if (s.corrupt_embedding) {
      const std::size_t row = embedded_node(spec, spec.layer_count(), 0);
      emb.adjacency.steps.back()(row, emb.adjacency.bias_index()) += 1e-3;
    }
    for (std::size_t t = 0; t < s.inputs; ++t) {
      Vector x(spec.input_count());
      for (double& v : x) v = rng.uniform(-2.0, 2.0);
      const Vector ref = mlp_forward(spec, x, Activation::relu);
      const Vector t1 = gnn_mlp_forward(g, w, x, Activation::relu);
      const Vector t2 =
          gnm_forward(emb.adjacency, annotate_input(emb.graph, x), Activation::relu).outputs;
      for (std::size_t j = 0; j < ref.size(); ++j) {
        check.gnn_mlp_error = std::max(check.gnn_mlp_error, std::abs(t1[j] - ref[j]));
        check.embedding_error = std::max(check.embedding_error, std::abs(t2[j] - ref[j]));
      }
    }
    checks.push_back(std::move(check));
  }
  return checks;
}

double time_gnm_epoch(std::size_t nodes, std::size_t layers, const BenchSettings& s) {
  Rng rng(s.seed);
  Dataset ds;
  ds.task = TaskKind::classification;
  ds.class_count = 2;
  ds.features = Matrix(s.samples, 2);
  for (double& v : ds.features.span()) v = rng.normal();
  for (std::size_t i = 0; i < s.samples; ++i) ds.labels.push_back(rng.below(2));

  ModelConfig mc;
  mc.nodes = nodes;
  mc.layers = layers;
  const Model init = build_model(mc, 2, 2, rng);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = s.batch_size;
  cfg.selection = Selection::last_epoch;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < std::max<std::size_t>(s.repeats, 1); ++r) {
    const TrainResult out = train(init, ds, Dataset{}, cfg);
    best = std::min(best, out.history.epochs.front().ms);
  }
  return best;
}

double loglog_slope(std::span<const std::pair<std::size_t, double>> points) {
  if (points.size() < 2) throw std::invalid_argument("loglog_slope: need two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    const double lx = std::log(static_cast<double>(x));
    const double ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double k = static_cast<double>(points.size());
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

BenchResult run_bench(const BenchSettings& s) {
  BenchResult r;
  std::vector<std::pair<std::size_t, double>> fit;
  for (std::size_t n : s.nodes) {
    const double ms = time_gnm_epoch(n, s.layers, s);
    r.rows.emplace_back(n, ms);
    if (n >= s.fit_from) fit.emplace_back(n, ms);
  }
  r.exponent = fit.size() >= 2 ? loglog_slope(fit) : std::numeric_limits<double>::quiet_NaN();
  if (s.k_ratio && !s.nodes.empty()) {
    const std::size_t n = *std::max_element(s.nodes.begin(), s.nodes.end());
    double base = 0.0;
    for (const auto& [rn, ms] : r.rows)
      if (rn == n) base = ms;
    r.k_ratio = time_gnm_epoch(n, 2 * s.layers, s) / base;
  }
  return r;
}

std::string BenchResult::to_csv() const {
  std::ostringstream out;
  out << "n,ms\n";
  for (const auto& [n, ms] : rows) out << n << ',' << ms << '\n';
  return out.str();
}

}  // namespace gnm
