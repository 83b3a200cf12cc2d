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


// One PASS/FAIL line per acceptance criterion; exits 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "gnm/errors.hpp"
#include "gnm/experiments.hpp"
#include "gnm/losses.hpp"
#include "gnm/model_file.hpp"
#include "gnm/rng.hpp"
#include "gnm/sparsity.hpp"

using namespace gnm;

namespace {

constexpr double kGnnMlpTol = 1e-12;
constexpr double kGnnMlpSeconds = 5.0;
constexpr double kEmbeddingTol = 1e-9;
constexpr double kEmbeddingSeconds = 10.0;
constexpr double kFdEps = 1e-6;
constexpr double kFdRel = 1e-5;
constexpr double kFdAbs = 1e-8;
constexpr double kFdSeconds = 30.0;
constexpr double kMoonsAccuracy = 0.995;
constexpr double kMoonsSeconds = 300.0;
constexpr std::size_t kXorSeeds = 10;
constexpr std::size_t kXorRequired = 8;
constexpr std::size_t kXorMaxHidden = 10;
constexpr double kXorSeconds = 120.0;
constexpr double kBenchLow = 1.5;
constexpr double kBenchHigh = 2.5;
constexpr double kSparseTol = 1e-12;
constexpr std::size_t kSparseModels = 50;
constexpr std::size_t kSerialModels = 100;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %d %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

void equivalences() {
  VerifySettings vs;
  vs.checks = 10;
  vs.inputs = 100;
  const auto t0 = Clock::now();
  const auto checks = run_verify(vs);
  const double secs = seconds_since(t0);
  double d1 = 0.0;
  double d2 = 0.0;
  for (const VerifyCheck& c : checks) {
    d1 = std::max(d1, c.gnn_mlp_error);
    d2 = std::max(d2, c.embedding_error);
  }
  // both checks run in one pass, so each is charged the full time
  report(1, "asynchronous GNN_MLP equals the MLP", d1 <= kGnnMlpTol && secs < kGnnMlpSeconds,
         "max |d| " + fmt("%.3e", d1) + " (tol 1e-12), " + fmt("%.2f", secs) + " s");
  report(2, "embedded GNM equals the MLP", d2 <= kEmbeddingTol && secs < kEmbeddingSeconds,
         "max |d| " + fmt("%.3e", d2) + " (tol 1e-9), " + fmt("%.2f", secs) + " s");
}

double gnm_loss(const AdjacencyTensor& a, const Matrix& h0, const BatchTargets& t, LossKind kind) {
  const GnmTape tape = gnm_forward_batch(a, h0, Activation::relu);
  return compute_loss(kind, gnm_outputs(a, tape), t).value;
}

// Smallest |pre-activation| on the activated steps; finite differences are
// meaningless within eps of a ReLU kink.
double kink_margin(const GnmTape& tape) {
  double margin = INFINITY;
  for (std::size_t k = 0; k + 1 < tape.pre.size(); ++k)
    for (double v : tape.pre[k].span()) margin = std::min(margin, std::abs(v));
  return margin;
}

void gradients() {
  Rng rng(2026);
  const auto t0 = Clock::now();
  std::size_t entries = 0;
  std::size_t bad = 0;
  double worst = 0.0;
  for (int model = 0; model < 20; ++model) {
    const std::size_t m = 1 + rng.below(3);
    const std::size_t c = 2 + rng.below(2);
    const std::size_t hidden = rng.below(8 - m - c);
    const std::size_t steps = 1 + rng.below(3);
    const GnmGraph g = build_gnm_graph(m, hidden, c);
    AdjacencyTensor a = init_gnm(g, steps, rng);
    for (Matrix& s : a.steps)
      for (std::size_t i = 0; i < s.rows(); ++i)
        if (i != a.bias_index())
          for (double& v : s.row(i)) v = rng.uniform(-1, 1);
    Matrix x(m, 4);
    Matrix h0;
    for (int attempt = 0;; ++attempt) {
      for (double& v : x.span()) v = rng.normal();
      h0 = annotate_batch(a.layout, x);
      if (kink_margin(gnm_forward_batch(a, h0, Activation::relu)) > 1e-4 || attempt > 100) break;
    }
    BatchTargets t;
    t.values = Matrix(c, 4);
    for (double& v : t.values.span()) v = rng.normal();
    for (int s = 0; s < 4; ++s) t.labels.push_back(rng.below(c));

    for (LossKind kind : {LossKind::cross_entropy, LossKind::mse}) {
      const GnmTape tape = gnm_forward_batch(a, h0, Activation::relu);
      const LossResult lr = compute_loss(kind, gnm_outputs(a, tape), t);
      const GradientSet grads = gnm_backward(a, tape, Activation::relu, lr.grad);
      for (std::size_t k = 0; k < steps; ++k) {
        for (std::size_t i = 0; i < a.node_count(); ++i) {
          if (i == a.bias_index()) continue;
          for (std::size_t j = 0; j < a.node_count(); ++j) {
            AdjacencyTensor plus = a;
            AdjacencyTensor minus = a;
            plus.steps[k](i, j) += kFdEps;
            minus.steps[k](i, j) -= kFdEps;
            const double fd = (gnm_loss(plus, h0, t, kind) - gnm_loss(minus, h0, t, kind)) /
                              (2 * kFdEps);
            const double an = grads.steps[k](i, j);
            const double diff = std::abs(fd - an);
            const double scale = std::max(std::abs(fd), std::abs(an));
            ++entries;
            if (diff > kFdAbs && diff > kFdRel * scale) {
              ++bad;
              worst = std::max(worst, scale > 0 ? diff / scale : diff);
            }
          }
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  report(3, "analytic gradients match central differences", bad == 0 && secs < kFdSeconds,
         std::to_string(entries) + " entries on 20 GNMs x 2 losses, " + std::to_string(bad) +
             " outside 1e-5 rel / 1e-8 abs" + (bad ? " (worst rel " + fmt("%.2e", worst) + ")" : "") +
             ", " + fmt("%.2f", secs) + " s");
}

void moons() {
  Rng data_rng(0);
  const Dataset ds = make_moons(1000, 0.1, data_rng);
  CvSettings s;
  s.folds = 10;
  s.val_frac = 0.1;
  s.threads = 1;
  s.train.loss = LossKind::cross_entropy;
  std::vector<CvModel> models(1);
  models[0].name = "GNM";
  models[0].config.kind = ModelKind::gnm;
  models[0].config.nodes = 50;
  models[0].config.layers = 2;
  const auto t0 = Clock::now();
  const EvalReport rep = cross_validate(ds, models, s);
  const double secs = seconds_since(t0);
  const MeanStd acc = rep.summary(0, false);
  report(4, "Noisy Moons 10-fold GNM accuracy",
         acc.mean >= kMoonsAccuracy && secs < kMoonsSeconds,
         "mean " + fmt("%.4f", acc.mean) + " +- " + fmt("%.4f", acc.stddev) + " (need >= 0.995), " +
             fmt("%.1f", secs) + " s single-threaded");
}

void xor_sparsity() {
  const auto t0 = Clock::now();
  std::size_t good = 0;
  std::string per_seed;
  for (std::uint64_t seed = 0; seed < kXorSeeds; ++seed) {
    XorSettings s;
    s.seed = seed;
    const XorOutcome r = run_xor(s);
    const bool ok = r.pruned_accuracy == 1.0 && r.structure.live_hidden <= kXorMaxHidden &&
                    r.structure.layered && r.structure.widths.size() == 1;
    good += ok;
    per_seed += (seed ? " " : "") + std::to_string(seed) + ":" +
                fmt("%.2f", r.pruned_accuracy) + "/" + std::to_string(r.structure.live_hidden) +
                (r.structure.layered ? "L" : "-");
  }
  const double secs = seconds_since(t0);
  report(5, "sparse XOR finds a small layered network",
         good >= kXorRequired && secs < kXorSeconds,
         std::to_string(good) + "/10 seeds at 100% with <= 10 live hidden and 2-step layering [" +
             per_seed + "], " + fmt("%.1f", secs) + " s");
}

void bench() {
  BenchSettings s;
  s.nodes = {200, 400, 800};
  s.fit_from = 200;
  const BenchResult r = run_bench(s);
  std::string rows;
  for (const auto& [n, ms] : r.rows) rows += " " + std::to_string(n) + ":" + fmt("%.1f", ms) + "ms";
  report(6, "epoch time grows as n^2", r.exponent >= kBenchLow && r.exponent <= kBenchHigh,
         "exponent " + fmt("%.3f", r.exponent) + " (need [1.5, 2.5]);" + rows);
}

void sparse_forward() {
  Rng rng(7);
  double worst = 0.0;
  std::size_t nnz = 0;
  std::size_t total = 0;
  for (std::size_t model = 0; model < kSparseModels; ++model) {
    const GnmGraph g = build_gnm_graph(1 + rng.below(6), rng.below(60), 1 + rng.below(5));
    const AdjacencyTensor dense = init_gnm(g, 1 + rng.below(4), rng);
    const double tau = rng.uniform(0.3, 0.95) / std::sqrt(static_cast<double>(g.size()));
    const AdjacencyTensor pruned = prune(dense, tau);
    nnz += nonzero_count(pruned);
    total += nonzero_count(dense);
    const SparseAdjacency sparse = to_sparse(pruned);
    for (int s = 0; s < 20; ++s) {
      Vector x(g.partition().inputs);
      for (double& v : x) v = rng.uniform(-3, 3);
      const Vector h0 = annotate_input(g, x);
      const Vector a = gnm_forward(pruned, h0, Activation::relu).outputs;
      const Vector b = sparse_gnm_forward(sparse, h0, Activation::relu);
      for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
    }
  }
  report(7, "sparse forward equals dense forward", worst <= kSparseTol,
         "max |d| " + fmt("%.3e", worst) + " over 50 pruned models (kept " +
             fmt("%.1f", 100.0 * static_cast<double>(nnz) / static_cast<double>(total)) +
             "% of weights)");
}

Model random_model(Rng& rng) {
  ModelConfig mc;
  mc.activation = rng.below(2) ? Activation::relu : Activation::identity;
  const std::size_t m = 1 + rng.below(8);
  const std::size_t c = 1 + rng.below(4);
  if (rng.below(2) == 0) {
    mc.kind = ModelKind::gnm;
    mc.nodes = m + c + 1 + rng.below(40);
    mc.layers = 1 + rng.below(4);
  } else {
    mc.kind = ModelKind::mlp;
    mc.layers = 2 + rng.below(3);
    mc.hidden.clear();
    for (std::size_t t = 0; t + 1 < mc.layers; ++t) mc.hidden.push_back(1 + rng.below(20));
  }
  return build_model(mc, m, c, rng);
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void serialization() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "gnm_acceptance_models";
  fs::create_directories(dir);
  Rng rng(11);
  std::size_t exact = 0;
  std::size_t rejected = 0;
  std::size_t corruptions = 0;
  for (std::size_t i = 0; i < kSerialModels; ++i) {
    const Model m = random_model(rng);
    const fs::path a = dir / "a.gnm";
    const fs::path b = dir / "b.gnm";
    save_model(a.string(), m);
    const Model back = load_model(a.string());
    save_model(b.string(), back);
    const auto bytes = read_bytes(a);
    if (back == m && read_bytes(b) == bytes) ++exact;

    auto flipped = bytes;
    flipped[rng.below(flipped.size())] ^= static_cast<std::uint8_t>(1u << rng.below(8));
    auto truncated = bytes;
    truncated.resize(rng.below(bytes.size()));
    for (const auto* bad : {&flipped, &truncated}) {
      ++corruptions;
      try {
        decode_model(*bad);
      } catch (const FormatError&) {
        ++rejected;
      }
    }
  }
  fs::remove_all(dir);
  report(8, "models survive save/load and corruption is rejected",
         exact == kSerialModels && rejected == corruptions,
         std::to_string(exact) + "/100 byte-exact, " + std::to_string(rejected) + "/" +
             std::to_string(corruptions) + " corrupted files rejected");
}

}  // namespace

int main() {
  equivalences();
  gradients();
  moons();
  xor_sparsity();
  bench();
  sparse_forward();
  serialization();
  std::printf("%s\n", failures == 0 ? "all criteria passed" : "some criteria FAILED");
  return failures == 0 ? 0 : 1;
}
