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


#include "gnm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "gnm/errors.hpp"

namespace gnm {

namespace {

void check_lengths(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw ShapeError(std::string(what) + ": prediction and truth lengths differ");
  if (a == 0) throw std::invalid_argument(std::string(what) + ": empty input");
}

std::string pm(const MeanStd& s, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f +- %.*f", precision, s.mean, precision, s.stddev);
  return buf;
}

}  // namespace

double accuracy(std::span<const std::size_t> pred, std::span<const std::size_t> truth) {
  check_lengths(pred.size(), truth.size(), "accuracy");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) hits += pred[i] == truth[i];
  return static_cast<double>(hits) / static_cast<double>(pred.size());
}

double macro_f1(std::span<const std::size_t> pred, std::span<const std::size_t> truth,
                std::size_t classes) {
  check_lengths(pred.size(), truth.size(), "macro_f1");
  std::vector<std::size_t> tp(classes), fp(classes), fn(classes);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i] >= classes || truth[i] >= classes) {
      throw std::invalid_argument("macro_f1: label out of range");
    }
    if (pred[i] == truth[i]) {
      ++tp[pred[i]];
    } else {
      ++fp[pred[i]];
      ++fn[truth[i]];
    }
  }
  double sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    if (tp[c] + fp[c] + fn[c] == 0) continue;
    ++counted;
    if (tp[c] == 0) continue;
    sum += 2.0 * tp[c] / static_cast<double>(2 * tp[c] + fp[c] + fn[c]);
  }
  return counted == 0 ? 0.0 : sum / static_cast<double>(counted);
}

double mse(std::span<const double> pred, std::span<const double> truth) {
  check_lengths(pred.size(), truth.size(), "mse");
  double s = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) s += (pred[i] - truth[i]) * (pred[i] - truth[i]);
  return s / static_cast<double>(pred.size());
}

double r2(std::span<const double> pred, std::span<const double> truth) {
  check_lengths(pred.size(), truth.size(), "r2");
  double mean = 0.0;
  for (double t : truth) mean += t;
  mean /= static_cast<double>(truth.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ss_res += (truth[i] - pred[i]) * (truth[i] - pred[i]);
    ss_tot += (truth[i] - mean) * (truth[i] - mean);
  }
  if (ss_tot == 0.0) throw std::invalid_argument("r2: truth is constant");
  return 1.0 - ss_res / ss_tot;
}

MeanStd mean_std(std::span<const double> values) {
  MeanStd s;
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - s.mean) * (v - s.mean);
  s.stddev = std::sqrt(var / static_cast<double>(values.size()));
  return s;
}

void EvalReport::add(const std::string& model, std::vector<FoldScores> scores) {
  models.push_back(model);
  folds.push_back(std::move(scores));
}

MeanStd EvalReport::summary(std::size_t model, bool second) const {
  std::vector<double> v;
  for (const FoldScores& f : folds.at(model)) v.push_back(second ? f.second : f.first);
  return mean_std(v);
}

std::string EvalReport::to_table() const {
  const bool cls = task == TaskKind::classification;
  const char* a = cls ? "Accuracy" : "MSE";
  const char* b = cls ? "Macro F1" : "R2";
  std::size_t name_w = 5;
  for (const auto& m : models) name_w = std::max(name_w, m.size());
  char line[256];
  std::ostringstream out;
  std::snprintf(line, sizeof line, "%-*s  %-22s  %-22s\n", static_cast<int>(name_w), "Model", a, b);
  out << line;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const int prec = 4;
    std::snprintf(line, sizeof line, "%-*s  %-22s  %-22s\n", static_cast<int>(name_w),
                  models[i].c_str(), pm(summary(i, false), prec).c_str(),
                  pm(summary(i, true), prec).c_str());
    out << line;
  }
  return out.str();
}

std::string EvalReport::to_csv() const {
  const bool cls = task == TaskKind::classification;
  std::ostringstream out;
  out.precision(17);
  out << "model,fold," << (cls ? "accuracy,macro_f1" : "mse,r2") << '\n';
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t f = 0; f < folds[i].size(); ++f) {
      out << models[i] << ',' << f + 1 << ',' << folds[i][f].first << ',' << folds[i][f].second
          << '\n';
    }
    const MeanStd s1 = summary(i, false);
    const MeanStd s2 = summary(i, true);
    out << models[i] << ",mean," << s1.mean << ',' << s2.mean << '\n';
    out << models[i] << ",std," << s1.stddev << ',' << s2.stddev << '\n';
  }
  return out.str();
}

}  // namespace gnm
