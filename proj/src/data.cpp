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

#include "gnm/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include "gnm/errors.hpp"
#include "gnm/rng.hpp"

namespace gnm {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Splits one CSV record; double quotes protect commas and "" escapes a quote.
std::vector<std::string> split_record(std::string_view line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  cells.emplace_back(trim(cur));
  return cells;
}

std::optional<double> parse_number(std::string_view s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

bool is_missing(std::string_view s) {
  return s.empty() || s == "?" || s == "NA" || s == "nan" || s == "NaN";
}

bool contains(const std::vector<std::string>& names, const std::string& name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

// Distinct values in a stable order: numerically when every value parses,
// otherwise lexicographically.
std::vector<std::string> sorted_categories(std::vector<std::string> values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  const bool numeric = std::all_of(values.begin(), values.end(),
                                   [](const std::string& v) { return parse_number(v).has_value(); });
  if (numeric) {
    std::stable_sort(values.begin(), values.end(), [](const std::string& a, const std::string& b) {
      return *parse_number(a) < *parse_number(b);
    });
  }
  return values;
}

}  // namespace

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  Dataset out;
  out.task = task;
  out.class_count = class_count;
  out.class_names = class_names;
  out.columns = columns;
  out.features = Matrix(rows.size(), feature_count());
  if (task == TaskKind::classification) {
    out.labels.reserve(rows.size());
  } else {
    out.targets = Matrix(rows.size(), targets.cols());
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const std::size_t src = rows[r];
    if (src >= size()) throw std::out_of_range("Dataset::subset: row index out of range");
    const auto f = features.row(src);
    std::copy(f.begin(), f.end(), out.features.row(r).begin());
    if (task == TaskKind::classification) {
      out.labels.push_back(labels[src]);
    } else {
      const auto t = targets.row(src);
      std::copy(t.begin(), t.end(), out.targets.row(r).begin());
    }
  }
  return out;
}

Dataset load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("load_csv: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), options);
}

Dataset parse_csv(std::string_view text, const CsvOptions& options) {
  std::vector<std::vector<std::string>> records;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  std::vector<std::size_t> line_numbers;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.remove_prefix(3);
    if (!trim(line).empty()) {
      records.push_back(split_record(line));
      line_numbers.push_back(line_no);
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  if (records.empty()) throw DataError("load_csv: empty file");
  const std::vector<std::string> header = records.front();
  const std::size_t width = header.size();
  if (width < 2) throw DataError("load_csv: need at least one feature and one target column");

  std::size_t target_col = width - 1;
  if (options.target) {
    const auto it = std::find(header.begin(), header.end(), *options.target);
    if (it == header.end()) throw DataError("load_csv: no target column named " + *options.target);
    target_col = static_cast<std::size_t>(it - header.begin());
  }

  Dataset ds;
  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != width) {
      throw DataError("load_csv: line " + std::to_string(line_numbers[r]) + " has " +
                      std::to_string(records[r].size()) + " cells, header has " +
                      std::to_string(width));
    }
    if (std::any_of(records[r].begin(), records[r].end(),
                    [](const std::string& c) { return is_missing(c); })) {
      ++ds.rejected_rows;
      continue;
    }
    rows.push_back(records[r]);
  }
  if (rows.empty()) throw DataError("load_csv: no complete data rows");
  const std::size_t n = rows.size();

  // Column typing.
  std::vector<bool> categorical(width, false);
  for (std::size_t c = 0; c < width; ++c) {
    if (c == target_col) continue;
    const bool forced_cat = contains(options.categorical, header[c]);
    const bool forced_num = contains(options.numeric, header[c]);
    if (forced_cat) {
      categorical[c] = true;
      continue;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (!parse_number(rows[r][c])) {
        if (forced_num) {
          throw DataError("load_csv: row " + std::to_string(r + 1) + ", column '" + header[c] +
                          "': cannot parse '" + rows[r][c] + "' as a number");
        }
        categorical[c] = true;
        break;
      }
    }
  }

  bool target_numeric = true;
  for (std::size_t r = 0; r < n && target_numeric; ++r)
    target_numeric = parse_number(rows[r][target_col]).has_value();
  ds.task = options.task.value_or(target_numeric ? TaskKind::regression : TaskKind::classification);
  if (ds.task == TaskKind::regression && !target_numeric) {
    throw DataError("load_csv: regression target '" + header[target_col] + "' is not numeric");
  }

  // Feature layout.
  std::size_t m = 0;
  for (std::size_t c = 0; c < width; ++c) {
    if (c == target_col) continue;
    ColumnInfo info;
    info.name = header[c];
    info.categorical = categorical[c];
    info.first_feature = m;
    if (info.categorical) {
      std::vector<std::string> values;
      values.reserve(n);
      for (const auto& row : rows) values.push_back(row[c]);
      info.categories = sorted_categories(std::move(values));
      info.width = info.categories.size();
    }
    m += info.width;
    ds.columns.push_back(std::move(info));
  }

  ds.features = Matrix(n, m);
  std::size_t ci = 0;
  for (std::size_t c = 0; c < width; ++c) {
    if (c == target_col) continue;
    const ColumnInfo& info = ds.columns[ci++];
    for (std::size_t r = 0; r < n; ++r) {
      if (info.categorical) {
        const auto it = std::find(info.categories.begin(), info.categories.end(), rows[r][c]);
        ds.features(r, info.first_feature + static_cast<std::size_t>(it - info.categories.begin())) =
            1.0;
      } else {
        ds.features(r, info.first_feature) = *parse_number(rows[r][c]);
      }
    }
  }

  if (ds.task == TaskKind::classification) {
    std::vector<std::string> values;
    for (const auto& row : rows) values.push_back(row[target_col]);
    ds.class_names = sorted_categories(values);
    ds.class_count = ds.class_names.size();
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < ds.class_names.size(); ++i) index[ds.class_names[i]] = i;
    for (const auto& v : values) ds.labels.push_back(index.at(v));
  } else {
    ds.targets = Matrix(n, 1);
    for (std::size_t r = 0; r < n; ++r) ds.targets(r, 0) = *parse_number(rows[r][target_col]);
  }
  return ds;
}

void Standardizer::apply_features(Matrix& features) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const std::size_t c = columns[i];
    for (std::size_t r = 0; r < features.rows(); ++r) {
      features(r, c) = stddev[i] > 0.0 ? (features(r, c) - mean[i]) / stddev[i] : 0.0;
    }
  }
}

void Standardizer::invert_features(Matrix& features) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    const std::size_t c = columns[i];
    for (std::size_t r = 0; r < features.rows(); ++r) {
      features(r, c) = features(r, c) * stddev[i] + mean[i];
    }
  }
}

void Standardizer::apply(Dataset& ds) const {
  apply_features(ds.features);
  if (ds.task != TaskKind::regression) return;
  for (std::size_t j = 0; j < target_mean.size(); ++j) {
    for (std::size_t r = 0; r < ds.targets.rows(); ++r) {
      ds.targets(r, j) =
          target_stddev[j] > 0.0 ? (ds.targets(r, j) - target_mean[j]) / target_stddev[j] : 0.0;
    }
  }
}

void Standardizer::invert_targets(Matrix& values, bool by_row) const {
  for (std::size_t j = 0; j < target_mean.size(); ++j) {
    const std::size_t count = by_row ? values.rows() : values.cols();
    for (std::size_t s = 0; s < count; ++s) {
      double& v = by_row ? values(s, j) : values(j, s);
      v = v * target_stddev[j] + target_mean[j];
    }
  }
}

Standardizer standardize(std::span<const std::size_t> train_rows, const Dataset& ds,
                         bool scale_targets) {
  if (train_rows.empty()) throw DataError("standardize: empty training index set");
  Standardizer s;
  const double inv = 1.0 / static_cast<double>(train_rows.size());
  auto fit = [&](auto value_of, double& mean, double& sd) {
    double sum = 0.0;
    for (std::size_t r : train_rows) sum += value_of(r);
    mean = sum * inv;
    double sq = 0.0;
    for (std::size_t r : train_rows) {
      const double d = value_of(r) - mean;
      sq += d * d;
    }
    sd = std::sqrt(sq * inv);
    if (!(sd > 1e-12 * std::max(1.0, std::abs(mean)))) sd = 0.0;
  };
  for (const ColumnInfo& col : ds.columns) {
    if (col.categorical) continue;
    double mean = 0.0, sd = 0.0;
    const std::size_t c = col.first_feature;
    fit([&](std::size_t r) { return ds.features(r, c); }, mean, sd);
    s.columns.push_back(c);
    s.mean.push_back(mean);
    s.stddev.push_back(sd);
  }
  if (scale_targets && ds.task == TaskKind::regression) {
    for (std::size_t j = 0; j < ds.targets.cols(); ++j) {
      double mean = 0.0, sd = 0.0;
      fit([&](std::size_t r) { return ds.targets(r, j); }, mean, sd);
      s.target_mean.push_back(mean);
      s.target_stddev.push_back(sd);
    }
  }
  return s;
}

namespace {

std::size_t validation_size(std::size_t rest, double val_frac) {
  if (val_frac <= 0.0 || rest < 2) return 0;
  auto v = static_cast<std::size_t>(std::floor(val_frac * static_cast<double>(rest) + 0.5));
  return std::clamp<std::size_t>(v, 1, rest - 1);
}

void carve_validation(Fold& fold, double val_frac, Rng& rng) {
  rng.shuffle(fold.train);
  const std::size_t v = validation_size(fold.train.size(), val_frac);
  fold.validation.assign(fold.train.end() - static_cast<std::ptrdiff_t>(v), fold.train.end());
  fold.train.resize(fold.train.size() - v);
}

}  // namespace

FoldPlan kfold(std::size_t n, std::size_t folds, double val_frac, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("kfold: need at least 2 folds");
  if (folds > n) {
    throw std::invalid_argument("kfold: " + std::to_string(folds) + " folds for " +
                                std::to_string(n) + " samples");
  }
  if (!(val_frac >= 0.0 && val_frac < 1.0)) throw std::invalid_argument("kfold: bad val_frac");
  Rng rng(seed);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  rng.shuffle(perm);

  FoldPlan plan;
  plan.seed = seed;
  std::size_t start = 0;
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t len = n / folds + (f < n % folds ? 1 : 0);
    Fold fold;
    fold.test.assign(perm.begin() + static_cast<std::ptrdiff_t>(start),
                     perm.begin() + static_cast<std::ptrdiff_t>(start + len));
    fold.train.reserve(n - len);
    fold.train.insert(fold.train.end(), perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(start));
    fold.train.insert(fold.train.end(), perm.begin() + static_cast<std::ptrdiff_t>(start + len),
                      perm.end());
    carve_validation(fold, val_frac, rng);
    plan.folds.push_back(std::move(fold));
    start += len;
  }
  return plan;
}

Fold holdout_split(std::size_t n, double test_frac, double val_frac, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("holdout_split: need at least 3 samples");
  Rng rng(seed);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  rng.shuffle(perm);
  const std::size_t t = validation_size(n, test_frac);
  Fold fold;
  fold.test.assign(perm.end() - static_cast<std::ptrdiff_t>(t), perm.end());
  fold.train.assign(perm.begin(), perm.end() - static_cast<std::ptrdiff_t>(t));
  carve_validation(fold, val_frac, rng);
  return fold;
}

Dataset make_moons(std::size_t n, double noise, Rng& rng) {
  if (n < 2) throw std::invalid_argument("make_moons: need at least 2 samples");
  if (noise < 0.0) throw std::invalid_argument("make_moons: noise must be >= 0");
  const std::size_t outer = n / 2;
  const std::size_t inner = n - outer;
  Matrix pts(n, 2);
  std::vector<std::size_t> labels(n);
  auto angle = [](std::size_t i, std::size_t count) {
    return count > 1 ? std::numbers::pi * static_cast<double>(i) / static_cast<double>(count - 1)
                     : 0.0;
  };
  for (std::size_t i = 0; i < outer; ++i) {
    const double t = angle(i, outer);
    pts(i, 0) = std::cos(t);
    pts(i, 1) = std::sin(t);
    labels[i] = 0;
  }
  for (std::size_t i = 0; i < inner; ++i) {
    const double t = angle(i, inner);
    pts(outer + i, 0) = 1.0 - std::cos(t);
    pts(outer + i, 1) = 0.5 - std::sin(t);
    labels[outer + i] = 1;
  }
  if (noise > 0.0) {
    for (double& v : pts.span()) v += noise * rng.normal();
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);

  Dataset ds;
  ds.task = TaskKind::classification;
  ds.class_count = 2;
  ds.class_names = {"0", "1"};
  ds.columns = {{"x0", false, {}, 0, 1}, {"x1", false, {}, 1, 1}};
  ds.features = Matrix(n, 2);
  ds.labels.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    ds.features(r, 0) = pts(order[r], 0);
    ds.features(r, 1) = pts(order[r], 1);
    ds.labels[r] = labels[order[r]];
  }
  return ds;
}

Dataset make_xor_blobs(Rng& rng) {
  constexpr std::size_t per_blob = 50;
  constexpr std::size_t total = 4 * per_blob;
  const double sd = std::sqrt(0.3);
  struct Blob {
    double x, y;
    std::size_t label;
  };
  const Blob blobs[4] = {{1, 1, 0}, {-1, -1, 0}, {-1, 1, 1}, {1, -1, 1}};

  Dataset all;
  all.task = TaskKind::classification;
  all.class_count = 2;
  all.class_names = {"0", "1"};
  all.columns = {{"x0", false, {}, 0, 1}, {"x1", false, {}, 1, 1}};
  all.features = Matrix(total, 2);
  all.labels.resize(total);
  for (std::size_t b = 0; b < 4; ++b) {
    for (std::size_t i = 0; i < per_blob; ++i) {
      const std::size_t r = b * per_blob + i;
      all.features(r, 0) = rng.normal(blobs[b].x, sd);
      all.features(r, 1) = rng.normal(blobs[b].y, sd);
      all.labels[r] = blobs[b].label;
    }
  }
  return all;
}

TrainTestSplit make_xor_gaussians(Rng& rng) {
  const Dataset all = make_xor_blobs(rng);
  const std::size_t total = all.size();
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);
  const std::size_t train_size = total * 9 / 10;
  const std::vector<std::size_t> train_rows(order.begin(), order.begin() + train_size);
  const std::vector<std::size_t> test_rows(order.begin() + train_size, order.end());
  return {all.subset(train_rows), all.subset(test_rows)};
}

}  // namespace gnm
