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


#include "gnm/model_file.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>

#include "gnm/errors.hpp"

namespace gnm {

namespace {

constexpr char kMagic[4] = {'G', 'N', 'M', '1'};
// Guards allocation when a header is garbage.
constexpr std::uint64_t kMaxValues = std::uint64_t{1} << 31;

class Writer {
 public:
  void bytes(const void* p, std::size_t len) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + len);
  }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void uint(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) { uint(std::bit_cast<std::uint64_t>(v), 8); }
  void f64s(std::span<const double> v) {
    for (double d : v) f64(d);
  }
  std::vector<std::uint8_t>& data() { return out_; }

 private:
  std::vector<std::uint8_t> out_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}
  std::uint64_t uint(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) v |= std::uint64_t{in_[pos_ + i]} << (8 * i);
    pos_ += static_cast<std::size_t>(width);
    return v;
  }
  std::uint32_t u32() { return static_cast<std::uint32_t>(uint(4)); }
  double f64() { return std::bit_cast<double>(uint(8)); }
  void f64s(std::span<double> v) {
    for (double& d : v) d = f64();
  }
  std::size_t remaining() const { return in_.size() - pos_; }
  void need(std::size_t len) const {
    if (remaining() < len) throw FormatError("model file is truncated");
  }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kMaxValues / a) throw FormatError("model file header declares too many values");
  return a * b;
}

Activation read_activation(std::uint64_t id) {
  if (id > static_cast<std::uint64_t>(Activation::identity)) {
    throw FormatError("model file has unknown activation id " + std::to_string(id));
  }
  return static_cast<Activation>(id);
}

}  // namespace

std::uint64_t fnv1a(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<std::uint8_t> encode_model(const Model& model) {
  Writer w;
  w.bytes(kMagic, sizeof kMagic);
  w.uint(kModelFileVersion, 2);
  w.u8(static_cast<std::uint8_t>(kind_of(model)));
  w.u8(static_cast<std::uint8_t>(activation_of(model)));
  if (const auto* g = std::get_if<GnmModel>(&model)) {
    const AdjacencyTensor& a = g->adjacency;
    if (a.layout.bias != 1) throw FormatError("only single-bias GNMs can be saved");
    w.uint(a.layout.inputs, 4);
    w.uint(a.layout.hidden, 4);
    w.uint(a.layout.outputs, 4);
    w.uint(a.step_count(), 4);
    for (const Matrix& m : a.steps) w.f64s(m.span());
  } else {
    const MlpSpec& s = std::get<MlpModel>(model).spec;
    w.uint(s.layer_count(), 4);
    for (std::size_t width : s.widths) w.uint(width, 4);
    for (std::size_t t = 0; t < s.layer_count(); ++t) {
      w.f64s(s.weights[t].span());
      w.f64s(s.biases[t].span());
    }
  }
  const std::uint64_t sum = fnv1a(w.data());
  w.uint(sum, 8);
  return std::move(w.data());
}

Model decode_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof kMagic + 2 + 2 + 8) throw FormatError("model file is truncated");
  if (std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw FormatError("not a model file (bad magic)");
  }
  const auto body = bytes.first(bytes.size() - 8);
  Reader tail(bytes.last(8));
  if (fnv1a(body) != tail.uint(8)) throw FormatError("model file checksum mismatch");

  Reader r(body.subspan(sizeof kMagic));
  const auto version = r.uint(2);
  if (version != kModelFileVersion) {
    throw FormatError("unsupported model file version " + std::to_string(version));
  }
  const auto kind = r.uint(1);
  const Activation act = read_activation(r.uint(1));

  if (kind == static_cast<std::uint64_t>(ModelKind::gnm)) {
    const std::size_t m = r.u32();
    const std::size_t hidden = r.u32();
    const std::size_t c = r.u32();
    const std::size_t steps = r.u32();
    if (m == 0 || c == 0 || steps == 0) throw FormatError("model file has an empty GNM layout");
    const std::uint64_t n = std::uint64_t{m} + hidden + c + 1;
    const std::uint64_t count = checked_mul(checked_mul(n, n), steps);
    if (r.remaining() != count * 8) throw FormatError("model file payload size mismatch");
    AdjacencyTensor a;
    a.layout = {m, hidden, 1, c};
    a.steps.assign(steps, Matrix(n, n));
    for (Matrix& mat : a.steps) r.f64s(mat.span());
    try {
      a.validate();
    } catch (const std::exception& e) {
      throw FormatError(std::string("model file holds an invalid GNM: ") + e.what());
    }
    return GnmModel{std::move(a), act};
  }
  if (kind == static_cast<std::uint64_t>(ModelKind::mlp)) {
    const std::size_t layers = r.u32();
    if (layers < 2 || layers > 4096) throw FormatError("model file has an invalid MLP depth");
    std::vector<std::size_t> widths(layers + 1);
    for (std::size_t& w : widths) {
      w = r.u32();
      if (w == 0) throw FormatError("model file has a zero MLP width");
    }
    std::uint64_t count = 0;
    for (std::size_t t = 0; t < layers; ++t) {
      count += checked_mul(widths[t + 1], widths[t] + 1);
      if (count > kMaxValues) throw FormatError("model file header declares too many values");
    }
    if (r.remaining() != count * 8) throw FormatError("model file payload size mismatch");
    MlpSpec s = zero_mlp_spec(widths);
    for (std::size_t t = 0; t < layers; ++t) {
      r.f64s(s.weights[t].span());
      r.f64s(s.biases[t].span());
    }
    return MlpModel{std::move(s), act};
  }
  throw FormatError("model file has unknown model kind " + std::to_string(kind));
}

void save_model(const std::string& path, const Model& model) {
  const auto bytes = encode_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("failed writing " + path);
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return decode_model(bytes);
}

}  // namespace gnm
