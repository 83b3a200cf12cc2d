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


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>

#include "gnm/errors.hpp"
#include "gnm/model_file.hpp"
#include "gnm/rng.hpp"

using namespace gnm;

namespace fs = std::filesystem;

namespace {

using Bytes = std::vector<std::uint8_t>;

Model xor_gnm(std::uint64_t seed) {
  ModelConfig mc;
  mc.kind = ModelKind::gnm;
  mc.nodes = 50;
  mc.layers = 2;
  Rng rng(seed);
  return build_model(mc, 2, 1, rng);
}

void reseal(Bytes& b) {
  const std::uint64_t h = fnv1a(std::span(b.data(), b.size() - 8));
  for (int i = 0; i < 8; ++i) b[b.size() - 8 + i] = static_cast<std::uint8_t>(h >> (8 * i));
}

Bytes read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("gnm_model_file_" + std::to_string(Rng(std::random_device{}()).next_u64()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("fnv1a reference values") {
  CHECK(fnv1a({}) == 0xcbf29ce484222325ULL);
  const Bytes a{'a'};
  CHECK(fnv1a(a) == 0xaf63dc4c8601ec8cULL);
  const Bytes foobar{'f', 'o', 'o', 'b', 'a', 'r'};
  CHECK(fnv1a(foobar) == 0x85944171f73967e8ULL);
}

TEST_CASE("gnm round trip") {
  const Model m = xor_gnm(1);
  const Bytes b = encode_model(m);
  CHECK(b.size() == 40032);
  CHECK(std::memcmp(b.data(), "GNM1", 4) == 0);
  const Model back = decode_model(b);
  REQUIRE(std::holds_alternative<GnmModel>(back));
  CHECK(std::get<GnmModel>(back).adjacency == std::get<GnmModel>(m).adjacency);
  CHECK(std::get<GnmModel>(back).activation == std::get<GnmModel>(m).activation);
  CHECK(encode_model(back) == b);
}

TEST_CASE("mlp round trip") {
  ModelConfig mc;
  mc.kind = ModelKind::mlp;
  mc.layers = 3;
  mc.hidden = {7, 4};
  mc.activation = Activation::identity;
  Rng rng(2);
  const Model m = build_model(mc, 3, 2, rng);
  const Bytes b = encode_model(m);
  const Model back = decode_model(b);
  REQUIRE(std::holds_alternative<MlpModel>(back));
  const auto& p = std::get<MlpModel>(back);
  CHECK(p.spec.widths == std::vector<std::size_t>{3, 7, 4, 2});
  CHECK(p.spec.weights == std::get<MlpModel>(m).spec.weights);
  CHECK(p.spec.biases == std::get<MlpModel>(m).spec.biases);
  CHECK(p.activation == Activation::identity);
  CHECK(encode_model(back) == b);
}

TEST_CASE("save, load, save is byte identical") {
  TempDir dir;
  const Model m = xor_gnm(3);
  save_model((dir.path / "a.gnm").string(), m);
  save_model((dir.path / "b.gnm").string(), load_model((dir.path / "a.gnm").string()));
  CHECK(read_file(dir.path / "a.gnm") == read_file(dir.path / "b.gnm"));
  CHECK(fs::file_size(dir.path / "a.gnm") == 40032);
  CHECK_THROWS(load_model((dir.path / "missing.gnm").string()));
}

TEST_CASE("corruption is rejected") {
  const Bytes good = encode_model(xor_gnm(4));
  for (std::size_t pos : {std::size_t{0}, std::size_t{5}, std::size_t{9}, std::size_t{30},
                          good.size() / 2, good.size() - 9, good.size() - 1}) {
    Bytes bad = good;
    bad[pos] ^= 0x10;
    CHECK_THROWS_AS(decode_model(bad), FormatError);
  }
  CHECK_THROWS_AS(decode_model(Bytes(good.begin(), good.end() - 1)), FormatError);
  CHECK_THROWS_AS(decode_model(Bytes(good.begin(), good.begin() + 10)), FormatError);
  CHECK_THROWS_AS(decode_model(Bytes{}), FormatError);

  Bytes extra = good;
  extra.insert(extra.end() - 8, 0);
  reseal(extra);
  CHECK_THROWS_AS(decode_model(extra), FormatError);
}

TEST_CASE("version and invariant checks survive a valid checksum") {
  const Bytes good = encode_model(xor_gnm(5));
  Bytes version = good;
  version[4] = 2;
  reseal(version);
  CHECK_THROWS_AS(decode_model(version), FormatError);

  Bytes kind = good;
  kind[6] = 9;
  reseal(kind);
  CHECK_THROWS_AS(decode_model(kind), FormatError);

  // bias row sits at node 48 of step 1; overwrite its first weight
  Bytes bias = good;
  const std::size_t off = 24 + 8 * (48 * 50);
  const double one = 1.0;
  std::memcpy(bias.data() + off, &one, 8);
  reseal(bias);
  CHECK_THROWS_AS(decode_model(bias), FormatError);
}
