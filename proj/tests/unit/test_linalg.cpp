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

#include <cmath>

#include "gnm/errors.hpp"
#include "gnm/linalg.hpp"
#include "gnm/rng.hpp"

using namespace gnm;

namespace {

Vector random_vector(Rng& rng, std::size_t n) {
  Vector v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

double max_rel_diff(const Vector& a, const Vector& b) {
  double scale = 0.0;
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    scale = std::max(scale, std::abs(b[i]));
    diff = std::max(diff, std::abs(a[i] - b[i]));
  }
  return diff / std::max(scale, 1e-300);
}

}  // namespace

TEST_CASE("matvec examples") {
  CHECK(matvec(Matrix::identity(3), Vector{1, 2, 3}) == Vector{1, 2, 3});
  CHECK(matvec(Matrix{{1, 2}, {3, 4}}, Vector{1, 1}) == Vector{3, 7});
  const Vector y = matvec(Matrix{{0, 0}, {5, 1}}, Vector{2, 3});
  CHECK(y[0] == 0.0);
  CHECK(y[1] == 13.0);
  CHECK_THROWS_AS(matvec(Matrix(2, 3), Vector(2)), ShapeError);
}

TEST_CASE("matmul examples") {
  const Matrix a{{1, 2}, {3, 4}};
  CHECK(matmul(a, Matrix::identity(2)) == a);
  CHECK(matmul(a, Matrix{{1}, {1}}) == Matrix{{3}, {7}});
  CHECK(matmul(Matrix(2, 2), a) == Matrix(2, 2));
  CHECK_THROWS_AS(matmul(Matrix(2, 3), Matrix(2, 3)), ShapeError);
}

TEST_CASE("transposed products agree with explicit transposes") {
  Rng rng(5);
  const Matrix a = rng_uniform(rng, -1, 1, 4, 3);
  const Matrix b = rng_uniform(rng, -1, 1, 4, 5);
  const Matrix c = rng_uniform(rng, -1, 1, 6, 3);
  const Matrix atb = matmul_at_b(a, b);
  const Matrix ref1 = matmul(transpose(a), b);
  const Matrix abt = matmul_a_bt(a, c);
  const Matrix ref2 = matmul(a, transpose(c));
  for (std::size_t i = 0; i < atb.size(); ++i) CHECK(atb.span()[i] == doctest::Approx(ref1.span()[i]).epsilon(1e-14));
  for (std::size_t i = 0; i < abt.size(); ++i) CHECK(abt.span()[i] == doctest::Approx(ref2.span()[i]).epsilon(1e-14));
}

TEST_CASE("relu and its gradient") {
  CHECK(relu(Vector{-1, 0, 2}) == Vector{0, 0, 2});
  CHECK(relu_grad(Vector{-1, 0, 2}) == Vector{0, 0, 1});
  Rng rng(1);
  const Vector x = random_vector(rng, 50);
  CHECK(relu(relu(x)) == relu(x));
}

TEST_CASE("matvec is linear") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t r = 1 + rng.below(12);
    const std::size_t c = 1 + rng.below(12);
    const Matrix a = rng_uniform(rng, -2, 2, r, c);
    const Vector x = random_vector(rng, c);
    const Vector y = random_vector(rng, c);
    const double alpha = rng.uniform(-3, 3);
    const double beta = rng.uniform(-3, 3);
    Vector combo(c);
    for (std::size_t i = 0; i < c; ++i) combo[i] = alpha * x[i] + beta * y[i];
    const Vector ax = matvec(a, x);
    const Vector ay = matvec(a, y);
    Vector rhs(r);
    for (std::size_t i = 0; i < r; ++i) rhs[i] = alpha * ax[i] + beta * ay[i];
    CHECK(max_rel_diff(matvec(a, combo), rhs) <= 1e-12);
  }
}

TEST_CASE("matmul composes with matvec") {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t p = 1 + rng.below(10);
    const std::size_t q = 1 + rng.below(10);
    const std::size_t s = 1 + rng.below(10);
    const Matrix a = rng_uniform(rng, -1, 1, p, q);
    const Matrix b = rng_uniform(rng, -1, 1, q, s);
    const Vector x = random_vector(rng, s);
    CHECK(max_rel_diff(matvec(matmul(a, b), x), matvec(a, matvec(b, x))) <= 1e-10);
  }
}

TEST_CASE("rng_uniform") {
  Rng a(42);
  Rng b(42);
  CHECK(rng_uniform(a, -1, 1, 7, 9) == rng_uniform(b, -1, 1, 7, 9));
  CHECK(rng_uniform(a, 0, 0, 3, 3) == Matrix(3, 3));
  CHECK_THROWS(rng_uniform(a, 1, 0, 2, 2));
  const Matrix m = rng_uniform(a, 0, 1, 1000, 100);
  double sum = 0.0;
  for (double v : m.span()) {
    CHECK((v >= 0.0 && v < 1.0));
    sum += v;
  }
  CHECK(std::abs(sum / 1e5 - 0.5) < 0.01);
}

TEST_CASE("rng streams are reproducible") {
  Rng a(2026);
  Rng b(2026);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
  // xoshiro256** seeded through splitmix64, values from a Python port.
  Rng z(0);
  CHECK(z.next_u64() == 0x99ec5f36cb75f2b4ULL);
  CHECK(z.next_u64() == 0xbf6e1f784956452aULL);
  CHECK(z.next_u64() == 0x1a5f849d4933e6e0ULL);
  Rng y(2026);
  CHECK(y.next_u64() == 0x92e011592e98ae15ULL);
  CHECK(Rng(1).next_u64() != Rng(2).next_u64());
  CHECK(a.fork(3).next_u64() == b.fork(3).next_u64());
  CHECK(a.fork(3).next_u64() != a.fork(4).next_u64());
}

TEST_CASE("rng normal moments") {
  Rng rng(9);
  double s1 = 0.0;
  double s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double v = rng.normal();
    s1 += v;
    s2 += v * v;
  }
  CHECK(std::abs(s1 / n) < 0.01);
  CHECK(std::abs(s2 / n - 1.0) < 0.02);
}

TEST_CASE("rng below stays in range") {
  Rng rng(3);
  std::vector<int> counts(7);
  for (int i = 0; i < 70000; ++i) ++counts[rng.below(7)];
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}
