// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <set>
#include <vector>

#include <doctest.h>

#include "interp_cert/random.h"

namespace interp_cert {
namespace {

TEST_CASE("streams are reproducible and keyed") {
  Rng a(5), b(5), c(6);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t x = a.Next();
    CHECK(x == b.Next());
    differs = differs || x != c.Next();
  }
  CHECK(differs);
  CHECK(DeriveKey(1, "data") == DeriveKey(1, "data"));
  CHECK(DeriveKey(1, "data") != DeriveKey(1, "split"));
  CHECK(DeriveKey(1, std::uint64_t{0}) != DeriveKey(1, std::uint64_t{1}));
}

TEST_CASE("children do not advance the parent") {
  Rng r(9);
  const std::uint64_t before = r.counter();
  Rng child = r.Child("x");
  (void)child.Next();
  CHECK(r.counter() == before);
  CHECK(Rng(9).Child(3).Next() == Rng(DeriveKey(9, std::uint64_t{3})).Next());
}

TEST_CASE("uniform and normal moments") {
  Rng r(11);
  const int n = 200000;
  double su = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.Uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    const double z = r.Normal();
    sn += z;
    sn2 += z * z;
  }
  CHECK(std::fabs(su / n - 0.5) < 5 * std::sqrt(1.0 / 12 / n));
  CHECK(std::fabs(sn / n) < 5 / std::sqrt(n));
  CHECK(std::fabs(sn2 / n - 1.0) < 5 * std::sqrt(2.0 / n));
}

TEST_CASE("uniform integers cover the range evenly") {
  Rng r(12);
  std::vector<int> counts(7, 0);
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t v = r.UniformInt(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  for (int c : counts) CHECK(std::abs(c - n / 7) < 5 * std::sqrt(n / 7.0));
}

TEST_CASE("sampling without replacement") {
  Rng r(13);
  for (int k = 0; k <= 20; ++k) {
    const std::vector<int> s = r.SampleWithoutReplacement(20, k);
    CHECK(static_cast<int>(s.size()) == k);
    CHECK(std::set<int>(s.begin(), s.end()).size() == s.size());
    for (int v : s) CHECK((v >= 0 && v < 20));
  }
  std::vector<int> values = {0, 1, 2, 3, 4, 5};
  Rng(14).Shuffle(std::span<int>(values));
  CHECK(std::set<int>(values.begin(), values.end()).size() == 6);
}

}  // namespace
}  // namespace interp_cert
