// Copyright 2026 The UoT Engine Authors.
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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "oracle/oracle.hpp"
#include "uot/operators/exact_sum.hpp"

namespace uot {
namespace {

double Sum(const std::vector<double> &values) {
  ExactSum s;
  for (double v : values) s.Add(v);
  return s.Value();
}

TEST(ExactSumTest, Examples) {
  EXPECT_EQ(Sum({}), 0.0);
  EXPECT_EQ(Sum({0.1, 0.2, 0.3}), 0.6);
  EXPECT_EQ(Sum({1e100, 1.0, -1e100}), 1.0);
  EXPECT_EQ(Sum({1.0, 1e-16, 1e-16}), 1.0000000000000002);
  EXPECT_TRUE(std::signbit(Sum({-0.0, -0.0})));
  EXPECT_FALSE(std::signbit(Sum({-0.0, 0.0})));
  const double tiny = std::numeric_limits<double>::denorm_min();
  EXPECT_EQ(Sum({tiny, tiny, tiny}), 3 * tiny);
  const double big = std::numeric_limits<double>::max();
  EXPECT_EQ(Sum({big, big, -big}), big);
  EXPECT_TRUE(std::isinf(Sum({big, big})));
  EXPECT_TRUE(std::isnan(Sum({1.0, std::nan("")})));
  EXPECT_TRUE(std::isnan(Sum({INFINITY, -INFINITY})));
  EXPECT_EQ(Sum({-INFINITY, 3.0}), -INFINITY);
  // Ties round to even.
  EXPECT_EQ(Sum({9007199254740992.0, 1.0}), 9007199254740992.0);
  EXPECT_EQ(Sum({9007199254740994.0, 1.0}), 9007199254740996.0);
  EXPECT_EQ(Sum({9007199254740992.0, 1.0, 1e-300}), 9007199254740994.0);
}

std::vector<double> NastyValues(std::mt19937_64 &rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> e(-1070, 1000);
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    switch (rng() % 4) {
      case 0: out.push_back(u(rng)); break;
      case 1: out.push_back(std::ldexp(u(rng), e(rng) / 8)); break;
      case 2: out.push_back(std::ldexp(u(rng), e(rng))); break;
      default: out.push_back(out.empty() ? 1.0 : -out[rng() % out.size()]); break;
    }
  }
  return out;
}

TEST(ExactSumPropertyTest, MatchesIndependentCorrectlyRoundedSum) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const auto values = NastyValues(rng, 1 + rng() % 200);
    EXPECT_EQ(Sum(values), oracle::CorrectlyRoundedSum(values)) << "trial " << trial;
  }
}

TEST(ExactSumPropertyTest, OrderAndMergeTreeDoNotMatter) {
  std::mt19937_64 rng(78);
  for (int trial = 0; trial < 100; ++trial) {
    auto values = NastyValues(rng, 2 + rng() % 300);
    const double reference = Sum(values);
    std::shuffle(values.begin(), values.end(), rng);
    ExactSum a, b, c;
    const std::size_t cut1 = rng() % values.size();
    const std::size_t cut2 = cut1 + rng() % (values.size() - cut1);
    for (std::size_t i = 0; i < values.size(); ++i) {
      (i < cut1 ? a : i < cut2 ? b : c).Add(values[i]);
    }
    c.Merge(a);
    b.Merge(c);
    EXPECT_EQ(b.Value(), reference);
  }
}

}  // namespace
}  // namespace uot
