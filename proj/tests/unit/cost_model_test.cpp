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

#include <cmath>
#include <random>
#include <sstream>

#include "uot/common/error.hpp"
#include "uot/costmodel/calibration.hpp"
#include "uot/costmodel/cost_model.hpp"

namespace uot {
namespace {

constexpr double kMiB = 1024.0 * 1024.0;

template <typename Fn>
ErrorCode CodeOf(Fn &&fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kParseError;
}

CostParams Zero() {
  CostParams p;
  p.p1 = 0;
  p.p2 = 0;
  return p;
}

TEST(CostModelTest, PPrime1) {
  EXPECT_EQ(PPrime1(2 * kMiB, 20, 25e6), 1.0);
  EXPECT_NEAR(PPrime1(128 * 1024, 20, 25e6), 2 * 0.131072 * 20 / 25, 1e-15);
  EXPECT_NEAR(PPrime1(128 * 1024, 20, 25e6), 0.2097, 1e-4);
  EXPECT_EQ(CodeOf([] { PPrime1(1, 0, 1); }), ErrorCode::kNonPositiveInput);
  EXPECT_EQ(CodeOf([] { PPrime1(0, 1, 1); }), ErrorCode::kNonPositiveInput);
  EXPECT_EQ(CodeOf([] { PPrime1(1, 1, -1); }), ErrorCode::kNonPositiveInput);
}

TEST(CostModelTest, HighUoTExamples) {
  EXPECT_EQ(ExtraCostHighUoT(Zero()), 0.0);
  CostParams p = Zero();
  p.W_mem = 10;
  p.AR_L3 = 2;
  p.M_L3 = 5;
  p.p1 = 0.1;
  p.N_out_select = 100;
  p.N_in_probe = 100;
  EXPECT_NEAR(ExtraCostHighUoT(p), 1250.0, 1e-12);
  p.N_in_probe = 0;
  EXPECT_EQ(ExtraCostHighUoT(p), 1000.0);
}

TEST(CostModelTest, LowUoTExamples) {
  EXPECT_EQ(ExtraCostLowUoT(Zero()), 0.0);
  CostParams p = Zero();
  p.IC = 1;
  p.p2 = 0.5;
  p.M_L3 = 5;
  p.R_L3 = 20;
  p.W_mem = 10;
  p.B = 125000;
  p.T = 20;
  p.L3_size = 25e6;
  ASSERT_NEAR(PPrime1(p.B, p.T, p.L3_size), 0.2, 1e-15);
  p.N_out_select = 100;
  p.N_in_probe = 100;
  EXPECT_NEAR(ExtraCostLowUoT(p), 2150.0, 1e-12 * 2150);

  // p2 = 0 and p'1 ~ 0: only the instruction-cache term is left.
  p.p2 = 0;
  p.B = 1e-300;
  EXPECT_NEAR(ExtraCostLowUoT(p), 200.0, 1e-9);
}

TEST(CostModelTest, CostRatio) {
  // p'1 = 1, p1 = p2 = 0: numerator AR + W, denominator R + W.
  CostParams sym = Zero();
  sym.AR_L3 = 3;
  sym.R_L3 = 3;
  sym.W_mem = 2;
  sym.B = 4 * kMiB;
  EXPECT_NEAR(CostRatio(sym, true), 1.0, 1e-12);

  CostParams p = Zero();
  p.W_mem = 4;
  p.AR_L3 = 1;
  p.R_L3 = 6;
  p.M_L3 = 2;
  p.p1 = 0.5;
  p.p2 = 0.25;
  p.IC = 3;
  p.N_in_probe = 40;
  p.N_out_select = 60;
  const double pp = PPrime1(p.B, p.T, p.L3_size);
  const double simplified = (1 + 4 + 0.5 * 2) / (0.25 * (2 + 6) + pp * (2 + 6 + 4));
  EXPECT_NEAR(CostRatio(p, true), simplified, 1e-12);
  EXPECT_NEAR(CostRatio(p, false), ExtraCostHighUoT(p) / ExtraCostLowUoT(p), 1e-12);

  CostParams zero = Zero();
  zero.AR_L3 = 1;
  zero.p2 = 1;
  EXPECT_EQ(CodeOf([&] { CostRatio(zero, true); }), ErrorCode::kZeroDenominator);
}

TEST(CostModelTest, DiskVariant) {
  CostParams p = Zero();
  p.N_in_probe = 1000;
  p.N_out_select = 1000;
  EXPECT_EQ(ExtraCostDisk(p, UoTRegime::kHigh), 0.0);
  p.R_store = 5e-3;
  p.W_store = 5e-3;
  p.IC = 100e-9;
  const double high = ExtraCostDisk(p, UoTRegime::kHigh);
  const double low = ExtraCostDisk(p, UoTRegime::kLow);
  EXPECT_NEAR(high, 10.0, 1e-12);
  EXPECT_NEAR(low, 2e-4, 1e-16);
  EXPECT_GT(high / low, 1e3);
}

TEST(CostModelTest, ValidationAndWarnings) {
  CostParams p;
  EXPECT_NO_THROW(ValidateCostParams(p));
  p.p1 = 1.5;
  EXPECT_EQ(CodeOf([&] { ValidateCostParams(p); }), ErrorCode::kInvalidParams);
  p.p1 = 1;
  p.W_mem = -1;
  EXPECT_EQ(CodeOf([&] { ValidateCostParams(p); }), ErrorCode::kInvalidParams);
  p.W_mem = std::nan("");
  EXPECT_EQ(CodeOf([&] { ValidateCostParams(p); }), ErrorCode::kInvalidParams);
  p.W_mem = 1;
  p.T = 0;
  EXPECT_EQ(CodeOf([&] { ValidateCostParams(p); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(CodeOf([&] { ExtraCostHighUoT(p); }), ErrorCode::kInvalidParams);
  p.T = 4;
  p.AR_L3 = 5;
  p.R_L3 = 1;
  EXPECT_FALSE(ValidateCostParams(p).empty());

  CostParams mixed;
  mixed.Set("R_L3", 2.0, Provenance::kCalibrated);
  mixed.Set("AR_L3", 1.0, Provenance::kUser);
  EXPECT_FALSE(ValidateCostParams(mixed).empty());
  EXPECT_EQ(CodeOf([&] { mixed.Set("bogus", 1.0); }), ErrorCode::kInvalidParams);
}

TEST(CostModelTest, ParamsRoundTrip) {
  CostParams p;
  p.Set("W_mem", 0.125, Provenance::kCalibrated);
  p.Set("IC", 1e-7);
  const CostParams q = ParseCostParams(FormatCostParams(p));
  for (std::string_view f : CostParams::FieldNames()) {
    EXPECT_EQ(q.Get(f), p.Get(f)) << f;
    EXPECT_EQ(q.ProvenanceOf(f), p.ProvenanceOf(f)) << f;
  }
  EXPECT_EQ(ParseCostParams("T = 8\n").Get("T"), 8.0);
  EXPECT_EQ(ParseCostParams("T=8\n").ProvenanceOf("T"), Provenance::kUser);
  EXPECT_EQ(CodeOf([] { ParseCostParams("T=abc\n"); }), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf([] { ParseCostParams("nope=1\n"); }), ErrorCode::kParseError);
}

CostParams RandomParams(std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  CostParams p;
  p.R_L3 = u(rng);
  p.AR_L3 = u(rng);
  p.W_mem = u(rng);
  p.IC = u(rng);
  p.M_L3 = u(rng);
  p.N_in_probe = std::floor(u(rng) * 100);
  p.N_out_select = std::floor(u(rng) * 100);
  p.T = 1 + std::floor(u(rng) * 4);
  p.B = 1024 + std::floor(prob(rng) * 4 * kMiB);
  p.p1 = prob(rng);
  p.p2 = prob(rng);
  p.R_store = u(rng);
  p.W_store = u(rng);
  return p;
}

// Both extra-cost functions scale linearly in the block counts.
TEST(CostModelPropertyTest, Linearity) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    CostParams p = RandomParams(rng);
    CostParams q = p;
    q.N_in_probe *= 2;
    q.N_out_select *= 2;
    EXPECT_NEAR(ExtraCostHighUoT(q), 2 * ExtraCostHighUoT(p), 1e-9 * (1 + ExtraCostHighUoT(q)));
    EXPECT_NEAR(ExtraCostLowUoT(q), 2 * ExtraCostLowUoT(p), 1e-9 * (1 + ExtraCostLowUoT(q)));
  }
}

TEST(CostModelPropertyTest, Monotonicity) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    const CostParams p = RandomParams(rng);
    CostParams q = p;
    q.p2 = std::min(1.0, p.p2 + 0.1);
    EXPECT_GE(ExtraCostLowUoT(q), ExtraCostLowUoT(p));
    q = p;
    q.B = p.B * 2;
    EXPECT_GE(ExtraCostLowUoT(q), ExtraCostLowUoT(p));
    EXPECT_GE(PPrime1(q.B, q.T, q.L3_size), PPrime1(p.B, p.T, p.L3_size));
    q = p;
    q.T = p.T + 1;
    EXPECT_GE(ExtraCostLowUoT(q), ExtraCostLowUoT(p));
    EXPECT_GE(PPrime1(q.B, q.T, q.L3_size), PPrime1(p.B, p.T, p.L3_size));
    const double pp = PPrime1(p.B, p.T, p.L3_size);
    EXPECT_GE(pp, 0.0);
    EXPECT_LE(pp, 1.0);
  }
}

TEST(CostModelPropertyTest, DiskDominance) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    CostParams p = RandomParams(rng);
    p.N_out_select = p.N_in_probe = 1 + std::floor(p.N_in_probe);
    if (!(p.R_store + p.W_store > 2 * p.IC)) continue;
    EXPECT_GT(ExtraCostDisk(p, UoTRegime::kHigh), ExtraCostDisk(p, UoTRegime::kLow));
  }
}

TEST(CostModelPropertyTest, HighRegimeSaturatesPPrime1) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    CostParams p = RandomParams(rng);
    p.B = p.L3_size / (2 * p.T) * (1.0 + std::uniform_real_distribution<double>(1e-9, 3)(rng));
    EXPECT_EQ(PPrime1(p.B, p.T, p.L3_size), 1.0);
  }
}

TEST(CalibrationTest, StabilityRule) {
  EXPECT_DOUBLE_EQ(CheckStability({1.0, 1.1, 0.9}, 0.2), 1.0);
  EXPECT_EQ(CodeOf([] { CheckStability({1.0, 3.0}, 0.2); }), ErrorCode::kCalibrationUnstable);
  EXPECT_EQ(CodeOf([] { CheckStability({}, 0.2); }), ErrorCode::kNonPositiveInput);
  EXPECT_EQ(CodeOf([] { CalibrateParams(0); }), ErrorCode::kNonPositiveInput);
}

TEST(CalibrationTest, SequentialReadsAreNotSlowerThanScattered) {
  CalibrationOptions o;
  o.buffer_bytes = 32u << 20;
  o.max_cv = 10.0;  // timing noise in shared sandboxes is not under test here
  const CostParams p = CalibrateParams(64 * 1024, o);
  EXPECT_GT(p.AR_L3, 0.0);
  EXPECT_GT(p.W_mem, 0.0);
  EXPECT_LE(p.AR_L3, p.R_L3);
  EXPECT_EQ(p.ProvenanceOf("R_L3"), Provenance::kCalibrated);
  EXPECT_EQ(p.ProvenanceOf("B"), Provenance::kUser);
  EXPECT_EQ(p.B, 64 * 1024);
}

}  // namespace
}  // namespace uot
