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

#ifndef UOT_OPERATORS_EXACT_SUM_HPP_
#define UOT_OPERATORS_EXACT_SUM_HPP_

#include <array>
#include <cstdint>

namespace uot {

/**
 * @brief Order-independent sum of doubles.
 *
 * Finite addends are accumulated exactly in a two's-complement fixed-point
 * integer counted in units of 2^-1074; Value() rounds the exact total once,
 * to nearest-even. Any permutation or merge tree of the same addends yields
 * the same bits.
 **/
class ExactSum {
 public:
  void Add(double v);
  void Merge(const ExactSum &other);
  double Value() const;

 private:
  // 2^-1074 .. 2^1024 needs 2098 bits; the rest absorbs carries.
  static constexpr int kLimbs = 35;

  void AddShifted(std::uint64_t mant, int shift, bool negative);
  bool Negative() const { return (limbs_[kLimbs - 1] >> 63) != 0; }

  std::array<std::uint64_t, kLimbs> limbs_{};
  bool nan_ = false;
  bool pos_inf_ = false;
  bool neg_inf_ = false;
  bool only_negative_zero_ = true;  // IEEE: -0 + -0 = -0
};

}  // namespace uot

#endif  // UOT_OPERATORS_EXACT_SUM_HPP_
