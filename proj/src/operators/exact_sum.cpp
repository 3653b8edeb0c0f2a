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

#include "uot/operators/exact_sum.hpp"

#include <cmath>
#include <limits>

namespace uot {

void ExactSum::AddShifted(std::uint64_t mant, int shift, bool negative) {
  using u128 = unsigned __int128;
  const int limb = shift / 64;
  const int off = shift % 64;
  const std::uint64_t part[2] = {mant << off, off == 0 ? 0 : mant >> (64 - off)};
  if (!negative) {
    u128 carry = 0;
    for (int i = limb; i < kLimbs && (i < limb + 2 || carry != 0); ++i) {
      const u128 acc = u128{limbs_[i]} + (i < limb + 2 ? part[i - limb] : 0) + carry;
      limbs_[i] = static_cast<std::uint64_t>(acc);
      carry = acc >> 64;
    }
  } else {
    std::uint64_t borrow = 0;
    for (int i = limb; i < kLimbs && (i < limb + 2 || borrow != 0); ++i) {
      const u128 sub = u128{i < limb + 2 ? part[i - limb] : 0} + borrow;
      borrow = u128{limbs_[i]} < sub ? 1 : 0;
      limbs_[i] = static_cast<std::uint64_t>(u128{limbs_[i]} - sub);
    }
  }
}

void ExactSum::Add(double v) {
  if (std::isnan(v)) {
    nan_ = true;
    return;
  }
  if (std::isinf(v)) {
    (v > 0 ? pos_inf_ : neg_inf_) = true;
    return;
  }
  if (!(v == 0 && std::signbit(v))) only_negative_zero_ = false;
  if (v == 0) return;
  int exp = 0;
  const double m = std::frexp(std::fabs(v), &exp);
  std::uint64_t mant = static_cast<std::uint64_t>(std::ldexp(m, 53));
  int shift = exp - 53 + 1074;
  if (shift < 0) {  // subnormal: the dropped bits are zero
    mant >>= -shift;
    shift = 0;
  }
  AddShifted(mant, shift, v < 0);
}

void ExactSum::Merge(const ExactSum &other) {
  unsigned __int128 carry = 0;
  for (int i = 0; i < kLimbs; ++i) {
    const unsigned __int128 acc = static_cast<unsigned __int128>(limbs_[i]) + other.limbs_[i] + carry;
    limbs_[i] = static_cast<std::uint64_t>(acc);
    carry = acc >> 64;
  }
  nan_ |= other.nan_;
  pos_inf_ |= other.pos_inf_;
  neg_inf_ |= other.neg_inf_;
  only_negative_zero_ &= other.only_negative_zero_;
}

double ExactSum::Value() const {
  if (nan_ || (pos_inf_ && neg_inf_)) return std::numeric_limits<double>::quiet_NaN();
  if (pos_inf_) return std::numeric_limits<double>::infinity();
  if (neg_inf_) return -std::numeric_limits<double>::infinity();

  const bool negative = Negative();
  std::array<std::uint64_t, kLimbs> mag = limbs_;
  if (negative) {
    std::uint64_t carry = 1;
    for (auto &l : mag) {
      l = ~l + carry;
      carry = (carry != 0 && l == 0) ? 1 : 0;
    }
  }
  int top = kLimbs - 1;
  while (top >= 0 && mag[top] == 0) --top;
  if (top < 0) return only_negative_zero_ ? -0.0 : 0.0;
  const int h = top * 64 + (63 - __builtin_clzll(mag[top]));

  auto bit_window = [&](int low) {  // 64 bits starting at bit `low`
    std::uint64_t w = 0;
    for (int b = 0; b < 64; ++b) {
      const int pos = low + b;
      if (pos < 0) continue;
      if ((mag[pos / 64] >> (pos % 64)) & 1) w |= std::uint64_t{1} << b;
    }
    return w;
  };

  double result;
  if (h <= 52) {
    result = std::ldexp(static_cast<double>(mag[0]), -1074);
  } else {
    const int low = h - 63;
    const std::uint64_t w = bit_window(low);
    bool sticky = false;
    if (low > 0) {
      sticky = (mag[low / 64] & ((std::uint64_t{1} << (low % 64)) - 1)) != 0;
      for (int i = 0; i < low / 64 && !sticky; ++i) sticky = mag[i] != 0;
    }
    std::uint64_t mant = w >> 11;
    const std::uint64_t rem = w & 0x7FF;
    constexpr std::uint64_t kHalf = 0x400;
    if (rem > kHalf || (rem == kHalf && (sticky || (mant & 1) != 0))) ++mant;
    result = std::ldexp(static_cast<double>(mant), h - 52 - 1074);
  }
  return negative ? -result : result;
}

}  // namespace uot
