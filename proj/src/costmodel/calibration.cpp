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

#include "uot/costmodel/calibration.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <memory>
#include <numeric>
#include <random>

#include "uot/common/error.hpp"

namespace uot {

namespace {

constexpr std::size_t kLine = 64;

double Seconds(std::chrono::steady_clock::time_point a, std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

// Keeps the optimizer from discarding reads.
volatile std::uint64_t g_sink = 0;

}  // namespace

double CheckStability(const std::vector<double> &samples, double max_cv) {
  if (samples.empty()) throw Error(ErrorCode::kNonPositiveInput, "no samples");
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  if (!(mean > 0)) throw Error(ErrorCode::kNonPositiveInput, "non-positive mean sample");
  double var = 0;
  for (double s : samples) var += (s - mean) * (s - mean);
  const double cv = std::sqrt(var / n) / mean;
  if (cv > max_cv) {
    throw Error(ErrorCode::kCalibrationUnstable,
                "coefficient of variation " + std::to_string(cv) + " exceeds " +
                    std::to_string(max_cv));
  }
  return mean;
}

CostParams CalibrateParams(std::size_t block_size, const CalibrationOptions &options) {
  if (block_size == 0) throw Error(ErrorCode::kNonPositiveInput, "block size is 0");
  if (options.repetitions == 0) throw Error(ErrorCode::kNonPositiveInput, "repetitions is 0");

  const std::size_t bytes = std::max(options.buffer_bytes, block_size) / kLine * kLine;
  const double blocks = static_cast<double>(bytes) / static_cast<double>(block_size);
  auto buffer = std::make_unique<std::uint64_t[]>(bytes / 8);
  std::memset(buffer.get(), 1, bytes);

  std::vector<std::uint32_t> lines(bytes / kLine);
  std::iota(lines.begin(), lines.end(), 0u);
  std::shuffle(lines.begin(), lines.end(), std::mt19937_64(42));

  std::vector<double> seq, rnd, wr;
  for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
    std::uint64_t acc = 0;
    auto t0 = std::chrono::steady_clock::now();
    for (std::size_t i = 0; i < bytes / 8; ++i) acc += buffer[i];
    auto t1 = std::chrono::steady_clock::now();
    for (std::uint32_t line : lines) {
      const std::uint64_t *p = buffer.get() + line * (kLine / 8);
      for (std::size_t w = 0; w < kLine / 8; ++w) acc += p[w];
    }
    auto t2 = std::chrono::steady_clock::now();
    std::memset(buffer.get(), static_cast<int>(rep & 0x7f), bytes);
    acc += buffer[rep % (bytes / 8)];
    auto t3 = std::chrono::steady_clock::now();
    g_sink = g_sink + acc;
    seq.push_back(Seconds(t0, t1) / blocks);
    rnd.push_back(Seconds(t1, t2) / blocks);
    wr.push_back(Seconds(t2, t3) / blocks);
  }

  CostParams params;
  params.Set("AR_L3", CheckStability(seq, options.max_cv), Provenance::kCalibrated);
  params.Set("R_L3", CheckStability(rnd, options.max_cv), Provenance::kCalibrated);
  params.Set("W_mem", CheckStability(wr, options.max_cv), Provenance::kCalibrated);
  params.Set("B", static_cast<double>(block_size), Provenance::kUser);
  return params;
}

}  // namespace uot
