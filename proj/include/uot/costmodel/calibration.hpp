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

#ifndef UOT_COSTMODEL_CALIBRATION_HPP_
#define UOT_COSTMODEL_CALIBRATION_HPP_

#include <cstddef>
#include <vector>

#include "uot/costmodel/cost_model.hpp"

namespace uot {

struct CalibrationOptions {
  std::size_t repetitions = 5;
  double max_cv = 0.20;
  // Working set; should comfortably exceed the last-level cache.
  std::size_t buffer_bytes = 64u << 20;
};

// Mean of `samples`; throws CalibrationUnstable if stddev/mean > max_cv and
// NonPositiveInput on an empty or non-positive set.
double CheckStability(const std::vector<double> &samples, double max_cv);

/**
 * @brief Estimates AR_L3, R_L3 and W_mem (seconds per block of
 *        `block_size` bytes) from microbenchmarks.
 *
 * AR_L3 scans blocks sequentially, R_L3 visits the same cache lines in a
 * random order, W_mem writes blocks out. Everything else is left at its
 * default. Results are only meaningful on an otherwise idle machine.
 * Throws NonPositiveInput for a zero block size and CalibrationUnstable.
 **/
CostParams CalibrateParams(std::size_t block_size, const CalibrationOptions &options = {});

}  // namespace uot

#endif  // UOT_COSTMODEL_CALIBRATION_HPP_
