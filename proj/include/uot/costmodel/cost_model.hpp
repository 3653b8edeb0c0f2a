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

#ifndef UOT_COSTMODEL_COST_MODEL_HPP_
#define UOT_COSTMODEL_COST_MODEL_HPP_

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace uot {

enum class Provenance { kDefault, kUser, kCalibrated };
std::string_view ProvenanceName(Provenance p);

/**
 * @brief Inputs to the extra-work model. Costs are in an abstract unit per
 *        UoT (seconds when calibrated).
 *
 * Every field carries a provenance flag so calibrated and hand-set costs are
 * never mixed without a warning.
 **/
struct CostParams {
  double R_L3 = 0.0;   // cold read of one UoT into L3
  double AR_L3 = 0.0;  // amortized sequential read of one UoT
  double W_mem = 0.0;  // write of one UoT to memory
  double IC = 0.0;     // instruction-cache miss per work order
  double M_L3 = 0.0;   // L3 miss per UoT
  double N_in_probe = 0.0;
  double N_out_select = 0.0;
  double T = 20.0;
  double B = 128.0 * 1024.0;
  double L3_size = 25e6;
  double p1 = 1.0;  // large-B default: probe input is evicted before reuse
  double p2 = 1.0;  // small-B default: instruction caches are thrashed
  double R_store = 0.0;
  double W_store = 0.0;

  static constexpr std::size_t kNumFields = 14;
  static const std::array<std::string_view, kNumFields> &FieldNames();

  std::array<Provenance, kNumFields> provenance{};

  // By name; throws InvalidParams for an unknown field.
  double Get(std::string_view field) const;
  void Set(std::string_view field, double value, Provenance provenance = Provenance::kUser);
  Provenance ProvenanceOf(std::string_view field) const;

 private:
  double *Slot(std::string_view field);
};

// Throws InvalidParams on negative costs or counts, probabilities outside
// [0, 1], non-positive B/T/L3_size, or NaN. Returns soft warnings.
std::vector<std::string> ValidateCostParams(const CostParams &params);

// min(1, 2BT / L3_size). Throws NonPositiveInput.
double PPrime1(double B, double T, double L3_size);

double ExtraCostHighUoT(const CostParams &params);
double ExtraCostLowUoT(const CostParams &params);

// High / low. The simplified form drops IC and equates the N's. Throws
// ZeroDenominator.
double CostRatio(const CostParams &params, bool simplified);

enum class UoTRegime { kHigh, kLow };
std::string_view UoTRegimeName(UoTRegime regime);
UoTRegime ParseUoTRegime(std::string_view text);

// Persistent-store variant: high = R_store*N_in + W_store*N_out, low =
// (N_out + N_in)*IC.
double ExtraCostDisk(const CostParams &params, UoTRegime regime);

// Which of the analytical assumptions hold for `params`, one line each.
std::vector<std::string> DescribeRegime(const CostParams &params);

// key=value lines; provenance travels as a trailing `# <provenance>` comment.
void WriteCostParams(std::ostream &out, const CostParams &params);
std::string FormatCostParams(const CostParams &params);
// Fields without a provenance comment are marked user-set. Throws ParseError.
CostParams ReadCostParams(std::istream &in);
CostParams ParseCostParams(const std::string &text);

}  // namespace uot

#endif  // UOT_COSTMODEL_COST_MODEL_HPP_
