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

#include "uot/costmodel/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "uot/common/error.hpp"

namespace uot {

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kDefault:
      return "default";
    case Provenance::kUser:
      return "user";
    case Provenance::kCalibrated:
      return "calibrated";
  }
  return "?";
}

const std::array<std::string_view, CostParams::kNumFields> &CostParams::FieldNames() {
  static const std::array<std::string_view, kNumFields> names = {
      "R_L3", "AR_L3", "W_mem", "IC", "M_L3", "N_in_probe", "N_out_select",
      "T",    "B",     "L3_size", "p1", "p2", "R_store",    "W_store"};
  return names;
}

namespace {

std::size_t FieldIndex(std::string_view field) {
  const auto &names = CostParams::FieldNames();
  auto it = std::find(names.begin(), names.end(), field);
  if (it == names.end()) {
    throw Error(ErrorCode::kInvalidParams, "unknown cost parameter '" + std::string(field) + "'");
  }
  return static_cast<std::size_t>(it - names.begin());
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

double *CostParams::Slot(std::string_view field) {
  double *slots[kNumFields] = {&R_L3, &AR_L3,   &W_mem, &IC, &M_L3, &N_in_probe, &N_out_select,
                               &T,    &B,       &L3_size, &p1, &p2, &R_store,    &W_store};
  return slots[FieldIndex(field)];
}

double CostParams::Get(std::string_view field) const {
  return *const_cast<CostParams *>(this)->Slot(field);
}

void CostParams::Set(std::string_view field, double value, Provenance p) {
  *Slot(field) = value;
  provenance[FieldIndex(field)] = p;
}

Provenance CostParams::ProvenanceOf(std::string_view field) const {
  return provenance[FieldIndex(field)];
}

std::vector<std::string> ValidateCostParams(const CostParams &params) {
  for (std::string_view name : CostParams::FieldNames()) {
    const double v = params.Get(name);
    if (std::isnan(v)) throw Error(ErrorCode::kInvalidParams, std::string(name) + " is NaN");
    if (v < 0) {
      throw Error(ErrorCode::kInvalidParams, std::string(name) + " is negative");
    }
  }
  for (double p : {params.p1, params.p2}) {
    if (p > 1.0) throw Error(ErrorCode::kInvalidParams, "probability above 1");
  }
  if (params.B <= 0 || params.T <= 0 || params.L3_size <= 0) {
    throw Error(ErrorCode::kInvalidParams, "B, T and L3_size must be positive");
  }

  std::vector<std::string> warnings;
  if (params.R_L3 > 0 && !(params.AR_L3 < params.R_L3)) {
    warnings.push_back("AR_L3 >= R_L3: sequential reads are expected to be much cheaper");
  }
  bool calibrated = false;
  bool hand_set = false;
  for (std::string_view name : {"R_L3", "AR_L3", "W_mem", "IC", "M_L3"}) {
    const Provenance p = params.ProvenanceOf(name);
    calibrated |= p == Provenance::kCalibrated;
    hand_set |= p != Provenance::kCalibrated && params.Get(name) != 0.0;
  }
  if (calibrated && hand_set) {
    warnings.push_back("cost fields mix calibrated and hand-set values");
  }
  return warnings;
}

double PPrime1(double B, double T, double L3_size) {
  if (!(B > 0) || !(T > 0) || !(L3_size > 0)) {
    throw Error(ErrorCode::kNonPositiveInput, "B, T and L3_size must be positive");
  }
  return std::min(1.0, 2.0 * B * T / L3_size);
}

double ExtraCostHighUoT(const CostParams &p) {
  ValidateCostParams(p);
  return p.W_mem * p.N_out_select + p.AR_L3 * p.N_in_probe + p.p1 * p.N_in_probe * p.M_L3;
}

double ExtraCostLowUoT(const CostParams &p) {
  ValidateCostParams(p);
  const double pp1 = PPrime1(p.B, p.T, p.L3_size);
  return (p.N_out_select + p.N_in_probe) * p.IC + p.p2 * p.N_in_probe * (p.M_L3 + p.R_L3) +
         pp1 * (p.M_L3 + p.R_L3 + p.W_mem) * p.N_in_probe;
}

double CostRatio(const CostParams &p, bool simplified) {
  if (!simplified) {
    const double low = ExtraCostLowUoT(p);
    if (!(low > 0)) throw Error(ErrorCode::kZeroDenominator, "low-UoT extra cost is zero");
    return ExtraCostHighUoT(p) / low;
  }
  ValidateCostParams(p);
  const double pp1 = PPrime1(p.B, p.T, p.L3_size);
  const double den = p.p2 * (p.M_L3 + p.R_L3) + pp1 * (p.M_L3 + p.R_L3 + p.W_mem);
  if (!(den > 0)) throw Error(ErrorCode::kZeroDenominator, "ratio denominator is zero");
  return (p.AR_L3 + p.W_mem + p.p1 * p.M_L3) / den;
}

std::string_view UoTRegimeName(UoTRegime regime) {
  return regime == UoTRegime::kHigh ? "HIGH" : "LOW";
}

UoTRegime ParseUoTRegime(std::string_view text) {
  std::string t(text);
  std::transform(t.begin(), t.end(), t.begin(), ::toupper);
  if (t == "HIGH") return UoTRegime::kHigh;
  if (t == "LOW") return UoTRegime::kLow;
  throw Error(ErrorCode::kInvalidParams, "UoT regime must be HIGH or LOW, got '" + t + "'");
}

double ExtraCostDisk(const CostParams &p, UoTRegime regime) {
  ValidateCostParams(p);
  if (regime == UoTRegime::kHigh) return p.R_store * p.N_in_probe + p.W_store * p.N_out_select;
  return (p.N_out_select + p.N_in_probe) * p.IC;
}

std::vector<std::string> DescribeRegime(const CostParams &p) {
  std::vector<std::string> lines;
  const double threshold = p.L3_size / (2.0 * p.T);
  std::ostringstream s;
  s << "B " << (p.B > threshold ? ">" : "<=") << " L3_size/(2T) = " << threshold
    << (p.B > threshold ? " (large-UoT regime, p'1 = 1)" : " (p'1 < 1)");
  lines.push_back(s.str());
  lines.push_back("p'1 = " + std::to_string(PPrime1(p.B, p.T, p.L3_size)));
  lines.push_back(std::string("p2 ") + (p.p2 <= 0.01 ? "~ 0" : "not negligible") + " (" +
                  std::to_string(p.p2) + ")");
  lines.push_back(std::string("AR_L3 ") + (p.AR_L3 < p.R_L3 ? "<" : ">=") + " R_L3");
  return lines;
}

void WriteCostParams(std::ostream &out, const CostParams &params) {
  out << std::setprecision(17);
  for (std::string_view name : CostParams::FieldNames()) {
    out << name << '=' << params.Get(name) << "  # " << ProvenanceName(params.ProvenanceOf(name))
        << '\n';
  }
}

std::string FormatCostParams(const CostParams &params) {
  std::ostringstream out;
  WriteCostParams(out, params);
  return out.str();
}

CostParams ReadCostParams(std::istream &in) {
  CostParams params;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string comment;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      comment = Trim(std::string_view(line).substr(hash + 1));
      line.resize(hash);
    }
    const std::string body = Trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = Trim(std::string_view(body).substr(0, eq));
    const std::string value = Trim(std::string_view(body).substr(eq + 1));
    double v = 0;
    std::size_t used = 0;
    try {
      v = std::stod(value, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == 0 || used != value.size()) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": bad number '" + value + "'");
    }
    Provenance p = Provenance::kUser;
    if (comment == "calibrated") p = Provenance::kCalibrated;
    if (comment == "default") p = Provenance::kDefault;
    try {
      params.Set(key, v, p);
    } catch (const Error &e) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return params;
}

CostParams ParseCostParams(const std::string &text) {
  std::istringstream in(text);
  return ReadCostParams(in);
}

}  // namespace uot
