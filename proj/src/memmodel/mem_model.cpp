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

#include "uot/memmodel/mem_model.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "uot/common/error.hpp"

namespace uot {

SelectionStats SelectionStats::FromFractions(double rows, double tuple_bytes, double selectivity,
                                             double projectivity) {
  SelectionStats s;
  s.N = rows;
  s.N_s = rows * selectivity;
  s.C = tuple_bytes;
  s.C_s = tuple_bytes * projectivity;
  s.M = rows * tuple_bytes;
  ValidateSelectionStats(s);
  return s;
}

void ValidateSelectionStats(const SelectionStats &s) {
  auto bad = [](const std::string &why) { throw Error(ErrorCode::kInvalidStats, why); };
  if (!(s.N >= 0) || !(s.N_s >= 0) || s.N_s > s.N) bad("need 0 <= N_s <= N");
  if (!(s.C > 0) || !(s.C_s > 0) || s.C_s > s.C) bad("need 0 < C_s <= C");
  const double expect = s.N * s.C;
  if (!(std::fabs(s.M - expect) <= 1e-9 * std::max(1.0, expect))) bad("M must equal N * C");
}

double SelectionOutputBytes(const SelectionStats &s) {
  ValidateSelectionStats(s);
  if (s.N == 0) return 0.0;
  return s.M * (s.N_s / s.N) * (s.C_s / s.C);
}

double SelectionOutputFraction(double selectivity, double projectivity) {
  if (!(selectivity >= 0 && selectivity <= 1) || !(projectivity > 0 && projectivity <= 1)) {
    throw Error(ErrorCode::kInvalidStats, "selectivity in [0,1] and projectivity in (0,1]");
  }
  return selectivity * projectivity;
}

void ValidateHashTableSpec(const HashTableSpec &h) {
  if (!(h.w > 0) || !(h.c > 0)) throw Error(ErrorCode::kInvalidSpec, "w and c must be positive");
  if (!(h.f > 0 && h.f <= 1)) throw Error(ErrorCode::kInvalidSpec, "load factor must be in (0,1]");
  if (!(h.M >= 0)) throw Error(ErrorCode::kInvalidSpec, "M must be non-negative");
}

double HashTableBytes(const HashTableSpec &h) {
  ValidateHashTableSpec(h);
  return (h.M / h.w) * (h.c / h.f);
}

double ExactEngineHashTableBytes(const HashTableSpec &h, std::size_t initial_capacity) {
  ValidateHashTableSpec(h);
  const double entries = std::ceil(h.M / h.w);
  double capacity = 1;
  while (capacity < static_cast<double>(initial_capacity)) capacity *= 2;
  while (entries > h.f * capacity) capacity *= 2;
  return capacity * h.c;
}

double FootprintLowUoT(const std::vector<HashTableSpec> &cascade) {
  double total = 0;
  for (std::size_t i = 1; i < cascade.size(); ++i) total += HashTableBytes(cascade[i]);
  return total;
}

double FootprintLowUoTFull(const std::vector<HashTableSpec> &cascade) {
  double total = 0;
  for (const HashTableSpec &h : cascade) total += HashTableBytes(h);
  return total;
}

double FootprintHighUoT(const SelectionStats &leaf_selection) {
  return SelectionOutputBytes(leaf_selection);
}

std::string_view FootprintWinnerName(FootprintWinner w) {
  switch (w) {
    case FootprintWinner::kLow:
      return "LOW";
    case FootprintWinner::kHigh:
      return "HIGH";
    case FootprintWinner::kEqual:
      return "EQUAL";
  }
  return "?";
}

FootprintReport CompareTotals(double low_uot_bytes, double high_uot_bytes) {
  FootprintReport r;
  r.low_uot_bytes = low_uot_bytes;
  r.high_uot_bytes = high_uot_bytes;
  if (low_uot_bytes < high_uot_bytes) {
    r.winner = FootprintWinner::kLow;
  } else if (high_uot_bytes < low_uot_bytes) {
    r.winner = FootprintWinner::kHigh;
  }
  return r;
}

FootprintReport CompareFootprints(const std::vector<HashTableSpec> &cascade,
                                  const SelectionStats &leaf_selection) {
  FootprintReport r = CompareTotals(FootprintLowUoT(cascade), FootprintHighUoT(leaf_selection));
  for (std::size_t i = 1; i < cascade.size(); ++i) {
    r.components.push_back({"LOW", "H" + std::to_string(i + 1), HashTableBytes(cascade[i])});
  }
  r.components.push_back({"HIGH", "sigma(R)", r.high_uot_bytes});
  return r;
}

void WriteFootprintCsv(std::ostream &out, const std::string &query, const FootprintReport &report,
                       bool header) {
  if (header) out << "query,strategy,component,bytes\n";
  out << std::setprecision(17);
  for (const FootprintComponent &c : report.components) {
    out << query << ',' << c.strategy << ',' << c.component << ',' << c.bytes << '\n';
  }
  out << query << ",LOW,total," << report.low_uot_bytes << '\n';
  out << query << ",HIGH,total," << report.high_uot_bytes << '\n';
  out << query << ",winner," << FootprintWinnerName(report.winner) << ','
      << std::fabs(report.low_uot_bytes - report.high_uot_bytes) << '\n';
}

}  // namespace uot
