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

#ifndef UOT_MEMMODEL_MEM_MODEL_HPP_
#define UOT_MEMMODEL_MEM_MODEL_HPP_

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace uot {

// Input and output of one selection. Byte quantities are doubles so the
// model can be evaluated at terabyte scale.
struct SelectionStats {
  double N = 0;    // input rows
  double N_s = 0;  // passing rows
  double C = 0;    // bytes per input tuple
  double C_s = 0;  // projected bytes per tuple
  double M = 0;    // input bytes, N * C

  // Builds stats for a table of `rows` x `tuple_bytes` with the given
  // selectivity and projectivity fractions.
  static SelectionStats FromFractions(double rows, double tuple_bytes, double selectivity,
                                      double projectivity);

  double selectivity() const { return N > 0 ? N_s / N : 0.0; }
  double projectivity() const { return C_s / C; }
};

// Throws InvalidStats.
void ValidateSelectionStats(const SelectionStats &stats);

// M * s * p.
double SelectionOutputBytes(const SelectionStats &stats);
// s * p as a fraction of the input; throws InvalidStats outside [0, 1].
double SelectionOutputFraction(double selectivity, double projectivity);

struct HashTableSpec {
  double M = 0;  // build input bytes
  double w = 0;  // bytes per build tuple
  double c = 0;  // bytes per bucket
  double f = 0.5;
};

// Throws InvalidSpec.
void ValidateHashTableSpec(const HashTableSpec &spec);

// (M / w) * (c / f).
double HashTableBytes(const HashTableSpec &spec);

// Bytes the engine's table holds after inserting ceil(M / w) entries: the
// smallest power-of-two capacity >= initial_capacity keeping the load at or
// under f, times c.
double ExactEngineHashTableBytes(const HashTableSpec &spec, std::size_t initial_capacity = 64);

// Sum of |H_i| for i = 2..n over a left-deep cascade H_1..H_n (H_1 is needed
// under either strategy).
double FootprintLowUoT(const std::vector<HashTableSpec> &cascade);
// Sum over all of H_1..H_n.
double FootprintLowUoTFull(const std::vector<HashTableSpec> &cascade);
// |sigma(R)|.
double FootprintHighUoT(const SelectionStats &leaf_selection);

enum class FootprintWinner { kLow, kHigh, kEqual };
std::string_view FootprintWinnerName(FootprintWinner w);

struct FootprintComponent {
  std::string strategy;  // LOW or HIGH
  std::string component;
  double bytes;
};

struct FootprintReport {
  double low_uot_bytes = 0;
  double high_uot_bytes = 0;
  FootprintWinner winner = FootprintWinner::kEqual;
  std::vector<FootprintComponent> components;
};

// The smaller total wins; exact ties are EQUAL.
FootprintReport CompareTotals(double low_uot_bytes, double high_uot_bytes);
FootprintReport CompareFootprints(const std::vector<HashTableSpec> &cascade,
                                  const SelectionStats &leaf_selection);

// `query,strategy,component,bytes` rows and a closing
// `query,winner,<LOW|HIGH|EQUAL>,<|low - high|>` row.
void WriteFootprintCsv(std::ostream &out, const std::string &query, const FootprintReport &report,
                       bool header = true);

}  // namespace uot

#endif  // UOT_MEMMODEL_MEM_MODEL_HPP_
