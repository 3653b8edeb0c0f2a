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

#ifndef UOT_BENCH_EXPERIMENT_HPP_
#define UOT_BENCH_EXPERIMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "uot/bench/datagen.hpp"
#include "uot/plan/plan_json.hpp"
#include "uot/scheduler/metrics.hpp"
#include "uot/scheduler/scheduler.hpp"

namespace uot {

struct TableSource {
  std::string name;
  bool generated = true;
  GenTableSpec gen;  // generated tables; layout and block size set per point
  std::string file;  // loaded tables
  SchemaPtr schema;
  char delimiter = '|';
};

struct QuerySource {
  std::string name;
  nlohmann::json plan;
};

enum class EventCapture { kNone, kFirst, kAll };

struct ExperimentConfig {
  std::vector<TableSource> tables;
  std::vector<QuerySource> queries;
  std::vector<std::size_t> block_sizes = {128 * 1024, 512 * 1024, 2 * 1024 * 1024};
  std::vector<UoTPolicy> uots = {UoTPolicy::Blocks(1), UoTPolicy::WholeTable()};
  std::vector<Layout> layouts = {Layout::kRowStore};
  std::vector<std::size_t> threads = {1};
  std::size_t repetitions = 10;
  std::string output_dir = "uot_out";
  std::map<std::string, std::vector<OperatorId>> chains;
  std::size_t buffer_cap = 0;
  std::uint64_t seed = 0;
  BuildOrdering build_ordering = BuildOrdering::kStrategyAware;
  bool prefer_consumers = true;
  EventCapture events = EventCapture::kFirst;

  // Throws ConfigError.
  void Validate() const;
};

// Relative file and plan paths resolve against `base_dir`. Throws
// ConfigError / ParseError.
ExperimentConfig ParseExperimentConfig(const nlohmann::json &doc, const std::string &base_dir);
ExperimentConfig LoadExperimentConfig(const std::string &path);

// Creates every configured table in `storage`; returns the canonical
// predicate/projection of the generated ones.
CanonicalQueries LoadTables(StorageManager &storage, const ExperimentConfig &config,
                            std::size_t block_size, Layout layout);

struct ConfigPoint {
  std::string query;
  std::size_t block_size = 0;
  UoTPolicy uot = UoTPolicy::Blocks(1);
  Layout layout = Layout::kRowStore;
  std::size_t threads = 1;

  std::string Label() const;
};

struct OperatorRun {
  OperatorStats stats;
  DurationSummary work_orders;
  DopSummary dop;
};

struct RunRecord {
  ConfigPoint point;
  std::size_t repetition = 0;
  std::int64_t query_ns = 0;
  std::size_t peak_intermediate_bytes = 0;
  std::vector<OperatorRun> operators;
  std::map<std::string, std::int64_t> chain_ns;
  std::size_t result_rows = 0;
};

struct PointError {
  ConfigPoint point;
  std::string code;
  std::string message;
};

struct PointSummary {
  ConfigPoint point;
  std::vector<std::size_t> runs;       // indices into SweepResult::records
  std::vector<std::size_t> best_runs;  // fastest ceil(0.3 * repetitions)
  double mean_best_ns = 0;
  double mean_all_ns = 0;
  std::int64_t min_ns = 0;
  std::int64_t max_ns = 0;
};

struct SweepResult {
  std::vector<RunRecord> records;
  std::vector<PointError> errors;
  std::vector<PointSummary> summaries;
  // Query -> sorted result rows (with a header line first).
  std::map<std::string, std::vector<std::string>> results;
  std::string events;  // events.log contents
  std::map<std::string, std::vector<OperatorId>> chains;
  std::vector<std::string> check_failures;
};

struct SweepOptions {
  // Verify trace invariants and cross-point result equality.
  bool check = false;
  std::ostream *progress = nullptr;
};

// ceil(0.3 * repetitions), at least 1.
std::size_t BestSubsetSize(std::size_t repetitions);
// Mean of the smallest BestSubsetSize(values.size()) values.
double BestSubsetMean(std::vector<double> values);

// Runs every (query, block size, layout, UoT, threads) point `repetitions`
// times, one query at a time. An engine error aborts that point only.
SweepResult RunSweep(const ExperimentConfig &config, const SweepOptions &options = {});

// Writes the sweep CSVs, events.log and result_<query>.csv into `dir`.
void WriteSweepOutputs(const SweepResult &result, const std::string &dir);

void WriteQueryTimesCsv(std::ostream &out, const SweepResult &result);
void WriteChainTimesCsv(std::ostream &out, const SweepResult &result);
void WriteWorkOrderTimesCsv(std::ostream &out, const SweepResult &result);
void WriteDopCsv(std::ostream &out, const SweepResult &result);
void WriteMemoryCsv(std::ostream &out, const SweepResult &result);
void WriteErrorsCsv(std::ostream &out, const SweepResult &result);

struct OperatorSplitRow {
  std::string query;
  std::size_t block_size = 0;
  std::string layout;
  std::size_t threads = 0;
  OperatorId op = 0;
  std::string name;
  double span_ns = 0;
  double share = 0;
  std::string rank;  // "dominant", "second" or empty
};

// Operator spans as fractions of their sum, per query and point. Refuses
// (RefusesOverlappedRuns) unless every record ran under WHOLE_TABLE.
std::vector<OperatorSplitRow> ReportOperatorSplit(const std::vector<RunRecord> &records);
// Same, from the operator rows of a chain_times.csv.
std::vector<OperatorSplitRow> ReportOperatorSplitFromCsv(std::istream &chain_times);
void WriteOperatorSplitCsv(std::ostream &out, const std::vector<OperatorSplitRow> &rows);

}  // namespace uot

#endif  // UOT_BENCH_EXPERIMENT_HPP_
