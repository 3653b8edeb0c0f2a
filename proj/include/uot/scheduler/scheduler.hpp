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

#ifndef UOT_SCHEDULER_SCHEDULER_HPP_
#define UOT_SCHEDULER_SCHEDULER_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

#include "uot/plan/plan_dag.hpp"
#include "uot/scheduler/metrics.hpp"
#include "uot/scheduler/uot_policy.hpp"
#include "uot/storage/storage_manager.hpp"

namespace uot {

// When build-side chains are allowed to start.
enum class BuildOrdering {
  // Finite k: a chain starts only once every hash table it will probe is
  // sealed. WHOLE_TABLE: a build chain starts once its probe's input is fully
  // materialized, so one join runs at a time.
  kStrategyAware,
  // Everything starts immediately; probe input waits for its build.
  kEager,
};

std::string_view BuildOrderingName(BuildOrdering ordering);
BuildOrdering ParseBuildOrdering(std::string_view text);

struct SchedulerOptions {
  UoTPolicy policy = UoTPolicy::Blocks(1);
  std::size_t threads = 1;
  std::size_t block_size_bytes = 128 * 1024;  // temporary blocks
  // Ready work orders of later operators in topological order go first;
  // otherwise plain FIFO.
  bool prefer_consumers = true;
  BuildOrdering build_ordering = BuildOrdering::kStrategyAware;
  std::map<OperatorId, std::size_t> dop_caps;  // absent = uncapped
  // Non-zero: shuffle work orders within each release batch.
  std::uint64_t seed = 0;
  // Temporary table receiving the sink's output. An existing temporary table
  // of this name is replaced.
  std::string result_table_name = "result";
};

struct QueryResult {
  const Table *result_table = nullptr;
  ExecutionMetrics metrics;
};

// Executes `dag` to completion. Intermediate temporary tables are dropped
// before returning, including on error. Throws ConfigError on T = 0 and
// propagates operator errors (OutOfMemoryBudget among them).
QueryResult RunQuery(StorageManager &storage, const PlanDAG &dag, const SchedulerOptions &options);

}  // namespace uot

#endif  // UOT_SCHEDULER_SCHEDULER_HPP_
