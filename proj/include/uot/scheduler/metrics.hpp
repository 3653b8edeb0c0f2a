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

#ifndef UOT_SCHEDULER_METRICS_HPP_
#define UOT_SCHEDULER_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "uot/plan/plan_dag.hpp"
#include "uot/scheduler/event_log.hpp"

namespace uot {

struct WorkOrderRecord {
  WorkOrderId id = 0;
  OperatorId op = 0;
  BlockId input_block = kInvalidBlockId;
  std::size_t worker = 0;
  std::int64_t dispatched_ns = 0;
  std::int64_t start_ns = 0;
  std::int64_t finish_ns = 0;
  std::size_t tuples_in = 0;
  std::size_t tuples_out = 0;

  std::int64_t duration_ns() const { return finish_ns - start_ns; }
};

struct OperatorStats {
  OperatorId op = 0;
  OperatorKind kind = OperatorKind::kSelect;
  std::string name;
  std::size_t work_orders = 0;
  std::int64_t first_start_ns = -1;  // -1 if the operator ran no work orders
  std::int64_t last_finish_ns = -1;
  std::int64_t finished_ns = 0;  // OperatorFinished event
  std::size_t tuples_in = 0;
  std::size_t tuples_out = 0;
  // Output blocks (filled + flushed); Select, Probe and Aggregate only.
  std::size_t blocks_produced = 0;
  std::size_t output_tuple_width = 0;
  std::size_t output_block_bytes = 0;  // blocks_produced * block size

  std::int64_t span_ns() const {
    return first_start_ns < 0 ? 0 : last_finish_ns - first_start_ns;
  }
  std::size_t output_payload_bytes() const { return tuples_out * output_tuple_width; }
};

struct ExecutionMetrics {
  std::vector<SchedulerEvent> events;
  std::vector<WorkOrderRecord> work_orders;
  std::vector<OperatorStats> operators;  // indexed by operator id
  std::int64_t query_start_ns = 0;
  std::int64_t query_end_ns = 0;
  std::size_t peak_intermediate_bytes = 0;
  std::size_t threads = 0;
  std::string policy;

  std::int64_t query_ns() const { return query_end_ns - query_start_ns; }
  const OperatorStats &op(OperatorId id) const;
};

struct DopSummary {
  std::size_t peak = 0;
  double mean = 0.0;  // time-weighted over the operator's span
};

// Step function of in-flight work orders of `op`, one point per change.
// Throws UnknownOperator.
std::vector<std::pair<std::int64_t, std::size_t>> DopTimeline(const ExecutionMetrics &metrics,
                                                              OperatorId op);
DopSummary SummarizeDop(const ExecutionMetrics &metrics, OperatorId op);

// Peak concurrently executing work orders across all operators.
std::size_t PeakTotalInFlight(const ExecutionMetrics &metrics);

// First work-order start to last work-order finish over a set of operators.
std::int64_t ChainSpanNs(const ExecutionMetrics &metrics, const std::vector<OperatorId> &ops);

std::size_t PeakIntermediateBytes(const ExecutionMetrics &metrics);

struct DurationSummary {
  std::size_t count = 0;
  double mean_ns = 0.0;
  std::int64_t p50_ns = 0;
  std::int64_t p99_ns = 0;
};

// Distribution of work-order durations for one operator.
DurationSummary SummarizeWorkOrders(const ExecutionMetrics &metrics, OperatorId op);

}  // namespace uot

#endif  // UOT_SCHEDULER_METRICS_HPP_
