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

#ifndef UOT_SCHEDULER_TRACE_CHECKS_HPP_
#define UOT_SCHEDULER_TRACE_CHECKS_HPP_

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "uot/plan/plan_dag.hpp"
#include "uot/scheduler/event_log.hpp"

namespace uot {

// Each check returns human-readable violations; empty means the trace holds.
using Violations = std::vector<std::string>;
using OperatorEdges = std::vector<std::pair<OperatorId, OperatorId>>;

// Every producer WorkOrderFinished precedes every consumer WorkOrderStarted.
Violations CheckWholeTableOrdering(const std::vector<SchedulerEvent> &events,
                                   const OperatorEdges &streamable_edges);

// k = 1: each BlockFilled / BlockFlushed of a producer is dispatched to its
// consumer before the producer's next block event.
Violations CheckPipeliningPromptness(const std::vector<SchedulerEvent> &events,
                                     const OperatorEdges &streamable_edges);

// A dispatch never precedes the fill of the block it consumes.
Violations CheckMonotoneAvailability(const std::vector<SchedulerEvent> &events);

// At most `threads` work orders execute at any instant.
Violations CheckWorkerConservation(const std::vector<SchedulerEvent> &events,
                                   std::size_t threads);

// A probe starts only after its build's OperatorFinished.
Violations CheckBuildProbeBarrier(const std::vector<SchedulerEvent> &events, const PlanDAG &dag);

// Timestamps strictly increase in log order.
Violations CheckTimestampOrder(const std::vector<SchedulerEvent> &events);

}  // namespace uot

#endif  // UOT_SCHEDULER_TRACE_CHECKS_HPP_
