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

#include "uot/scheduler/trace_checks.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

namespace uot {

namespace {

bool IsBlockEvent(EventKind kind) {
  return kind == EventKind::kBlockFilled || kind == EventKind::kBlockFlushed;
}

std::string Describe(const SchedulerEvent &e) {
  std::string s = std::string(EventKindName(e.kind)) + "@" + std::to_string(e.timestamp_ns) +
                  " op " + std::to_string(e.op);
  if (e.work_order) s += " wo " + std::to_string(*e.work_order);
  if (e.block) s += " block " + std::to_string(*e.block);
  return s;
}

}  // namespace

Violations CheckWholeTableOrdering(const std::vector<SchedulerEvent> &events,
                                   const OperatorEdges &streamable_edges) {
  constexpr std::int64_t kNone = std::numeric_limits<std::int64_t>::min();
  std::map<OperatorId, std::int64_t> last_finish;
  std::map<OperatorId, std::int64_t> first_start;
  for (const SchedulerEvent &e : events) {
    if (e.kind == EventKind::kWorkOrderFinished) {
      auto [it, fresh] = last_finish.emplace(e.op, e.timestamp_ns);
      if (!fresh) it->second = std::max(it->second, e.timestamp_ns);
    } else if (e.kind == EventKind::kWorkOrderStarted) {
      auto [it, fresh] = first_start.emplace(e.op, e.timestamp_ns);
      if (!fresh) it->second = std::min(it->second, e.timestamp_ns);
    }
  }
  Violations out;
  for (const auto &[producer, consumer] : streamable_edges) {
    const std::int64_t finish = last_finish.count(producer) ? last_finish[producer] : kNone;
    if (finish == kNone || !first_start.count(consumer)) continue;
    if (!(finish < first_start[consumer])) {
      out.push_back("op " + std::to_string(consumer) + " started at " +
                    std::to_string(first_start[consumer]) + " before producer op " +
                    std::to_string(producer) + " finished its last work order at " +
                    std::to_string(finish));
    }
  }
  return out;
}

Violations CheckPipeliningPromptness(const std::vector<SchedulerEvent> &events,
                                     const OperatorEdges &streamable_edges) {
  std::map<OperatorId, OperatorId> consumer_of;
  for (const auto &[p, c] : streamable_edges) consumer_of[p] = c;
  std::map<OperatorId, OperatorId> producer_of;
  for (const auto &[p, c] : streamable_edges) producer_of[c] = p;

  // Producer -> block awaiting dispatch.
  std::map<OperatorId, const SchedulerEvent *> pending;
  Violations out;
  for (const SchedulerEvent &e : events) {
    if (IsBlockEvent(e.kind) && consumer_of.count(e.op)) {
      auto it = pending.find(e.op);
      if (it != pending.end()) {
        out.push_back(Describe(*it->second) + " not dispatched before " + Describe(e));
      }
      pending[e.op] = &e;
    } else if (e.kind == EventKind::kWorkOrderDispatched && e.block && producer_of.count(e.op)) {
      auto it = pending.find(producer_of[e.op]);
      if (it != pending.end() && it->second->block == e.block) pending.erase(it);
    }
  }
  for (const auto &[op, e] : pending) out.push_back(Describe(*e) + " never dispatched");
  return out;
}

Violations CheckMonotoneAvailability(const std::vector<SchedulerEvent> &events) {
  std::unordered_map<BlockId, std::int64_t> filled_at;
  for (const SchedulerEvent &e : events) {
    if (IsBlockEvent(e.kind) && e.block) filled_at.emplace(*e.block, e.timestamp_ns);
  }
  Violations out;
  for (const SchedulerEvent &e : events) {
    if (e.kind != EventKind::kWorkOrderDispatched || !e.block) continue;
    auto it = filled_at.find(*e.block);
    if (it != filled_at.end() && e.timestamp_ns < it->second) {
      out.push_back(Describe(e) + " precedes the block's fill at " + std::to_string(it->second));
    }
  }
  return out;
}

Violations CheckWorkerConservation(const std::vector<SchedulerEvent> &events,
                                   std::size_t threads) {
  Violations out;
  std::size_t in_flight = 0;
  std::set<std::size_t> busy;
  for (const SchedulerEvent &e : events) {
    if (e.kind == EventKind::kWorkOrderStarted) {
      if (++in_flight > threads) {
        out.push_back(Describe(e) + " raises in-flight work orders to " +
                      std::to_string(in_flight));
      }
      if (e.worker && !busy.insert(*e.worker).second) {
        out.push_back(Describe(e) + " on a worker that is already busy");
      }
    } else if (e.kind == EventKind::kWorkOrderFinished) {
      if (in_flight > 0) --in_flight;
      if (e.worker) busy.erase(*e.worker);
    }
  }
  return out;
}

Violations CheckBuildProbeBarrier(const std::vector<SchedulerEvent> &events, const PlanDAG &dag) {
  std::map<OperatorId, std::int64_t> finished;
  for (const SchedulerEvent &e : events) {
    if (e.kind == EventKind::kOperatorFinished) finished[e.op] = e.timestamp_ns;
  }
  Violations out;
  for (const SchedulerEvent &e : events) {
    if (e.kind != EventKind::kWorkOrderStarted) continue;
    const OperatorNode &node = dag.node(e.op);
    if (node.kind() != OperatorKind::kProbeHash) continue;
    const OperatorId build = std::get<ProbeSpec>(node.spec).build;
    auto it = finished.find(build);
    if (it == finished.end() || it->second > e.timestamp_ns) {
      out.push_back(Describe(e) + " before build op " + std::to_string(build) + " finished");
    }
  }
  return out;
}

Violations CheckTimestampOrder(const std::vector<SchedulerEvent> &events) {
  Violations out;
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].timestamp_ns <= events[i - 1].timestamp_ns) {
      out.push_back(Describe(events[i]) + " does not follow " + Describe(events[i - 1]));
    }
  }
  return out;
}

}  // namespace uot
