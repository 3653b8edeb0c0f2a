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

#include "uot/scheduler/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "uot/common/error.hpp"

namespace uot {

const OperatorStats &ExecutionMetrics::op(OperatorId id) const {
  if (id >= operators.size()) {
    throw Error(ErrorCode::kUnknownOperator, "no operator " + std::to_string(id) + " in metrics");
  }
  return operators[id];
}

std::vector<std::pair<std::int64_t, std::size_t>> DopTimeline(const ExecutionMetrics &metrics,
                                                              OperatorId op) {
  metrics.op(op);
  std::vector<std::pair<std::int64_t, std::size_t>> timeline;
  std::size_t in_flight = 0;
  for (const SchedulerEvent &e : metrics.events) {
    if (e.op != op) continue;
    if (e.kind == EventKind::kWorkOrderStarted) {
      ++in_flight;
    } else if (e.kind == EventKind::kWorkOrderFinished) {
      --in_flight;
    } else {
      continue;
    }
    timeline.emplace_back(e.timestamp_ns, in_flight);
  }
  return timeline;
}

DopSummary SummarizeDop(const ExecutionMetrics &metrics, OperatorId op) {
  const auto timeline = DopTimeline(metrics, op);
  DopSummary summary;
  if (timeline.empty()) return summary;
  double area = 0.0;
  for (std::size_t i = 0; i < timeline.size(); ++i) {
    summary.peak = std::max(summary.peak, timeline[i].second);
    if (i + 1 < timeline.size()) {
      area += static_cast<double>(timeline[i].second) *
              static_cast<double>(timeline[i + 1].first - timeline[i].first);
    }
  }
  const double span = static_cast<double>(timeline.back().first - timeline.front().first);
  summary.mean = span > 0 ? area / span : static_cast<double>(summary.peak);
  return summary;
}

std::size_t PeakTotalInFlight(const ExecutionMetrics &metrics) {
  std::size_t in_flight = 0;
  std::size_t peak = 0;
  for (const SchedulerEvent &e : metrics.events) {
    if (e.kind == EventKind::kWorkOrderStarted) {
      peak = std::max(peak, ++in_flight);
    } else if (e.kind == EventKind::kWorkOrderFinished) {
      --in_flight;
    }
  }
  return peak;
}

std::int64_t ChainSpanNs(const ExecutionMetrics &metrics, const std::vector<OperatorId> &ops) {
  std::int64_t first = std::numeric_limits<std::int64_t>::max();
  std::int64_t last = std::numeric_limits<std::int64_t>::min();
  for (OperatorId id : ops) {
    const OperatorStats &s = metrics.op(id);
    if (s.first_start_ns < 0) continue;
    first = std::min(first, s.first_start_ns);
    last = std::max(last, s.last_finish_ns);
  }
  return first > last ? 0 : last - first;
}

std::size_t PeakIntermediateBytes(const ExecutionMetrics &metrics) {
  return metrics.peak_intermediate_bytes;
}

DurationSummary SummarizeWorkOrders(const ExecutionMetrics &metrics, OperatorId op) {
  metrics.op(op);
  std::vector<std::int64_t> durations;
  for (const WorkOrderRecord &r : metrics.work_orders) {
    if (r.op == op) durations.push_back(r.duration_ns());
  }
  DurationSummary s;
  s.count = durations.size();
  if (durations.empty()) return s;
  std::sort(durations.begin(), durations.end());
  double total = 0.0;
  for (std::int64_t d : durations) total += static_cast<double>(d);
  s.mean_ns = total / static_cast<double>(durations.size());
  // Nearest-rank percentiles.
  auto rank = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::ceil(q * static_cast<double>(durations.size())));
    return durations[std::min(durations.size(), std::max<std::size_t>(idx, 1)) - 1];
  };
  s.p50_ns = rank(0.50);
  s.p99_ns = rank(0.99);
  return s;
}

}  // namespace uot
