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

#ifndef UOT_SCHEDULER_EVENT_LOG_HPP_
#define UOT_SCHEDULER_EVENT_LOG_HPP_

#include <cstdint>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "uot/plan/plan_dag.hpp"
#include "uot/storage/types.hpp"

namespace uot {

enum class EventKind {
  kBlockFilled,
  kWorkOrderDispatched,
  kWorkOrderStarted,
  kWorkOrderFinished,
  kOperatorFinished,
  kBlockFlushed,
};

std::string_view EventKindName(EventKind kind);
EventKind ParseEventKind(std::string_view text);

struct SchedulerEvent {
  std::int64_t timestamp_ns;  // relative to query start
  EventKind kind;
  OperatorId op;
  std::optional<WorkOrderId> work_order;
  std::optional<BlockId> block;
  std::optional<std::size_t> worker;

  bool operator==(const SchedulerEvent &other) const = default;
};

/**
 * @brief Append-only, totally ordered record of scheduling events.
 *
 * Appends are serialized by a mutex and stamped inside it from the monotonic
 * clock, bumped by a nanosecond when needed so timestamps strictly increase
 * in log order.
 **/
class EventLog {
 public:
  EventLog();

  std::int64_t Record(EventKind kind, OperatorId op, std::optional<WorkOrderId> work_order = {},
                      std::optional<BlockId> block = {}, std::optional<std::size_t> worker = {});

  // Nanoseconds since construction, without recording anything.
  std::int64_t Now() const;

  std::vector<SchedulerEvent> Snapshot() const;

 private:
  std::int64_t origin_ns_;
  mutable std::mutex mutex_;
  std::int64_t last_ns_ = -1;
  std::vector<SchedulerEvent> events_;
};

// Newline-delimited `timestamp,kind,op_id,wo_id,block_id,worker_id`; absent
// fields are left blank. Lines starting with '#' are comments.
void WriteEventLog(std::ostream &out, const std::vector<SchedulerEvent> &events);
std::string FormatEventLog(const std::vector<SchedulerEvent> &events);
std::vector<SchedulerEvent> ParseEventLog(std::istream &in);
std::vector<SchedulerEvent> ParseEventLog(const std::string &text);

// A log holding several runs, each introduced by a `# <label>` line.
struct EventLogSection {
  std::string label;
  std::vector<SchedulerEvent> events;
};
std::vector<EventLogSection> ParseEventLogSections(std::istream &in);

}  // namespace uot

#endif  // UOT_SCHEDULER_EVENT_LOG_HPP_
