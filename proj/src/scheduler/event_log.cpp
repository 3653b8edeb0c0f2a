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

#include "uot/scheduler/event_log.hpp"

#include <chrono>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "uot/common/error.hpp"

namespace uot {

namespace {

std::int64_t SteadyNs() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename T>
std::optional<T> ParseOptional(std::string_view field) {
  if (field.empty()) return std::nullopt;
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kParseError, "bad event field '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::string_view EventKindName(EventKind kind) {
  switch (kind) {
    case EventKind::kBlockFilled: return "BlockFilled";
    case EventKind::kWorkOrderDispatched: return "WorkOrderDispatched";
    case EventKind::kWorkOrderStarted: return "WorkOrderStarted";
    case EventKind::kWorkOrderFinished: return "WorkOrderFinished";
    case EventKind::kOperatorFinished: return "OperatorFinished";
    case EventKind::kBlockFlushed: return "BlockFlushed";
  }
  return "?";
}

EventKind ParseEventKind(std::string_view text) {
  for (EventKind kind : {EventKind::kBlockFilled, EventKind::kWorkOrderDispatched,
                         EventKind::kWorkOrderStarted, EventKind::kWorkOrderFinished,
                         EventKind::kOperatorFinished, EventKind::kBlockFlushed}) {
    if (EventKindName(kind) == text) return kind;
  }
  throw Error(ErrorCode::kParseError, "unknown event kind '" + std::string(text) + "'");
}

EventLog::EventLog() : origin_ns_(SteadyNs()) {}

std::int64_t EventLog::Now() const { return SteadyNs() - origin_ns_; }

std::int64_t EventLog::Record(EventKind kind, OperatorId op, std::optional<WorkOrderId> work_order,
                              std::optional<BlockId> block, std::optional<std::size_t> worker) {
  std::lock_guard<std::mutex> lock(mutex_);
  std::int64_t ts = SteadyNs() - origin_ns_;
  if (ts <= last_ns_) ts = last_ns_ + 1;
  last_ns_ = ts;
  events_.push_back({ts, kind, op, work_order, block, worker});
  return ts;
}

std::vector<SchedulerEvent> EventLog::Snapshot() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return events_;
}

void WriteEventLog(std::ostream &out, const std::vector<SchedulerEvent> &events) {
  for (const SchedulerEvent &e : events) {
    out << e.timestamp_ns << ',' << EventKindName(e.kind) << ',' << e.op << ',';
    if (e.work_order) out << *e.work_order;
    out << ',';
    if (e.block) out << *e.block;
    out << ',';
    if (e.worker) out << *e.worker;
    out << '\n';
  }
}

std::string FormatEventLog(const std::vector<SchedulerEvent> &events) {
  std::ostringstream out;
  WriteEventLog(out, events);
  return out.str();
}

std::vector<SchedulerEvent> ParseEventLog(std::istream &in) {
  std::vector<SchedulerEvent> events;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const std::size_t pos = rest.find(',');
      fields.push_back(rest.substr(0, pos));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    if (fields.size() != 6) {
      throw Error(ErrorCode::kParseError, "event line needs 6 fields: '" + line + "'");
    }
    SchedulerEvent e;
    e.timestamp_ns = ParseOptional<std::int64_t>(fields[0]).value_or(0);
    e.kind = ParseEventKind(fields[1]);
    e.op = ParseOptional<OperatorId>(fields[2]).value_or(0);
    e.work_order = ParseOptional<WorkOrderId>(fields[3]);
    e.block = ParseOptional<BlockId>(fields[4]);
    e.worker = ParseOptional<std::size_t>(fields[5]);
    events.push_back(e);
  }
  return events;
}

std::vector<EventLogSection> ParseEventLogSections(std::istream &in) {
  std::vector<EventLogSection> sections;
  std::string line;
  std::string body;
  auto close = [&] {
    if (!sections.empty()) sections.back().events = ParseEventLog(body);
    body.clear();
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') {
      close();
      const std::size_t start = line.find_first_not_of("# ");
      sections.push_back({start == std::string::npos ? std::string() : line.substr(start), {}});
      continue;
    }
    if (sections.empty()) sections.push_back({});
    body += line;
    body += '\n';
  }
  close();
  return sections;
}

std::vector<SchedulerEvent> ParseEventLog(const std::string &text) {
  std::istringstream in(text);
  return ParseEventLog(in);
}

}  // namespace uot
