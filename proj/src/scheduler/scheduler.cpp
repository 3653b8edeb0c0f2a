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

#include "uot/scheduler/scheduler.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <deque>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <thread>
#include <unordered_map>
#include <vector>

#include "uot/common/error.hpp"
#include "uot/operators/operators.hpp"
#include "uot/scheduler/event_log.hpp"
#include "uot/storage/block_pool.hpp"

namespace uot {

std::string_view BuildOrderingName(BuildOrdering ordering) {
  return ordering == BuildOrdering::kEager ? "eager" : "strategy_aware";
}

BuildOrdering ParseBuildOrdering(std::string_view text) {
  if (text == "eager") return BuildOrdering::kEager;
  if (text == "strategy_aware" || text == "strategy-aware") return BuildOrdering::kStrategyAware;
  throw Error(ErrorCode::kConfigError, "unknown build ordering '" + std::string(text) + "'");
}

namespace {

std::atomic<std::uint64_t> g_query_counter{0};

// A worker that has reported a completion pulls nothing more until the
// coordinator acknowledges it, so dispatches triggered by that completion
// compete with the work already queued.
class ReadyQueue {
 public:
  ReadyQueue(std::size_t num_ops, const std::map<OperatorId, std::size_t> &caps,
             std::size_t workers)
      : caps_(num_ops, std::numeric_limits<std::size_t>::max()),
        in_flight_(num_ops, 0),
        awaiting_ack_(workers, false) {
    for (const auto &[op, cap] : caps) {
      if (op >= num_ops) {
        throw Error(ErrorCode::kConfigError, "DOP cap for unknown operator " + std::to_string(op));
      }
      if (cap == 0) throw Error(ErrorCode::kConfigError, "DOP cap must be positive");
      caps_[op] = cap;
    }
  }

  void Push(WorkOrder wo, std::size_t priority) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      entries_.emplace(Key{std::numeric_limits<std::size_t>::max() - priority, seq_++},
                       std::move(wo));
    }
    cv_.notify_one();
  }

  // Blocks until an eligible work order exists; nullopt after Shutdown().
  std::optional<WorkOrder> Pop(std::size_t worker) {
    std::unique_lock<std::mutex> lock(mutex_);
    for (;;) {
      if (shutdown_) return std::nullopt;
      if (awaiting_ack_[worker]) {
        cv_.wait(lock);
        continue;
      }
      for (auto it = entries_.begin(); it != entries_.end(); ++it) {
        const OperatorId op = it->second.op;
        if (in_flight_[op] < caps_[op]) {
          WorkOrder wo = std::move(it->second);
          entries_.erase(it);
          ++in_flight_[op];
          return wo;
        }
      }
      cv_.wait(lock);
    }
  }

  void Done(OperatorId op, std::size_t worker) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      --in_flight_[op];
      awaiting_ack_[worker] = true;
    }
    cv_.notify_all();
  }

  void Acknowledge(std::size_t worker) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      awaiting_ack_[worker] = false;
    }
    cv_.notify_all();
  }

  void Shutdown() {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      shutdown_ = true;
    }
    cv_.notify_all();
  }

 private:
  using Key = std::pair<std::size_t, std::uint64_t>;

  std::mutex mutex_;
  std::condition_variable cv_;
  std::map<Key, WorkOrder> entries_;
  std::uint64_t seq_ = 0;
  std::vector<std::size_t> caps_;
  std::vector<std::size_t> in_flight_;
  std::vector<bool> awaiting_ack_;
  bool shutdown_ = false;
};

struct Completion {
  WorkOrder wo;
  WorkOrderResult result;
  std::exception_ptr error;
  std::size_t worker = 0;
  std::int64_t start_ns = 0;
  std::int64_t finish_ns = 0;
};

class CompletionQueue {
 public:
  void Push(Completion c) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      items_.push_back(std::move(c));
    }
    cv_.notify_one();
  }

  Completion Pop() {
    std::unique_lock<std::mutex> lock(mutex_);
    cv_.wait(lock, [&] { return !items_.empty(); });
    Completion c = std::move(items_.front());
    items_.pop_front();
    return c;
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<Completion> items_;
};

struct OpState {
  bool is_source = false;
  bool released = false;  // sources: base blocks handed out
  bool input_exhausted = false;
  bool finished = false;
  std::size_t outstanding = 0;  // dispatched, not yet completed
  std::vector<BlockId> held;    // released to a probe whose build is unsealed
  std::vector<OperatorId> prereqs;

  std::unique_ptr<TransferGate> gate;  // on the edge to the consumer
  std::unique_ptr<BlockPool> pool;
  Table *output = nullptr;
  std::unique_ptr<JoinHashTable> hash_table;
  std::unique_ptr<AggregationState> aggregate;

  std::unique_ptr<SelectKernel> select;
  std::unique_ptr<BuildKernel> build;
  std::unique_ptr<ProbeKernel> probe;

  std::mt19937_64 rng;
  OperatorStats stats;
};

class QueryExecution {
 public:
  QueryExecution(StorageManager &storage, const PlanDAG &dag, const SchedulerOptions &options)
      : storage_(storage),
        dag_(dag),
        options_(options),
        ready_(dag.size(), options.dop_caps, options.threads),
        states_(dag.size()),
        topo_pos_(dag.size()) {}

  QueryResult Run();

 private:
  void Setup();
  void ComputePrereqs();
  OperatorId ChainSource(OperatorId op) const;

  void WorkerLoop(std::size_t worker);
  WorkOrderResult Execute(const WorkOrder &wo);

  void HandleCompletion(Completion &c);
  void Pump();
  bool CanFinish(OperatorId op) const;
  void Finish(OperatorId op);
  void Dispatch(OperatorId op, std::vector<BlockId> blocks);
  void EmitOutputBlock(OperatorId op, const BlockPtr &block, bool flushed);
  void EnsureState(OperatorId op);
  bool AllFinished() const;

  void StopWorkers();
  void Cleanup(bool keep_result);

  StorageManager &storage_;
  const PlanDAG &dag_;
  const SchedulerOptions &options_;
  EventLog log_;
  ReadyQueue ready_;
  CompletionQueue completions_;
  std::vector<std::thread> workers_;

  std::vector<OpState> states_;
  std::vector<std::size_t> topo_pos_;
  std::vector<std::string> temp_tables_;
  std::unordered_map<WorkOrderId, std::int64_t> dispatched_at_;
  std::vector<WorkOrderRecord> records_;
  WorkOrderId next_wo_id_ = 0;
  std::size_t baseline_bytes_ = 0;
};

void QueryExecution::Setup() {
  const std::vector<OperatorId> &order = dag_.topological_order();
  for (std::size_t i = 0; i < order.size(); ++i) topo_pos_[order[i]] = i;

  const std::uint64_t qid = g_query_counter.fetch_add(1);
  for (const OperatorNode &node : dag_.nodes()) {
    OpState &s = states_[node.id];
    s.is_source = node.input.is_table();
    s.rng.seed(options_.seed ^ static_cast<std::uint64_t>(node.id));
    s.stats.op = node.id;
    s.stats.kind = node.kind();
    s.stats.name = node.name;
    switch (node.kind()) {
      case OperatorKind::kSelect:
        s.select = std::make_unique<SelectKernel>(node);
        break;
      case OperatorKind::kBuildHash:
        s.build = std::make_unique<BuildKernel>(node);
        break;
      case OperatorKind::kProbeHash: {
        const auto &spec = std::get<ProbeSpec>(node.spec);
        s.probe = std::make_unique<ProbeKernel>(node, dag_.node(spec.build));
        break;
      }
      case OperatorKind::kAggregate:
        break;
    }
    if (node.kind() != OperatorKind::kBuildHash) {
      s.pool = std::make_unique<BlockPool>(&storage_);
      s.stats.output_tuple_width = node.output_schema->tuple_width();
      const std::string name =
          node.id == dag_.sink()
              ? options_.result_table_name
              : "__uot_q" + std::to_string(qid) + "_op" + std::to_string(node.id);
      s.output = &storage_.CreateTemporaryTable(name, node.output_schema, options_.block_size_bytes);
      temp_tables_.push_back(name);
      if (dag_.consumer(node.id)) {
        // Aggregate output only exists after finalize; its edge is blocking.
        const UoTPolicy policy = node.kind() == OperatorKind::kAggregate ? UoTPolicy::WholeTable()
                                                                         : options_.policy;
        s.gate = std::make_unique<TransferGate>(policy);
      }
    }
  }
  ComputePrereqs();
}

OperatorId QueryExecution::ChainSource(OperatorId op) const {
  while (!dag_.node(op).input.is_table()) op = dag_.node(op).input.op;
  return op;
}

void QueryExecution::ComputePrereqs() {
  if (options_.build_ordering == BuildOrdering::kEager) return;
  for (const OperatorNode &node : dag_.nodes()) {
    if (options_.policy.whole_table()) {
      if (node.kind() != OperatorKind::kBuildHash) continue;
      const OperatorNode &probe = dag_.node(dag_.ProbeOf(node.id));
      if (probe.input.is_table()) continue;
      states_[ChainSource(node.id)].prereqs.push_back(probe.input.op);
    } else {
      if (!node.input.is_table()) continue;
      // Walk the streamable chain down to the first build or the sink.
      std::optional<OperatorId> cur = node.id;
      while (cur) {
        const OperatorNode &n = dag_.node(*cur);
        if (n.kind() == OperatorKind::kProbeHash) {
          states_[node.id].prereqs.push_back(std::get<ProbeSpec>(n.spec).build);
        }
        if (n.kind() == OperatorKind::kBuildHash) break;
        cur = dag_.consumer(*cur);
      }
    }
  }
}

void QueryExecution::EnsureState(OperatorId op) {
  OpState &s = states_[op];
  const OperatorNode &node = dag_.node(op);
  if (node.kind() == OperatorKind::kBuildHash && s.hash_table == nullptr) {
    s.hash_table = std::make_unique<JoinHashTable>(node.key_schema, node.payload_schema,
                                                   std::get<BuildSpec>(node.spec).options,
                                                   &storage_.memory());
  } else if (node.kind() == OperatorKind::kAggregate && s.aggregate == nullptr) {
    s.aggregate = std::make_unique<AggregationState>(
        node.input_schema, std::get<AggregateSpec>(node.spec), node.output_schema,
        &storage_.memory());
  }
}

void QueryExecution::Dispatch(OperatorId op, std::vector<BlockId> blocks) {
  if (blocks.empty()) return;
  OpState &s = states_[op];
  const OperatorNode &node = dag_.node(op);
  const JoinHashTable *table = nullptr;
  if (node.kind() == OperatorKind::kProbeHash) {
    const OperatorId build = std::get<ProbeSpec>(node.spec).build;
    if (!states_[build].finished) {
      s.held.insert(s.held.end(), blocks.begin(), blocks.end());
      return;
    }
    table = states_[build].hash_table.get();
  }
  EnsureState(op);
  std::vector<WorkOrder> orders = GenerateWorkOrders(node, blocks, table, next_wo_id_, log_.Now());
  if (options_.seed != 0) std::shuffle(orders.begin(), orders.end(), s.rng);
  for (WorkOrder &wo : orders) {
    ++s.outstanding;
    dispatched_at_[wo.id] =
        log_.Record(EventKind::kWorkOrderDispatched, op, wo.id, wo.input_block);
    ready_.Push(std::move(wo), options_.prefer_consumers ? topo_pos_[op] : 0);
  }
}

void QueryExecution::EmitOutputBlock(OperatorId op, const BlockPtr &block, bool flushed) {
  OpState &s = states_[op];
  log_.Record(flushed ? EventKind::kBlockFlushed : EventKind::kBlockFilled, op, std::nullopt,
              block->id());
  storage_.AppendBlock(*s.output, block);
  ++s.stats.blocks_produced;
  if (s.gate) Dispatch(*dag_.consumer(op), s.gate->OnBlockFilled(block->id()));
}

bool QueryExecution::CanFinish(OperatorId op) const {
  const OpState &s = states_[op];
  if (s.finished || !s.input_exhausted || s.outstanding != 0 || !s.held.empty()) return false;
  const OperatorNode &node = dag_.node(op);
  if (node.kind() == OperatorKind::kProbeHash) {
    return states_[std::get<ProbeSpec>(node.spec).build].finished;
  }
  return true;
}

void QueryExecution::Finish(OperatorId op) {
  OpState &s = states_[op];
  const OperatorNode &node = dag_.node(op);
  switch (node.kind()) {
    case OperatorKind::kBuildHash:
      EnsureState(op);
      s.hash_table->Seal();
      break;
    case OperatorKind::kAggregate: {
      EnsureState(op);
      const std::vector<std::byte> rows = s.aggregate->Finalize();
      const std::size_t width = node.output_schema->tuple_width();
      std::vector<BlockPtr> full;
      {
        OutputWriter writer(s.pool.get(), node.output_schema, options_.block_size_bytes,
                            next_wo_id_++);
        for (std::size_t off = 0; off < rows.size(); off += width) writer.AppendRow(&rows[off]);
        full = writer.Finish();
      }
      s.stats.tuples_out = rows.size() / width;
      s.aggregate.reset();
      for (const BlockPtr &b : full) EmitOutputBlock(op, b, false);
      for (const BlockPtr &b : s.pool->Flush()) EmitOutputBlock(op, b, true);
      break;
    }
    case OperatorKind::kProbeHash:
      states_[std::get<ProbeSpec>(node.spec).build].hash_table.reset();
      [[fallthrough]];
    case OperatorKind::kSelect:
      for (const BlockPtr &b : s.pool->Flush()) EmitOutputBlock(op, b, true);
      break;
  }
  s.finished = true;
  s.stats.finished_ns = log_.Record(EventKind::kOperatorFinished, op);
  const auto consumer = dag_.consumer(op);
  if (consumer && node.kind() != OperatorKind::kBuildHash) {
    if (s.gate) Dispatch(*consumer, s.gate->OnProducerFinished());
    states_[*consumer].input_exhausted = true;
  }
}

void QueryExecution::Pump() {
  bool progress = true;
  while (progress) {
    progress = false;
    for (OperatorId op : dag_.topological_order()) {
      OpState &s = states_[op];
      if (s.is_source && !s.released &&
          std::all_of(s.prereqs.begin(), s.prereqs.end(),
                      [&](OperatorId p) { return states_[p].finished; })) {
        s.released = true;
        s.input_exhausted = true;
        const Table &base = storage_.GetTable(dag_.node(op).input.table);
        Dispatch(op, base.block_ids());
        progress = true;
      }
      const OperatorNode &node = dag_.node(op);
      if (!s.held.empty() && node.kind() == OperatorKind::kProbeHash &&
          states_[std::get<ProbeSpec>(node.spec).build].finished) {
        std::vector<BlockId> held = std::move(s.held);
        s.held.clear();
        Dispatch(op, std::move(held));
        progress = true;
      }
      if (CanFinish(op)) {
        Finish(op);
        progress = true;
      }
    }
  }
}

bool QueryExecution::AllFinished() const {
  return std::all_of(states_.begin(), states_.end(), [](const OpState &s) { return s.finished; });
}

void QueryExecution::HandleCompletion(Completion &c) {
  if (c.error) std::rethrow_exception(c.error);
  const OperatorId op = c.wo.op;
  OpState &s = states_[op];
  --s.outstanding;

  WorkOrderRecord r;
  r.id = c.wo.id;
  r.op = op;
  r.input_block = c.wo.input_block;
  r.worker = c.worker;
  r.dispatched_ns = dispatched_at_[c.wo.id];
  r.start_ns = c.start_ns;
  r.finish_ns = c.finish_ns;
  r.tuples_in = c.result.tuples_in;
  r.tuples_out = c.result.tuples_out;
  records_.push_back(r);
  dispatched_at_.erase(c.wo.id);

  ++s.stats.work_orders;
  s.stats.tuples_in += r.tuples_in;
  if (dag_.node(op).kind() != OperatorKind::kAggregate) s.stats.tuples_out += r.tuples_out;
  if (s.stats.first_start_ns < 0 || r.start_ns < s.stats.first_start_ns) {
    s.stats.first_start_ns = r.start_ns;
  }
  s.stats.last_finish_ns = std::max(s.stats.last_finish_ns, r.finish_ns);

  for (const BlockPtr &b : c.result.output_blocks) EmitOutputBlock(op, b, false);
  if (!dag_.node(op).input.is_table()) storage_.FreeBlock(c.wo.input_block);
}

WorkOrderResult QueryExecution::Execute(const WorkOrder &wo) {
  const BlockPtr input = storage_.GetBlock(wo.input_block);
  OpState &s = states_[wo.op];
  switch (wo.kind) {
    case OperatorKind::kSelect:
      return ExecuteSelect(wo, *input, *s.select, *s.pool, options_.block_size_bytes);
    case OperatorKind::kBuildHash:
      return ExecuteBuild(wo, *input, *s.build, *s.hash_table);
    case OperatorKind::kProbeHash:
      return ExecuteProbe(wo, *input, *s.probe, *s.pool, options_.block_size_bytes);
    case OperatorKind::kAggregate:
      return ExecuteAggregate(wo, *input, *s.aggregate, dag_.node(wo.op).busy_work);
  }
  throw Error(ErrorCode::kUnknownOperator, "bad work order kind");
}

void QueryExecution::WorkerLoop(std::size_t worker) {
  while (std::optional<WorkOrder> wo = ready_.Pop(worker)) {
    Completion c;
    c.worker = worker;
    c.start_ns =
        log_.Record(EventKind::kWorkOrderStarted, wo->op, wo->id, wo->input_block, worker);
    try {
      c.result = Execute(*wo);
    } catch (...) {
      c.error = std::current_exception();
    }
    c.finish_ns =
        log_.Record(EventKind::kWorkOrderFinished, wo->op, wo->id, wo->input_block, worker);
    const OperatorId op = wo->op;
    c.wo = std::move(*wo);
    ready_.Done(op, worker);
    completions_.Push(std::move(c));
  }
}

void QueryExecution::StopWorkers() {
  ready_.Shutdown();
  for (std::thread &t : workers_) {
    if (t.joinable()) t.join();
  }
  workers_.clear();
}

void QueryExecution::Cleanup(bool keep_result) {
  for (OpState &s : states_) {
    if (s.pool) {
      for (const BlockPtr &b : s.pool->Flush()) storage_.FreeBlock(b->id());
    }
    s.hash_table.reset();
    s.aggregate.reset();
  }
  for (const std::string &name : temp_tables_) {
    if (keep_result && name == options_.result_table_name) continue;
    if (storage_.HasTable(name)) storage_.DropTable(name);
  }
}

QueryResult QueryExecution::Run() {
  if (options_.threads == 0) throw Error(ErrorCode::kConfigError, "worker count must be >= 1");
  if (options_.block_size_bytes == 0) throw Error(ErrorCode::kBlockTooSmall, "block size is 0");

  if (storage_.HasTable(options_.result_table_name)) {
    if (!storage_.GetTable(options_.result_table_name).is_temporary()) {
      throw Error(ErrorCode::kDuplicateTableName,
                  "result table '" + options_.result_table_name + "' is a base table");
    }
    storage_.DropTable(options_.result_table_name);
  }

  MemoryTracker &memory = storage_.memory();
  baseline_bytes_ = memory.intermediate_bytes();
  memory.ResetPeak();

  try {
    Setup();
    for (std::size_t w = 0; w < options_.threads; ++w) {
      workers_.emplace_back([this, w] { WorkerLoop(w); });
    }
    Pump();
    std::size_t in_flight = 0;
    for (const OpState &s : states_) in_flight += s.outstanding;
    while (!AllFinished()) {
      if (in_flight == 0) {
        throw Error(ErrorCode::kInvalidPlan, "scheduler stalled with unfinished operators");
      }
      Completion c = completions_.Pop();
      HandleCompletion(c);
      Pump();
      ready_.Acknowledge(c.worker);
      in_flight = 0;
      for (const OpState &s : states_) in_flight += s.outstanding;
    }
  } catch (...) {
    StopWorkers();
    Cleanup(false);
    throw;
  }
  StopWorkers();

  QueryResult result;
  ExecutionMetrics &m = result.metrics;
  m.query_start_ns = 0;
  m.query_end_ns = log_.Now();
  m.threads = options_.threads;
  m.policy = options_.policy.ToString();
  const std::size_t peak = memory.peak_intermediate_bytes();
  m.peak_intermediate_bytes = peak > baseline_bytes_ ? peak - baseline_bytes_ : 0;
  Cleanup(true);

  m.events = log_.Snapshot();
  m.work_orders = std::move(records_);
  for (OpState &s : states_) {
    s.stats.output_block_bytes = s.stats.blocks_produced * options_.block_size_bytes;
    m.operators.push_back(s.stats);
  }
  result.result_table = &storage_.GetTable(options_.result_table_name);
  return result;
}

}  // namespace

QueryResult RunQuery(StorageManager &storage, const PlanDAG &dag, const SchedulerOptions &options) {
  QueryExecution execution(storage, dag, options);
  return execution.Run();
}

}  // namespace uot
