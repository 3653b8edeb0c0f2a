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

#include <gtest/gtest.h>

#include <algorithm>

#include "oracle/oracle.hpp"
#include "oracle/random_plan.hpp"
#include "uot/bench/result_table.hpp"
#include "uot/common/error.hpp"
#include "uot/memmodel/mem_model.hpp"
#include "uot/scheduler/metrics.hpp"
#include "uot/scheduler/scheduler.hpp"
#include "uot/scheduler/trace_checks.hpp"

namespace uot {
namespace {

TEST(UoTPolicyTest, ParseAndValidate) {
  EXPECT_EQ(UoTPolicy::Parse("4"), UoTPolicy::Blocks(4));
  EXPECT_EQ(UoTPolicy::Parse("whole"), UoTPolicy::WholeTable());
  EXPECT_EQ(UoTPolicy::Parse("WHOLE_TABLE"), UoTPolicy::WholeTable());
  EXPECT_THROW(UoTPolicy::Blocks(0), Error);
  EXPECT_THROW(UoTPolicy::Parse("0"), Error);
  EXPECT_THROW(UoTPolicy::Parse("many"), Error);
}

TEST(TransferGateTest, SingleBlockReleasesImmediately) {
  TransferGate gate(UoTPolicy::Blocks(1));
  EXPECT_EQ(gate.OnBlockFilled(5), (std::vector<BlockId>{5}));
  EXPECT_TRUE(gate.OnProducerFinished().empty());
}

TEST(TransferGateTest, BatchesOfK) {
  TransferGate gate(UoTPolicy::Blocks(4));
  for (BlockId b = 0; b < 3; ++b) EXPECT_TRUE(gate.OnBlockFilled(b).empty());
  EXPECT_EQ(gate.OnBlockFilled(3), (std::vector<BlockId>{0, 1, 2, 3}));
  EXPECT_TRUE(gate.OnBlockFilled(4).empty());
  EXPECT_EQ(gate.OnProducerFinished(), (std::vector<BlockId>{4}));
}

TEST(TransferGateTest, WholeTableWaitsForProducer) {
  TransferGate gate(UoTPolicy::WholeTable());
  for (BlockId b = 0; b < 100; ++b) EXPECT_TRUE(gate.OnBlockFilled(b).empty());
  EXPECT_EQ(gate.pending(), 100u);
  EXPECT_EQ(gate.OnProducerFinished().size(), 100u);
}

class SchedulerTest : public ::testing::Test {
 protected:
  // t(k, v, pad): n rows, 64 bytes each.
  void MakeTable(const std::string &name, std::int64_t n, std::size_t block = 4096,
                 std::int64_t key_mod = 1 << 30) {
    auto schema = MakeSchema({Column::Int64("k"), Column::Int64("v"), Column::Char("pad", 48)});
    Table &t = storage_.CreateTable(name, schema, Layout::kRowStore, block);
    std::vector<Tuple> rows;
    for (std::int64_t i = 0; i < n; ++i) rows.push_back({i % key_mod, i, std::string("p")});
    storage_.InsertTuples(t, rows);
    data_[name] = rows;
  }

  // select(t) -> select -> sink, both passing everything.
  PlanDAG TwoSelects(std::uint32_t consumer_busy = 0) {
    PlanBuilder b;
    const auto s0 = b.AddSelect(InputRef::Table("t"), {}, Projection::Columns({0, 1, 2}));
    const auto s1 = b.AddSelect(InputRef::Operator(s0), {}, Projection::Columns({1, 2, 0}));
    b.set_busy_work(s1, consumer_busy);
    return b.Build(storage_);
  }

  std::vector<OperatorId> StartOrder(const ExecutionMetrics &m) {
    std::vector<OperatorId> ops;
    for (const SchedulerEvent &e : m.events) {
      if (e.kind == EventKind::kWorkOrderStarted) ops.push_back(e.op);
    }
    return ops;
  }

  StorageManager storage_;
  oracle::Database data_;
};

TEST_F(SchedulerTest, RejectsZeroThreads) {
  MakeTable("t", 10);
  SchedulerOptions o;
  o.threads = 0;
  try {
    RunQuery(storage_, TwoSelects(), o);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfigError);
  }
}

// One worker, UoT of one block: producer and consumer work orders alternate.
TEST_F(SchedulerTest, SingleWorkerPipelines) {
  MakeTable("t", 640);  // 10 blocks of 64 tuples
  const PlanDAG dag = TwoSelects();
  SchedulerOptions o;
  o.block_size_bytes = 4096;
  const QueryResult r = RunQuery(storage_, dag, o);
  const auto order = StartOrder(r.metrics);
  ASSERT_EQ(std::count(order.begin(), order.end(), 0u), 10);
  ASSERT_EQ(std::count(order.begin(), order.end(), 1u), 10);
  for (std::size_t i = 0; i < order.size(); ++i) EXPECT_EQ(order[i], i % 2) << i;
  EXPECT_TRUE(CheckPipeliningPromptness(r.metrics.events, dag.StreamableOperatorEdges()).empty());
  EXPECT_FALSE(CheckWholeTableOrdering(r.metrics.events, dag.StreamableOperatorEdges()).empty());
}

TEST_F(SchedulerTest, SingleWorkerWholeTable) {
  MakeTable("t", 640);
  const PlanDAG dag = TwoSelects();
  SchedulerOptions o;
  o.block_size_bytes = 4096;
  o.policy = UoTPolicy::WholeTable();
  const QueryResult r = RunQuery(storage_, dag, o);
  const auto order = StartOrder(r.metrics);
  EXPECT_TRUE(std::is_sorted(order.begin(), order.end()));
  EXPECT_TRUE(CheckWholeTableOrdering(r.metrics.events, dag.StreamableOperatorEdges()).empty());
  EXPECT_EQ(SortedResultRows(storage_, *r.result_table),
            oracle::SortedRows(oracle::Evaluate(dag, data_)));
}

TEST_F(SchedulerTest, PartialBlockIsFlushedThenDispatched) {
  MakeTable("t", 100);  // 64 + 36 tuples
  const PlanDAG dag = TwoSelects();
  SchedulerOptions o;
  o.block_size_bytes = 4096;
  const QueryResult r = RunQuery(storage_, dag, o);
  const auto &ev = r.metrics.events;
  auto flushed = std::find_if(ev.begin(), ev.end(), [](const SchedulerEvent &e) {
    return e.kind == EventKind::kBlockFlushed && e.op == 0;
  });
  ASSERT_NE(flushed, ev.end());
  auto next = std::find_if(flushed, ev.end(), [](const SchedulerEvent &e) {
    return e.kind == EventKind::kWorkOrderDispatched;
  });
  ASSERT_NE(next, ev.end());
  EXPECT_EQ(next->op, 1u);
  EXPECT_EQ(next->block, flushed->block);
  EXPECT_EQ(r.metrics.op(0).blocks_produced, 2u);
}

TEST_F(SchedulerTest, WholeTableRunsAllWorkOrdersAtOnce) {
  MakeTable("t", 256);  // 4 blocks
  PlanBuilder b;
  const auto s = b.AddSelect(InputRef::Table("t"), {}, Projection::Columns({0}));
  b.set_busy_work(s, 400000);
  const PlanDAG dag = b.Build(storage_);
  SchedulerOptions o;
  o.threads = 4;
  o.policy = UoTPolicy::WholeTable();
  const QueryResult r = RunQuery(storage_, dag, o);
  EXPECT_EQ(SummarizeDop(r.metrics, s).peak, 4u);
}

TEST_F(SchedulerTest, MetricsAreConsistent) {
  MakeTable("t", 2000, 4096, 50);
  MakeTable("d", 40, 4096);
  PlanBuilder b;
  const auto sel = b.AddSelect(InputRef::Table("t"), Predicate().And(1, CompareOp::kLt, std::int64_t{1500}),
                               Projection::Columns({0, 1}));
  const auto build = b.AddBuild(InputRef::Table("d"), {0}, {1});
  const auto probe = b.AddProbe(InputRef::Operator(sel), build, {0}, Projection::Columns({1, 2}));
  b.AddAggregate(InputRef::Operator(probe), {}, {{AggregateFn::kCount, 0, "n"}});
  const PlanDAG dag = b.Build(storage_);
  for (std::size_t threads : {1, 3}) {
    SchedulerOptions o;
    o.threads = threads;
    o.block_size_bytes = 1024;
    const QueryResult r = RunQuery(storage_, dag, o);
    const ExecutionMetrics &m = r.metrics;
    EXPECT_EQ(m.op(sel).tuples_in, 2000u);
    EXPECT_EQ(m.op(sel).work_orders, storage_.GetTable("t").num_blocks());
    EXPECT_EQ(m.op(sel).tuples_out, 1500u);
    EXPECT_EQ(m.op(probe).tuples_in, 1500u);
    for (const OperatorStats &s : m.operators) {
      EXPECT_GE(s.first_start_ns, m.query_start_ns);
      EXPECT_LE(s.last_finish_ns, m.query_end_ns);
      EXPECT_LE(SummarizeDop(m, s.op).peak, threads);
    }
    EXPECT_LE(PeakTotalInFlight(m), threads);
    EXPECT_TRUE(CheckWorkerConservation(m.events, threads).empty());
    EXPECT_TRUE(CheckBuildProbeBarrier(m.events, dag).empty());
    EXPECT_TRUE(CheckMonotoneAvailability(m.events).empty());
    EXPECT_TRUE(CheckTimestampOrder(m.events).empty());
    EXPECT_EQ(SortedResultRows(storage_, *r.result_table), (std::vector<std::string>{"1200"}));
    EXPECT_THROW(m.op(99), Error);
    EXPECT_EQ(SummarizeWorkOrders(m, sel).count, m.op(sel).work_orders);
  }
}

TEST_F(SchedulerTest, AlwaysFalseSelectUsesNoIntermediateMemory) {
  MakeTable("t", 1000);
  PlanBuilder b;
  b.AddSelect(InputRef::Table("t"), Predicate().And(0, CompareOp::kLt, std::int64_t{0}),
              Projection::Columns({0}));
  const PlanDAG dag = b.Build(storage_);
  SchedulerOptions o;
  o.block_size_bytes = 4096;
  const QueryResult r = RunQuery(storage_, dag, o);
  EXPECT_LE(r.metrics.peak_intermediate_bytes, 4096u);
  EXPECT_EQ(r.result_table->total_tuples(), 0u);
}

// Left-deep cascade: under WHOLE_TABLE the peak holds the materialized
// selection plus a hash table; under UoT = 1 every hash table is live at once.
TEST_F(SchedulerTest, CascadeFootprints) {
  MakeTable("t", 4000, 4096, 100);
  for (const char *d : {"d1", "d2", "d3"}) MakeTable(d, 100, 4096);
  PlanBuilder b;
  InputRef input = InputRef::Operator(
      b.AddSelect(InputRef::Table("t"), {}, Projection::Columns({0, 1})));
  for (const char *d : {"d1", "d2", "d3"}) {
    const auto build = b.AddBuild(InputRef::Table(d), {0}, {1});
    input = InputRef::Operator(b.AddProbe(input, build, {0}, Projection::Columns({0, 1})));
  }
  b.AddAggregate(input, {}, {{AggregateFn::kCount, 0, "n"}});
  const PlanDAG dag = b.Build(storage_);
  // Each build: 100 entries, bucket 8 + 8 + 8 = 24 bytes.
  const double one_table = ExactEngineHashTableBytes({100.0 * 16, 16, 24, 0.5});
  const std::size_t selection_bytes = 4000 * 16;

  SchedulerOptions whole;
  whole.policy = UoTPolicy::WholeTable();
  whole.block_size_bytes = 4096;
  const QueryResult rw = RunQuery(storage_, dag, whole);
  EXPECT_GE(rw.metrics.peak_intermediate_bytes, selection_bytes + static_cast<std::size_t>(one_table));
  EXPECT_LT(rw.metrics.peak_intermediate_bytes, 2 * selection_bytes + 3 * static_cast<std::size_t>(one_table));

  SchedulerOptions low;
  low.block_size_bytes = 4096;
  low.result_table_name = "result_low";
  const QueryResult rl = RunQuery(storage_, dag, low);
  EXPECT_GE(rl.metrics.peak_intermediate_bytes, 3 * static_cast<std::size_t>(one_table));
  EXPECT_LT(rl.metrics.peak_intermediate_bytes, rw.metrics.peak_intermediate_bytes);
  EXPECT_EQ(SortedResultRows(storage_, *rl.result_table), (std::vector<std::string>{"4000"}));
  EXPECT_EQ(SortedResultRows(storage_, *rw.result_table), (std::vector<std::string>{"4000"}));
}

// The result multiset does not depend on work-order execution order.
TEST(SchedulerPropertyTest, OrderInsensitive) {
  for (std::uint64_t plan = 0; plan < 6; ++plan) {
    const oracle::RandomCase c = oracle::MakeRandomCase(500 + plan);
    std::vector<std::string> first;
    for (std::uint64_t seed : {0, 1, 2, 3}) {
      StorageManager storage;
      oracle::LoadCase(storage, c, Layout::kRowStore, 4096);
      SchedulerOptions o;
      o.seed = seed;
      o.threads = 2;
      o.prefer_consumers = seed % 2 == 0;
      o.build_ordering = seed == 3 ? BuildOrdering::kEager : BuildOrdering::kStrategyAware;
      const QueryResult r = RunQuery(storage, c.builder.Build(storage), o);
      const auto rows = SortedResultRows(storage, *r.result_table);
      if (seed == 0) {
        first = rows;
      } else {
        EXPECT_EQ(rows, first) << "plan " << plan << " seed " << seed;
      }
    }
  }
}

TEST(SchedulerPropertyTest, DopCapIsRespected) {
  StorageManager storage;
  const oracle::RandomCase c = oracle::MakeRandomCase(42);
  oracle::LoadCase(storage, c, Layout::kRowStore, 4096);
  const PlanDAG dag = c.builder.Build(storage);
  SchedulerOptions o;
  o.threads = 4;
  o.policy = UoTPolicy::WholeTable();
  for (OperatorId id = 0; id < dag.size(); ++id) o.dop_caps[id] = 2;
  const QueryResult r = RunQuery(storage, dag, o);
  for (OperatorId id = 0; id < dag.size(); ++id) EXPECT_LE(SummarizeDop(r.metrics, id).peak, 2u);
}

}  // namespace
}  // namespace uot
