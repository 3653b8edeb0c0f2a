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

#include "uot/operators/operators.hpp"

#include <chrono>
#include <cstring>
#include <string>

#include "uot/common/error.hpp"

namespace uot {

namespace {

std::int64_t NowNs() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct BlockRowAccessor {
  const Block *block;
  std::size_t row;
  const std::byte *cell(std::size_t column) const { return block->cell(row, column); }
};

// Probe tuple columns first, then the matching build payload.
struct JoinedRowAccessor {
  const Block *block;
  std::size_t row;
  std::size_t probe_columns;
  const Schema *payload_schema;
  const std::byte *payload;
  const std::byte *cell(std::size_t column) const {
    if (column < probe_columns) return block->cell(row, column);
    return payload + payload_schema->offset(column - probe_columns);
  }
};

Schema JoinedSchema(const OperatorNode &probe, const OperatorNode &build) {
  std::vector<Column> columns = probe.input_schema->columns();
  if (build.payload_schema != nullptr) {
    for (const Column &c : build.payload_schema->columns()) columns.push_back(c);
  }
  return Schema(std::move(columns));
}

void GatherColumns(const Block &block, std::size_t row, const std::vector<std::size_t> &columns,
                   std::byte *dst) {
  for (std::size_t c : columns) {
    const std::size_t width = block.schema().column(c).width;
    std::memcpy(dst, block.cell(row, c), width);
    dst += width;
  }
}

std::size_t WidthOf(const Schema &schema, const std::vector<std::size_t> &columns) {
  std::size_t w = 0;
  for (std::size_t c : columns) w += schema.column(c).width;
  return w;
}

}  // namespace

void SpinWork(std::uint64_t iterations) {
  std::uint64_t x = iterations;
  for (std::uint64_t i = 0; i < iterations; ++i) {
    x = Mix64(x);
    asm volatile("" : "+r"(x));
  }
}

std::vector<WorkOrder> GenerateWorkOrders(const OperatorNode &node,
                                          std::span<const BlockId> available_blocks,
                                          const JoinHashTable *hash_table, WorkOrderId &next_id,
                                          std::int64_t now_ns) {
  if (node.kind() == OperatorKind::kProbeHash && (hash_table == nullptr || !hash_table->sealed())) {
    throw Error(ErrorCode::kProbeBeforeBuildSealed,
                "probe operator " + std::to_string(node.id) + " scheduled before its build sealed");
  }
  std::vector<WorkOrder> out;
  out.reserve(available_blocks.size());
  for (BlockId block : available_blocks) {
    WorkOrder wo;
    wo.id = next_id++;
    wo.op = node.id;
    wo.kind = node.kind();
    wo.input_block = block;
    wo.hash_table = node.kind() == OperatorKind::kProbeHash ? hash_table : nullptr;
    wo.created_at_ns = now_ns;
    out.push_back(wo);
  }
  return out;
}

// ---------------------------------------------------------------------------

OutputWriter::~OutputWriter() {
  if (current_ != nullptr) {
    try {
      pool_->Return(current_, holder_);
    } catch (...) {
    }
  }
}

void OutputWriter::AppendRow(const std::byte *row) {
  if (current_ == nullptr) {
    current_ = pool_->Checkout(schema_, Layout::kRowStore, block_size_, holder_);
  }
  current_->AppendRow({row, schema_->tuple_width()});
  ++rows_written_;
  if (current_->full()) {
    pool_->Return(current_, holder_);
    sealed_.push_back(std::move(current_));
    current_.reset();
  }
}

std::vector<BlockPtr> OutputWriter::Finish() {
  if (current_ != nullptr) {
    if (pool_->Return(current_, holder_)) sealed_.push_back(current_);
    current_.reset();
  }
  return std::move(sealed_);
}

// ---------------------------------------------------------------------------

SelectKernel::SelectKernel(const OperatorNode &node)
    : predicate(std::get<SelectSpec>(node.spec).predicate, *node.input_schema),
      projection(std::get<SelectSpec>(node.spec).projection, *node.input_schema),
      busy_work(node.busy_work) {}

BuildKernel::BuildKernel(const OperatorNode &node)
    : key_columns(std::get<BuildSpec>(node.spec).key_columns),
      payload_columns(std::get<BuildSpec>(node.spec).payload_columns),
      key_width(WidthOf(*node.input_schema, key_columns)),
      payload_width(WidthOf(*node.input_schema, payload_columns)),
      busy_work(node.busy_work) {}

ProbeKernel::ProbeKernel(const OperatorNode &node, const OperatorNode &build)
    : key_columns(std::get<ProbeSpec>(node.spec).probe_key_columns),
      key_width(WidthOf(*node.input_schema, key_columns)),
      probe_columns(node.input_schema->num_columns()),
      payload_schema(build.payload_schema),
      projection(std::get<ProbeSpec>(node.spec).projection, JoinedSchema(node, build)),
      busy_work(node.busy_work) {}

WorkOrderResult ExecuteSelect(const WorkOrder &work_order, const Block &input,
                              const SelectKernel &kernel, BlockPool &pool,
                              std::size_t block_size_bytes) {
  const std::int64_t start = NowNs();
  WorkOrderResult result{work_order.id, work_order.op, input.id(), {}, input.fill_count(), 0, 0};
  const SchemaPtr &out_schema = kernel.projection.output_schema();
  OutputWriter writer(&pool, out_schema, block_size_bytes, work_order.id);
  std::vector<std::byte> row(out_schema->tuple_width());
  for (std::size_t r = 0; r < input.fill_count(); ++r) {
    if (kernel.busy_work > 0) SpinWork(kernel.busy_work);
    const BlockRowAccessor access{&input, r};
    if (!kernel.predicate.Matches(access)) continue;
    kernel.projection.Write(access, row.data());
    writer.AppendRow(row.data());
  }
  result.tuples_out = writer.rows_written();
  result.output_blocks = writer.Finish();
  result.wall_ns = NowNs() - start;
  return result;
}

WorkOrderResult ExecuteBuild(const WorkOrder &work_order, const Block &input,
                             const BuildKernel &kernel, JoinHashTable &hash_table) {
  const std::int64_t start = NowNs();
  WorkOrderResult result{work_order.id, work_order.op, input.id(), {}, input.fill_count(), 0, 0};
  const std::size_t n = input.fill_count();
  std::vector<std::byte> keys(n * kernel.key_width);
  std::vector<std::byte> payloads(n * kernel.payload_width);
  for (std::size_t r = 0; r < n; ++r) {
    if (kernel.busy_work > 0) SpinWork(kernel.busy_work);
    GatherColumns(input, r, kernel.key_columns, keys.data() + r * kernel.key_width);
    GatherColumns(input, r, kernel.payload_columns, payloads.data() + r * kernel.payload_width);
  }
  hash_table.InsertBatch(keys.data(), payloads.data(), n);
  result.wall_ns = NowNs() - start;
  return result;
}

WorkOrderResult ExecuteProbe(const WorkOrder &work_order, const Block &input,
                             const ProbeKernel &kernel, BlockPool &pool,
                             std::size_t block_size_bytes) {
  const std::int64_t start = NowNs();
  if (work_order.hash_table == nullptr || !work_order.hash_table->sealed()) {
    throw Error(ErrorCode::kProbeBeforeBuildSealed, "probe work order without a sealed table");
  }
  const JoinHashTable &table = *work_order.hash_table;
  WorkOrderResult result{work_order.id, work_order.op, input.id(), {}, input.fill_count(), 0, 0};
  const SchemaPtr &out_schema = kernel.projection.output_schema();
  OutputWriter writer(&pool, out_schema, block_size_bytes, work_order.id);
  std::vector<std::byte> row(out_schema->tuple_width());
  std::vector<std::byte> key(kernel.key_width);
  for (std::size_t r = 0; r < input.fill_count(); ++r) {
    if (kernel.busy_work > 0) SpinWork(kernel.busy_work);
    GatherColumns(input, r, kernel.key_columns, key.data());
    const std::uint64_t hash = HashKeyBytes(key);
    table.ForEachMatch(key, hash, [&](const std::byte *payload) {
      const JoinedRowAccessor access{&input, r, kernel.probe_columns, kernel.payload_schema.get(),
                                     payload};
      kernel.projection.Write(access, row.data());
      writer.AppendRow(row.data());
    });
  }
  result.tuples_out = writer.rows_written();
  result.output_blocks = writer.Finish();
  result.wall_ns = NowNs() - start;
  return result;
}

WorkOrderResult ExecuteAggregate(const WorkOrder &work_order, const Block &input,
                                 AggregationState &state, std::uint32_t busy_work) {
  const std::int64_t start = NowNs();
  WorkOrderResult result{work_order.id, work_order.op, input.id(), {}, input.fill_count(), 0, 0};
  if (busy_work > 0) SpinWork(static_cast<std::uint64_t>(busy_work) * input.fill_count());
  state.Merge(state.AccumulateBlock(input));
  result.wall_ns = NowNs() - start;
  return result;
}

}  // namespace uot
