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

#ifndef UOT_OPERATORS_OPERATORS_HPP_
#define UOT_OPERATORS_OPERATORS_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "uot/operators/aggregate_state.hpp"
#include "uot/operators/hash_table.hpp"
#include "uot/plan/expression.hpp"
#include "uot/plan/plan_dag.hpp"
#include "uot/storage/block.hpp"
#include "uot/storage/block_pool.hpp"

namespace uot {

// Operator logic bound to exactly one input block.
struct WorkOrder {
  WorkOrderId id = 0;
  OperatorId op = 0;
  OperatorKind kind = OperatorKind::kSelect;
  BlockId input_block = kInvalidBlockId;
  const JoinHashTable *hash_table = nullptr;  // ProbeHash only; sealed
  std::int64_t created_at_ns = 0;
};

struct WorkOrderResult {
  WorkOrderId id = 0;
  OperatorId op = 0;
  BlockId input_block = kInvalidBlockId;
  // Blocks that filled up during execution; sealed and ready for transfer.
  std::vector<BlockPtr> output_blocks;
  std::size_t tuples_in = 0;
  std::size_t tuples_out = 0;
  std::int64_t wall_ns = 0;
};

// One work order per available block, in arrival order. Throws
// ProbeBeforeBuildSealed for a probe whose table is missing or unsealed.
std::vector<WorkOrder> GenerateWorkOrders(const OperatorNode &node,
                                          std::span<const BlockId> available_blocks,
                                          const JoinHashTable *hash_table,
                                          WorkOrderId &next_id, std::int64_t now_ns = 0);

/**
 * @brief Writes output rows through a block pool on behalf of one work order.
 *
 * Blocks are checked out lazily; a block that fills up is returned at once
 * (which seals it) and recorded as produced output. Finish() hands back the
 * last partial block to the pool.
 **/
class OutputWriter {
 public:
  OutputWriter(BlockPool *pool, SchemaPtr schema, std::size_t block_size_bytes, WorkOrderId holder)
      : pool_(pool), schema_(std::move(schema)), block_size_(block_size_bytes), holder_(holder) {}
  ~OutputWriter();

  OutputWriter(const OutputWriter &) = delete;
  OutputWriter &operator=(const OutputWriter &) = delete;

  void AppendRow(const std::byte *row);
  std::vector<BlockPtr> Finish();

  std::size_t rows_written() const { return rows_written_; }

 private:
  BlockPool *pool_;
  SchemaPtr schema_;
  std::size_t block_size_;
  WorkOrderId holder_;
  BlockPtr current_;
  std::vector<BlockPtr> sealed_;
  std::size_t rows_written_ = 0;
};

// Compiled per-operator logic, built once per query and shared by all of the
// operator's work orders.
struct SelectKernel {
  explicit SelectKernel(const OperatorNode &node);
  BoundPredicate predicate;
  BoundProjection projection;
  std::uint32_t busy_work;
};

struct BuildKernel {
  explicit BuildKernel(const OperatorNode &node);
  std::vector<std::size_t> key_columns;
  std::vector<std::size_t> payload_columns;
  std::size_t key_width;
  std::size_t payload_width;
  std::uint32_t busy_work;
};

struct ProbeKernel {
  ProbeKernel(const OperatorNode &node, const OperatorNode &build);
  std::vector<std::size_t> key_columns;
  std::size_t key_width;
  std::size_t probe_columns;
  SchemaPtr payload_schema;
  BoundProjection projection;
  std::uint32_t busy_work;
};

WorkOrderResult ExecuteSelect(const WorkOrder &work_order, const Block &input,
                              const SelectKernel &kernel, BlockPool &pool,
                              std::size_t block_size_bytes);

WorkOrderResult ExecuteBuild(const WorkOrder &work_order, const Block &input,
                             const BuildKernel &kernel, JoinHashTable &hash_table);

WorkOrderResult ExecuteProbe(const WorkOrder &work_order, const Block &input,
                             const ProbeKernel &kernel, BlockPool &pool,
                             std::size_t block_size_bytes);

WorkOrderResult ExecuteAggregate(const WorkOrder &work_order, const Block &input,
                                 AggregationState &state, std::uint32_t busy_work = 0);

// Burns roughly `iterations` dependent multiply-xor steps.
void SpinWork(std::uint64_t iterations);

}  // namespace uot

#endif  // UOT_OPERATORS_OPERATORS_HPP_
