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

#ifndef UOT_OPERATORS_AGGREGATE_STATE_HPP_
#define UOT_OPERATORS_AGGREGATE_STATE_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "uot/operators/exact_sum.hpp"
#include "uot/plan/plan_dag.hpp"
#include "uot/storage/block.hpp"
#include "uot/storage/memory_tracker.hpp"

namespace uot {

/**
 * @brief Shared hash-grouped aggregation state for one Aggregate operator.
 *
 * Each work order aggregates its block into a private map and merges it into
 * the shared state; merges are partitioned by group hash so concurrent work
 * orders rarely contend. Finalize() runs once, after the last merge.
 **/
class AggregationState {
 public:
  // Sums are exact until Finalize: integers widen and clamp once, doubles
  // round once, so results do not depend on merge order.
  struct Accumulator {
    std::int64_t i = 0;
    __int128 wide = 0;
    double d = 0.0;
    std::unique_ptr<ExactSum> exact;
    bool seen = false;
  };
  using GroupMap = std::unordered_map<std::string, std::vector<Accumulator>>;

  AggregationState(SchemaPtr input_schema, AggregateSpec spec, SchemaPtr output_schema,
                   MemoryTracker *memory = nullptr);
  ~AggregationState();

  AggregationState(const AggregationState &) = delete;
  AggregationState &operator=(const AggregationState &) = delete;

  // Aggregates every tuple of `block` into a private map.
  GroupMap AccumulateBlock(const Block &block) const;
  void Merge(GroupMap &&local);

  // Output rows in the operator's output schema, row format, concatenated.
  std::vector<std::byte> Finalize();

  std::size_t group_count() const;
  const SchemaPtr &output_schema() const { return output_schema_; }

 private:
  static constexpr std::size_t kPartitions = 16;

  void Update(std::vector<Accumulator> &accs, const Block &block, std::size_t row) const;
  void Combine(std::vector<Accumulator> &into, std::vector<Accumulator> &from) const;
  std::size_t GroupBytes() const;

  SchemaPtr input_schema_;
  AggregateSpec spec_;
  SchemaPtr output_schema_;
  MemoryTracker *memory_;
  std::size_t group_width_ = 0;
  std::size_t reserved_bytes_ = 0;

  std::array<std::mutex, kPartitions> mutexes_;
  std::array<GroupMap, kPartitions> partitions_;
  std::mutex reserve_mutex_;
};

}  // namespace uot

#endif  // UOT_OPERATORS_AGGREGATE_STATE_HPP_
