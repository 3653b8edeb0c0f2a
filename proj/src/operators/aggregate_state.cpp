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

#include "uot/operators/aggregate_state.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

#include "uot/operators/hash_table.hpp"
#include "uot/plan/expression.hpp"

namespace uot {

AggregationState::AggregationState(SchemaPtr input_schema, AggregateSpec spec,
                                   SchemaPtr output_schema, MemoryTracker *memory)
    : input_schema_(std::move(input_schema)),
      spec_(std::move(spec)),
      output_schema_(std::move(output_schema)),
      memory_(memory) {
  for (std::size_t c : spec_.group_by) group_width_ += input_schema_->column(c).width;
}

AggregationState::~AggregationState() {
  if (memory_ != nullptr && reserved_bytes_ > 0) {
    memory_->Release(reserved_bytes_, MemoryCategory::kAggregateState);
  }
}

std::size_t AggregationState::GroupBytes() const {
  std::size_t bytes = group_width_ + spec_.aggregates.size() * sizeof(Accumulator);
  for (const AggregateCall &call : spec_.aggregates) {
    if (call.fn == AggregateFn::kSum &&
        input_schema_->column(call.column).type == ColumnType::kDouble) {
      bytes += sizeof(ExactSum);
    }
  }
  return bytes;
}

void AggregationState::Update(std::vector<Accumulator> &accs, const Block &block,
                              std::size_t row) const {
  for (std::size_t a = 0; a < spec_.aggregates.size(); ++a) {
    const AggregateCall &call = spec_.aggregates[a];
    Accumulator &acc = accs[a];
    if (call.fn == AggregateFn::kCount) {
      ++acc.i;
      acc.seen = true;
      continue;
    }
    const bool is_int = input_schema_->column(call.column).type == ColumnType::kInt64;
    std::int64_t iv = 0;
    double dv = 0.0;
    if (is_int) {
      std::memcpy(&iv, block.cell(row, call.column), sizeof(iv));
    } else {
      std::memcpy(&dv, block.cell(row, call.column), sizeof(dv));
    }
    switch (call.fn) {
      case AggregateFn::kSum:
        if (is_int) {
          acc.wide += iv;
        } else {
          if (!acc.exact) acc.exact = std::make_unique<ExactSum>();
          acc.exact->Add(dv);
        }
        break;
      case AggregateFn::kMin:
        if (is_int) {
          acc.i = acc.seen ? std::min(acc.i, iv) : iv;
        } else {
          acc.d = acc.seen ? std::min(acc.d, dv) : dv;
        }
        break;
      case AggregateFn::kMax:
        if (is_int) {
          acc.i = acc.seen ? std::max(acc.i, iv) : iv;
        } else {
          acc.d = acc.seen ? std::max(acc.d, dv) : dv;
        }
        break;
      case AggregateFn::kCount:
        break;
    }
    acc.seen = true;
  }
}

void AggregationState::Combine(std::vector<Accumulator> &into,
                               std::vector<Accumulator> &from) const {
  for (std::size_t a = 0; a < spec_.aggregates.size(); ++a) {
    const AggregateCall &call = spec_.aggregates[a];
    Accumulator &x = into[a];
    Accumulator &y = from[a];
    if (!y.seen) continue;
    if (!x.seen) {
      x = std::move(y);
      continue;
    }
    const bool is_int = call.fn == AggregateFn::kCount ||
                        input_schema_->column(call.column).type == ColumnType::kInt64;
    switch (call.fn) {
      case AggregateFn::kCount:
        x.i += y.i;
        break;
      case AggregateFn::kSum:
        if (is_int) {
          x.wide += y.wide;
        } else {
          x.exact->Merge(*y.exact);
        }
        break;
      case AggregateFn::kMin:
        if (is_int) {
          x.i = std::min(x.i, y.i);
        } else {
          x.d = std::min(x.d, y.d);
        }
        break;
      case AggregateFn::kMax:
        if (is_int) {
          x.i = std::max(x.i, y.i);
        } else {
          x.d = std::max(x.d, y.d);
        }
        break;
    }
  }
}

AggregationState::GroupMap AggregationState::AccumulateBlock(const Block &block) const {
  GroupMap local;
  std::string key(group_width_, '\0');
  for (std::size_t row = 0; row < block.fill_count(); ++row) {
    std::size_t offset = 0;
    for (std::size_t c : spec_.group_by) {
      const std::size_t width = input_schema_->column(c).width;
      std::memcpy(key.data() + offset, block.cell(row, c), width);
      offset += width;
    }
    auto [it, inserted] = local.try_emplace(key);
    if (inserted) it->second.resize(spec_.aggregates.size());
    Update(it->second, block, row);
  }
  return local;
}

void AggregationState::Merge(GroupMap &&local) {
  std::array<std::vector<GroupMap::node_type>, kPartitions> buckets;
  while (!local.empty()) {
    auto node = local.extract(local.begin());
    const std::size_t p =
        HashKeyBytes({reinterpret_cast<const std::byte *>(node.key().data()), node.key().size()}) %
        kPartitions;
    buckets[p].push_back(std::move(node));
  }
  std::size_t new_groups = 0;
  for (std::size_t p = 0; p < kPartitions; ++p) {
    if (buckets[p].empty()) continue;
    std::lock_guard<std::mutex> lock(mutexes_[p]);
    for (auto &node : buckets[p]) {
      auto it = partitions_[p].find(node.key());
      if (it == partitions_[p].end()) {
        partitions_[p].insert(std::move(node));
        ++new_groups;
      } else {
        Combine(it->second, node.mapped());
      }
    }
  }
  if (memory_ != nullptr && new_groups > 0) {
    const std::size_t bytes = new_groups * GroupBytes();
    memory_->Reserve(bytes, MemoryCategory::kAggregateState);
    std::lock_guard<std::mutex> lock(reserve_mutex_);
    reserved_bytes_ += bytes;
  }
}

std::size_t AggregationState::group_count() const {
  std::size_t n = 0;
  for (const GroupMap &m : partitions_) n += m.size();
  return n;
}

std::vector<std::byte> AggregationState::Finalize() {
  const Schema &out = *output_schema_;
  std::vector<std::byte> rows(group_count() * out.tuple_width());
  std::size_t r = 0;
  for (std::size_t p = 0; p < kPartitions; ++p) {
    std::lock_guard<std::mutex> lock(mutexes_[p]);
    for (const auto &[key, accs] : partitions_[p]) {
      std::byte *dst = rows.data() + r * out.tuple_width();
      std::memcpy(dst, key.data(), key.size());
      std::size_t column = spec_.group_by.size();
      for (std::size_t a = 0; a < accs.size(); ++a, ++column) {
        std::byte *cell = dst + out.offset(column);
        const Accumulator &acc = accs[a];
        const bool sum = spec_.aggregates[a].fn == AggregateFn::kSum;
        if (out.column(column).type == ColumnType::kInt64) {
          const std::int64_t v = sum ? ClampToInt64(acc.wide) : acc.i;
          std::memcpy(cell, &v, sizeof(v));
        } else {
          const double v = sum ? acc.exact->Value() : acc.d;
          std::memcpy(cell, &v, sizeof(v));
        }
      }
      ++r;
    }
  }
  return rows;
}

}  // namespace uot
