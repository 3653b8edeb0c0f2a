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

#include "uot/storage/block.hpp"

#include <cstring>
#include <string>

#include "uot/common/error.hpp"

namespace uot {

Block::Block(BlockId id, SchemaPtr schema, Layout layout, std::size_t block_size_bytes)
    : id_(id),
      schema_(std::move(schema)),
      layout_(layout),
      block_size_bytes_(block_size_bytes),
      capacity_(BlockCapacity(block_size_bytes, schema_->tuple_width())),
      payload_(new std::byte[block_size_bytes]) {
  if (capacity_ == 0) {
    throw Error(ErrorCode::kBlockTooSmall,
                "block of " + std::to_string(block_size_bytes) + " bytes cannot hold a " +
                    std::to_string(schema_->tuple_width()) + "-byte tuple");
  }
}

bool Block::AppendRow(std::span<const std::byte> row) {
  if (full()) return false;
  const Schema &schema = *schema_;
  if (layout_ == Layout::kRowStore) {
    std::memcpy(payload_.get() + fill_count_ * schema.tuple_width(), row.data(), schema.tuple_width());
  } else {
    for (std::size_t c = 0; c < schema.num_columns(); ++c) {
      std::memcpy(payload_.get() + CellOffset(fill_count_, c), row.data() + schema.offset(c),
                  schema.column(c).width);
    }
  }
  ++fill_count_;
  return true;
}

void Block::AppendTuple(const Tuple &tuple) {
  std::vector<std::byte> row(schema_->tuple_width());
  EncodeTuple(*schema_, tuple, row.data());
  if (!AppendRow(row)) {
    throw Error(ErrorCode::kIndexOutOfRange, "block " + std::to_string(id_) + " is full");
  }
}

void Block::CopyRowTo(std::size_t row, std::byte *dst) const {
  const Schema &schema = *schema_;
  if (layout_ == Layout::kRowStore) {
    std::memcpy(dst, payload_.get() + row * schema.tuple_width(), schema.tuple_width());
    return;
  }
  for (std::size_t c = 0; c < schema.num_columns(); ++c) {
    std::memcpy(dst + schema.offset(c), cell(row, c), schema.column(c).width);
  }
}

Tuple Block::ReadTuple(std::size_t row) const {
  if (row >= fill_count_) {
    throw Error(ErrorCode::kIndexOutOfRange, "row " + std::to_string(row) + " out of range");
  }
  Tuple out;
  out.reserve(schema_->num_columns());
  for (std::size_t c = 0; c < schema_->num_columns(); ++c) {
    out.push_back(DecodeDatum(schema_->column(c), cell(row, c)));
  }
  return out;
}

std::vector<Datum> Block::ReadColumn(std::size_t column) const {
  if (column >= schema_->num_columns()) {
    throw Error(ErrorCode::kIndexOutOfRange,
                "column " + std::to_string(column) + " out of range for " + schema_->ToString());
  }
  const Column &col = schema_->column(column);
  std::vector<Datum> out;
  out.reserve(fill_count_);
  for (std::size_t r = 0; r < fill_count_; ++r) {
    out.push_back(DecodeDatum(col, cell(r, column)));
  }
  return out;
}

}  // namespace uot
