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

#ifndef UOT_STORAGE_BLOCK_HPP_
#define UOT_STORAGE_BLOCK_HPP_

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "uot/storage/types.hpp"

namespace uot {

// Number of tuples a block of `block_size_bytes` holds. Bookkeeping lives
// outside the block, so capacity is payload bytes over tuple width.
inline std::size_t BlockCapacity(std::size_t block_size_bytes, std::size_t tuple_width) {
  return block_size_bytes / tuple_width;
}

/**
 * @brief Fixed-capacity storage unit. Row layout stores tuples contiguously;
 *        column layout stores each attribute in its own contiguous region
 *        sized for `capacity()` values.
 *
 * A block has a single writer until it is sealed, after which it is
 * immutable and may be read from any thread.
 **/
class Block {
 public:
  Block(BlockId id, SchemaPtr schema, Layout layout, std::size_t block_size_bytes);

  Block(const Block &) = delete;
  Block &operator=(const Block &) = delete;

  BlockId id() const { return id_; }
  const Schema &schema() const { return *schema_; }
  const SchemaPtr &schema_ptr() const { return schema_; }
  Layout layout() const { return layout_; }
  std::size_t block_size_bytes() const { return block_size_bytes_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t fill_count() const { return fill_count_; }
  bool full() const { return fill_count_ == capacity_; }
  bool empty() const { return fill_count_ == 0; }
  bool sealed() const { return sealed_; }
  void Seal() { sealed_ = true; }

  // Bytes occupied by stored tuples (fill_count * tuple_width).
  std::size_t used_bytes() const { return fill_count_ * schema_->tuple_width(); }

  const std::byte *cell(std::size_t row, std::size_t column) const {
    return payload_.get() + CellOffset(row, column);
  }

  // Appends one row-format tuple. Returns false if the block is full.
  bool AppendRow(std::span<const std::byte> row);
  void AppendTuple(const Tuple &tuple);

  // Gathers one tuple into row format at `dst`.
  void CopyRowTo(std::size_t row, std::byte *dst) const;

  Tuple ReadTuple(std::size_t row) const;
  std::vector<Datum> ReadColumn(std::size_t column) const;

 private:
  std::size_t CellOffset(std::size_t row, std::size_t column) const {
    const std::size_t width = schema_->column(column).width;
    if (layout_ == Layout::kRowStore) {
      return row * schema_->tuple_width() + schema_->offset(column);
    }
    return capacity_ * schema_->offset(column) + row * width;
  }

  const BlockId id_;
  const SchemaPtr schema_;
  const Layout layout_;
  const std::size_t block_size_bytes_;
  const std::size_t capacity_;
  std::size_t fill_count_ = 0;
  bool sealed_ = false;
  std::unique_ptr<std::byte[]> payload_;
};

using BlockPtr = std::shared_ptr<Block>;

}  // namespace uot

#endif  // UOT_STORAGE_BLOCK_HPP_
