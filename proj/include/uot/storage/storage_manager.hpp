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

#ifndef UOT_STORAGE_STORAGE_MANAGER_HPP_
#define UOT_STORAGE_STORAGE_MANAGER_HPP_

#include <atomic>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "uot/storage/block.hpp"
#include "uot/storage/memory_tracker.hpp"
#include "uot/storage/types.hpp"

namespace uot {

// A named relation: an ordered list of blocks sharing schema, layout and
// block size. Base tables are filled by inserts; temporary tables receive
// sealed blocks from the scheduler.
class Table {
 public:
  Table(std::string name, SchemaPtr schema, Layout layout, std::size_t block_size_bytes,
        bool is_temporary)
      : name_(std::move(name)),
        schema_(std::move(schema)),
        layout_(layout),
        block_size_bytes_(block_size_bytes),
        is_temporary_(is_temporary) {}

  const std::string &name() const { return name_; }
  const Schema &schema() const { return *schema_; }
  const SchemaPtr &schema_ptr() const { return schema_; }
  Layout layout() const { return layout_; }
  std::size_t block_size_bytes() const { return block_size_bytes_; }
  std::size_t capacity_tuples() const {
    return BlockCapacity(block_size_bytes_, schema_->tuple_width());
  }
  bool is_temporary() const { return is_temporary_; }

  const std::vector<BlockId> &block_ids() const { return block_ids_; }
  std::size_t num_blocks() const { return block_ids_.size(); }
  std::size_t total_tuples() const { return total_tuples_; }
  std::size_t total_bytes() const { return total_tuples_ * schema_->tuple_width(); }

 private:
  friend class StorageManager;

  std::string name_;
  SchemaPtr schema_;
  Layout layout_;
  std::size_t block_size_bytes_;
  bool is_temporary_;
  std::vector<BlockId> block_ids_;
  std::size_t total_tuples_ = 0;
};

/**
 * @brief Owns every block and table of one engine instance.
 *
 * Block allocation and lookup are thread-safe. Table mutation (inserts,
 * appending sealed blocks) is single-threaded by contract: base tables are
 * loaded before a query, temporary tables are only touched by the scheduler's
 * coordinator.
 **/
class StorageManager {
 public:
  explicit StorageManager(std::size_t buffer_cap_bytes = 0) : memory_(buffer_cap_bytes) {}

  StorageManager(const StorageManager &) = delete;
  StorageManager &operator=(const StorageManager &) = delete;

  Table &CreateTable(const std::string &name, SchemaPtr schema, Layout layout,
                     std::size_t block_size_bytes);
  // Temporary tables are always row-store.
  Table &CreateTemporaryTable(const std::string &name, SchemaPtr schema,
                              std::size_t block_size_bytes);

  bool HasTable(const std::string &name) const;
  Table &GetTable(const std::string &name);
  const Table &GetTable(const std::string &name) const;
  void DropTable(const std::string &name);
  std::vector<std::string> TableNames() const;

  // Appends tuples in order. Returns the number of full blocks in the table.
  std::size_t InsertTuples(Table &table, std::span<const Tuple> tuples);
  // Same as InsertTuples for pre-encoded row-format tuples.
  std::size_t InsertRows(Table &table, std::span<const std::byte> rows);

  // Adds a sealed block to a temporary table.
  void AppendBlock(Table &table, const BlockPtr &block);

  BlockPtr AllocateBlock(SchemaPtr schema, Layout layout, std::size_t block_size_bytes,
                         MemoryCategory category);
  BlockPtr GetBlock(BlockId id) const;
  // Releases the block's memory. The block must not be referenced by a table
  // that will be read again.
  void FreeBlock(BlockId id);

  MemoryTracker &memory() { return memory_; }
  const MemoryTracker &memory() const { return memory_; }

 private:
  struct BlockEntry {
    BlockPtr block;
    MemoryCategory category;
  };

  MemoryTracker memory_;
  std::atomic<BlockId> next_block_id_{0};

  mutable std::mutex blocks_mutex_;
  std::unordered_map<BlockId, BlockEntry> blocks_;

  std::map<std::string, std::unique_ptr<Table>> tables_;
};

}  // namespace uot

#endif  // UOT_STORAGE_STORAGE_MANAGER_HPP_
