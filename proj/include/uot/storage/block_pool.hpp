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

#ifndef UOT_STORAGE_BLOCK_POOL_HPP_
#define UOT_STORAGE_BLOCK_POOL_HPP_

#include <cstddef>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "uot/storage/block.hpp"
#include "uot/storage/memory_tracker.hpp"
#include "uot/storage/types.hpp"

namespace uot {

class StorageManager;

/**
 * @brief Thread-safe pool of partially filled temporary output blocks.
 *
 * A work order checks a block out, writes to it, and returns it. Full blocks
 * are sealed on return and leave the pool; partial blocks go back on the free
 * list so the next writer keeps filling them. A block is held by at most one
 * work order at a time.
 **/
class BlockPool {
 public:
  enum class LogKind { kCheckout, kReturn };

  struct LogEntry {
    LogKind kind;
    BlockId block_id;
    WorkOrderId holder;
  };

  explicit BlockPool(StorageManager *storage,
                     MemoryCategory category = MemoryCategory::kTemporaryBlock)
      : storage_(storage), category_(category) {}

  BlockPool(const BlockPool &) = delete;
  BlockPool &operator=(const BlockPool &) = delete;

  // Returns a pooled partial block matching (schema, layout, block size) if
  // one exists, otherwise a freshly allocated empty block.
  BlockPtr Checkout(const SchemaPtr &schema, Layout layout, std::size_t block_size_bytes,
                    WorkOrderId holder);

  // Returns true if the block was full and has been sealed (and detached from
  // the pool). Throws NotHolder if `holder` does not hold the block.
  bool Return(const BlockPtr &block, WorkOrderId holder);

  // Seals and removes every non-empty block on the free list; empty blocks
  // are freed. Used when the producing operator finishes.
  std::vector<BlockPtr> Flush();

  std::size_t free_count() const;
  std::size_t checked_out_count() const;
  bool IsFree(BlockId id) const;
  bool IsCheckedOut(BlockId id) const;

  void set_logging(bool enabled) { logging_ = enabled; }
  std::vector<LogEntry> log() const;

 private:
  StorageManager *storage_;
  MemoryCategory category_;
  bool logging_ = false;

  mutable std::mutex mutex_;
  std::vector<BlockPtr> free_list_;
  std::unordered_map<BlockId, WorkOrderId> checked_out_;
  std::vector<LogEntry> log_;
};

}  // namespace uot

#endif  // UOT_STORAGE_BLOCK_POOL_HPP_
