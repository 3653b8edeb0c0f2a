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

#include "uot/storage/block_pool.hpp"

#include <algorithm>
#include <string>

#include "uot/common/error.hpp"
#include "uot/storage/storage_manager.hpp"

namespace uot {

BlockPtr BlockPool::Checkout(const SchemaPtr &schema, Layout layout,
                             std::size_t block_size_bytes, WorkOrderId holder) {
  BlockPtr block;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    // Most recently returned first: it is the one most likely still cached.
    for (auto it = free_list_.rbegin(); it != free_list_.rend(); ++it) {
      const Block &candidate = **it;
      if (candidate.layout() == layout && candidate.block_size_bytes() == block_size_bytes &&
          candidate.schema() == *schema) {
        block = *it;
        free_list_.erase(std::next(it).base());
        break;
      }
    }
    if (block != nullptr) {
      checked_out_.emplace(block->id(), holder);
      if (logging_) log_.push_back({LogKind::kCheckout, block->id(), holder});
      return block;
    }
  }
  block = storage_->AllocateBlock(schema, layout, block_size_bytes, category_);
  std::lock_guard<std::mutex> lock(mutex_);
  checked_out_.emplace(block->id(), holder);
  if (logging_) log_.push_back({LogKind::kCheckout, block->id(), holder});
  return block;
}

bool BlockPool::Return(const BlockPtr &block, WorkOrderId holder) {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = checked_out_.find(block->id());
  if (it == checked_out_.end() || it->second != holder) {
    throw Error(ErrorCode::kNotHolder, "work order " + std::to_string(holder) +
                                           " does not hold block " + std::to_string(block->id()));
  }
  checked_out_.erase(it);
  if (logging_) log_.push_back({LogKind::kReturn, block->id(), holder});
  if (block->full()) {
    block->Seal();
    return true;
  }
  free_list_.push_back(block);
  return false;
}

std::vector<BlockPtr> BlockPool::Flush() {
  std::vector<BlockPtr> drained;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    drained.swap(free_list_);
  }
  std::vector<BlockPtr> flushed;
  for (BlockPtr &block : drained) {
    if (block->empty()) {
      storage_->FreeBlock(block->id());
      continue;
    }
    block->Seal();
    flushed.push_back(std::move(block));
  }
  return flushed;
}

std::size_t BlockPool::free_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return free_list_.size();
}

std::size_t BlockPool::checked_out_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return checked_out_.size();
}

bool BlockPool::IsFree(BlockId id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  return std::any_of(free_list_.begin(), free_list_.end(),
                     [id](const BlockPtr &b) { return b->id() == id; });
}

bool BlockPool::IsCheckedOut(BlockId id) const {
  std::lock_guard<std::mutex> lock(mutex_);
  return checked_out_.count(id) != 0;
}

std::vector<BlockPool::LogEntry> BlockPool::log() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return log_;
}

}  // namespace uot
