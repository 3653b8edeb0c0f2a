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

#include "uot/storage/storage_manager.hpp"

#include <string>

#include "uot/common/error.hpp"

namespace uot {

Table &StorageManager::CreateTable(const std::string &name, SchemaPtr schema, Layout layout,
                                   std::size_t block_size_bytes) {
  if (tables_.count(name) != 0) {
    throw Error(ErrorCode::kDuplicateTableName, "table '" + name + "' already exists");
  }
  if (block_size_bytes < schema->tuple_width()) {
    throw Error(ErrorCode::kBlockTooSmall,
                "block of " + std::to_string(block_size_bytes) + " bytes is smaller than a " +
                    std::to_string(schema->tuple_width()) + "-byte tuple");
  }
  auto table = std::make_unique<Table>(name, std::move(schema), layout, block_size_bytes, false);
  Table &ref = *table;
  tables_.emplace(name, std::move(table));
  return ref;
}

Table &StorageManager::CreateTemporaryTable(const std::string &name, SchemaPtr schema,
                                            std::size_t block_size_bytes) {
  Table &table = CreateTable(name, std::move(schema), Layout::kRowStore, block_size_bytes);
  table.is_temporary_ = true;
  return table;
}

bool StorageManager::HasTable(const std::string &name) const { return tables_.count(name) != 0; }

Table &StorageManager::GetTable(const std::string &name) {
  auto it = tables_.find(name);
  if (it == tables_.end()) throw Error(ErrorCode::kUnknownTable, "no table '" + name + "'");
  return *it->second;
}

const Table &StorageManager::GetTable(const std::string &name) const {
  auto it = tables_.find(name);
  if (it == tables_.end()) throw Error(ErrorCode::kUnknownTable, "no table '" + name + "'");
  return *it->second;
}

void StorageManager::DropTable(const std::string &name) {
  auto it = tables_.find(name);
  if (it == tables_.end()) throw Error(ErrorCode::kUnknownTable, "no table '" + name + "'");
  for (BlockId id : it->second->block_ids_) FreeBlock(id);
  tables_.erase(it);
}

std::vector<std::string> StorageManager::TableNames() const {
  std::vector<std::string> names;
  for (const auto &[name, table] : tables_) names.push_back(name);
  return names;
}

std::size_t StorageManager::InsertTuples(Table &table, std::span<const Tuple> tuples) {
  std::vector<std::byte> rows(tuples.size() * table.schema().tuple_width());
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    EncodeTuple(table.schema(), tuples[i], rows.data() + i * table.schema().tuple_width());
  }
  return InsertRows(table, rows);
}

std::size_t StorageManager::InsertRows(Table &table, std::span<const std::byte> rows) {
  const std::size_t width = table.schema().tuple_width();
  if (rows.size() % width != 0) {
    throw Error(ErrorCode::kSchemaMismatch, "row bytes are not a multiple of the tuple width");
  }
  const MemoryCategory category =
      table.is_temporary() ? MemoryCategory::kTemporaryBlock : MemoryCategory::kBaseTable;
  BlockPtr last;
  if (!table.block_ids_.empty()) last = GetBlock(table.block_ids_.back());
  const std::size_t n = rows.size() / width;
  for (std::size_t i = 0; i < n; ++i) {
    if (last == nullptr || last->full()) {
      last = AllocateBlock(table.schema_ptr(), table.layout(), table.block_size_bytes(), category);
      table.block_ids_.push_back(last->id());
    }
    last->AppendRow(rows.subspan(i * width, width));
  }
  table.total_tuples_ += n;

  std::size_t full = 0;
  for (BlockId id : table.block_ids_) {
    if (GetBlock(id)->full()) ++full;
  }
  return full;
}

void StorageManager::AppendBlock(Table &table, const BlockPtr &block) {
  if (!(block->schema() == table.schema()) || block->layout() != table.layout() ||
      block->block_size_bytes() != table.block_size_bytes()) {
    throw Error(ErrorCode::kSchemaMismatch, "block does not match table '" + table.name() + "'");
  }
  table.block_ids_.push_back(block->id());
  table.total_tuples_ += block->fill_count();
}

BlockPtr StorageManager::AllocateBlock(SchemaPtr schema, Layout layout,
                                       std::size_t block_size_bytes, MemoryCategory category) {
  memory_.Reserve(block_size_bytes, category);
  BlockPtr block;
  try {
    block = std::make_shared<Block>(next_block_id_.fetch_add(1), std::move(schema), layout,
                                    block_size_bytes);
  } catch (...) {
    memory_.Release(block_size_bytes, category);
    throw;
  }
  std::lock_guard<std::mutex> lock(blocks_mutex_);
  blocks_.emplace(block->id(), BlockEntry{block, category});
  return block;
}

BlockPtr StorageManager::GetBlock(BlockId id) const {
  std::lock_guard<std::mutex> lock(blocks_mutex_);
  auto it = blocks_.find(id);
  if (it == blocks_.end()) {
    throw Error(ErrorCode::kIndexOutOfRange, "no block " + std::to_string(id));
  }
  return it->second.block;
}

void StorageManager::FreeBlock(BlockId id) {
  BlockEntry entry;
  {
    std::lock_guard<std::mutex> lock(blocks_mutex_);
    auto it = blocks_.find(id);
    if (it == blocks_.end()) return;
    entry = std::move(it->second);
    blocks_.erase(it);
  }
  memory_.Release(entry.block->block_size_bytes(), entry.category);
}

}  // namespace uot
