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

#include "uot/bench/result_table.hpp"

#include <algorithm>
#include <ostream>

namespace uot {

std::string FormatRow(const Tuple &tuple) {
  std::string line;
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (i > 0) line += ',';
    line += DatumToString(tuple[i]);
  }
  return line;
}

std::vector<std::string> SortedResultRows(const StorageManager &storage, const Table &table) {
  std::vector<std::string> rows;
  rows.reserve(table.total_tuples());
  for (BlockId id : table.block_ids()) {
    const BlockPtr block = storage.GetBlock(id);
    for (std::size_t r = 0; r < block->fill_count(); ++r) {
      rows.push_back(FormatRow(block->ReadTuple(r)));
    }
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

void WriteResultCsv(std::ostream &out, const StorageManager &storage, const Table &table) {
  const Schema &schema = table.schema();
  for (std::size_t c = 0; c < schema.num_columns(); ++c) {
    if (c > 0) out << ',';
    out << schema.column(c).name;
  }
  out << '\n';
  for (const std::string &row : SortedResultRows(storage, table)) out << row << '\n';
}

}  // namespace uot
