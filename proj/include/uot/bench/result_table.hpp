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

#ifndef UOT_BENCH_RESULT_TABLE_HPP_
#define UOT_BENCH_RESULT_TABLE_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "uot/storage/storage_manager.hpp"

namespace uot {

// Every row of `table` as a comma-joined line, sorted. Doubles print with 17
// significant digits so equal multisets give equal output.
std::vector<std::string> SortedResultRows(const StorageManager &storage, const Table &table);

// Header of column names, then the sorted rows.
void WriteResultCsv(std::ostream &out, const StorageManager &storage, const Table &table);

std::string FormatRow(const Tuple &tuple);

}  // namespace uot

#endif  // UOT_BENCH_RESULT_TABLE_HPP_
