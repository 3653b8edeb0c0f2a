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

#ifndef UOT_BENCH_DATAGEN_HPP_
#define UOT_BENCH_DATAGEN_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "uot/plan/plan_json.hpp"
#include "uot/storage/storage_manager.hpp"

namespace uot {

enum class KeyMode { kUniform, kSequential };
std::string_view KeyModeName(KeyMode mode);
KeyMode ParseKeyMode(std::string_view text);

struct GenTableSpec {
  std::string name;
  std::size_t rows = 0;
  std::size_t tuple_width = 64;  // bytes; at least 26
  double selectivity = 1.0;      // fraction passing the canonical predicate
  double projectivity = 1.0;     // target byte fraction kept by the canonical projection
  std::size_t key_cardinality = 0;  // 0: rows
  KeyMode key_mode = KeyMode::kUniform;
  std::uint64_t seed = 1;
  Layout layout = Layout::kRowStore;
  std::size_t block_size = 128 * 1024;
};

/**
 * Layout of a generated table:
 *
 *   0 key int64 | 1 pay_a char(a) | 2 val double | 3 flag int64 | 4 pay_b char(b)
 *
 * flag is a seeded permutation of 0..rows-1, so the canonical predicate
 * `flag < threshold` with threshold = round(s * rows) passes exactly that many
 * rows. The canonical projection keeps (key, pay_a), with a chosen so the
 * kept width is as close to p * tuple_width as the layout allows; p = 1 keeps
 * every column and drops pay_b.
 **/
struct GeneratedTable {
  std::string name;
  SchemaPtr schema;
  std::int64_t threshold = 0;
  std::size_t passing_rows = 0;
  std::size_t projected_width = 0;
  CanonicalQuery canonical;

  double selectivity(std::size_t rows) const {
    return rows == 0 ? 0.0 : static_cast<double>(passing_rows) / static_cast<double>(rows);
  }
  double projectivity() const {
    return static_cast<double>(projected_width) / static_cast<double>(schema->tuple_width());
  }
};

// Throws InvalidSpec.
SchemaPtr GeneratedSchema(const GenTableSpec &spec);

// Deterministic in the spec. Throws InvalidSpec / DuplicateTableName.
GeneratedTable GenerateTable(StorageManager &storage, const GenTableSpec &spec);

// Same rows as GenerateTable, streamed to a delimited text file.
GeneratedTable GenerateTableFile(const GenTableSpec &spec, const std::string &path,
                                 char delimiter = '|');

}  // namespace uot

#endif  // UOT_BENCH_DATAGEN_HPP_
