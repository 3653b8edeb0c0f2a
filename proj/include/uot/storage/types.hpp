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

#ifndef UOT_STORAGE_TYPES_HPP_
#define UOT_STORAGE_TYPES_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace uot {

using BlockId = std::uint64_t;
using WorkOrderId = std::uint64_t;

inline constexpr BlockId kInvalidBlockId = ~BlockId{0};

enum class ColumnType { kInt64, kDouble, kChar };

enum class Layout { kRowStore, kColumnStore };

std::string_view LayoutName(Layout layout);
Layout ParseLayout(std::string_view text);

std::string_view ColumnTypeName(ColumnType type);

// A single attribute value. kChar values are fixed-length byte strings that
// are zero-padded on encode and have trailing zeros stripped on decode.
using Datum = std::variant<std::int64_t, double, std::string>;
using Tuple = std::vector<Datum>;

struct Column {
  std::string name;
  ColumnType type;
  std::size_t width;

  static Column Int64(std::string name) {
    return {std::move(name), ColumnType::kInt64, 8};
  }
  static Column Double(std::string name) {
    return {std::move(name), ColumnType::kDouble, 8};
  }
  static Column Char(std::string name, std::size_t width) {
    return {std::move(name), ColumnType::kChar, width};
  }

  bool operator==(const Column &other) const = default;
};

// Ordered list of fixed-width columns. Immutable once constructed.
class Schema {
 public:
  explicit Schema(std::vector<Column> columns);

  std::size_t num_columns() const { return columns_.size(); }
  const Column &column(std::size_t index) const { return columns_.at(index); }
  const std::vector<Column> &columns() const { return columns_; }

  std::size_t tuple_width() const { return tuple_width_; }

  // Byte offset of a column inside a row-format tuple.
  std::size_t offset(std::size_t index) const { return offsets_[index]; }

  bool operator==(const Schema &other) const { return columns_ == other.columns_; }

  std::string ToString() const;

 private:
  std::vector<Column> columns_;
  std::vector<std::size_t> offsets_;
  std::size_t tuple_width_ = 0;
};

using SchemaPtr = std::shared_ptr<const Schema>;

inline SchemaPtr MakeSchema(std::vector<Column> columns) {
  return std::make_shared<const Schema>(std::move(columns));
}

// Writes `value` into `dst` using the column's fixed width. Throws
// SchemaMismatch if the datum's alternative does not fit the column type.
void EncodeDatum(const Column &column, const Datum &value, std::byte *dst);
Datum DecodeDatum(const Column &column, const std::byte *src);

// Encodes a whole tuple into row format (schema.tuple_width() bytes).
void EncodeTuple(const Schema &schema, const Tuple &tuple, std::byte *dst);
Tuple DecodeTuple(const Schema &schema, const std::byte *src);

std::string DatumToString(const Datum &value);

}  // namespace uot

#endif  // UOT_STORAGE_TYPES_HPP_
