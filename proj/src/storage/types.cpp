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

#include "uot/storage/types.hpp"

#include <cstring>
#include <sstream>

#include "uot/common/error.hpp"

namespace uot {

std::string_view LayoutName(Layout layout) {
  return layout == Layout::kRowStore ? "row" : "column";
}

Layout ParseLayout(std::string_view text) {
  if (text == "row" || text == "RowStore") return Layout::kRowStore;
  if (text == "column" || text == "col" || text == "ColumnStore") return Layout::kColumnStore;
  throw Error(ErrorCode::kParseError, "unknown layout '" + std::string(text) + "'");
}

std::string_view ColumnTypeName(ColumnType type) {
  switch (type) {
    case ColumnType::kInt64: return "int64";
    case ColumnType::kDouble: return "double";
    case ColumnType::kChar: return "char";
  }
  return "?";
}

Schema::Schema(std::vector<Column> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) {
    throw Error(ErrorCode::kSchemaMismatch, "schema needs at least one column");
  }
  offsets_.reserve(columns_.size());
  for (const Column &c : columns_) {
    if (c.width == 0) {
      throw Error(ErrorCode::kSchemaMismatch, "column '" + c.name + "' has zero width");
    }
    if (c.type != ColumnType::kChar && c.width != 8) {
      throw Error(ErrorCode::kSchemaMismatch, "numeric column '" + c.name + "' must be 8 bytes");
    }
    offsets_.push_back(tuple_width_);
    tuple_width_ += c.width;
  }
}

std::string Schema::ToString() const {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i > 0) out << ", ";
    out << columns_[i].name << ":" << ColumnTypeName(columns_[i].type);
    if (columns_[i].type == ColumnType::kChar) out << "(" << columns_[i].width << ")";
  }
  out << ")";
  return out.str();
}

void EncodeDatum(const Column &column, const Datum &value, std::byte *dst) {
  switch (column.type) {
    case ColumnType::kInt64: {
      const auto *v = std::get_if<std::int64_t>(&value);
      if (v == nullptr) {
        throw Error(ErrorCode::kSchemaMismatch, "expected int64 for column '" + column.name + "'");
      }
      std::memcpy(dst, v, sizeof(*v));
      return;
    }
    case ColumnType::kDouble: {
      double d;
      if (const auto *v = std::get_if<double>(&value)) {
        d = *v;
      } else if (const auto *i = std::get_if<std::int64_t>(&value)) {
        d = static_cast<double>(*i);
      } else {
        throw Error(ErrorCode::kSchemaMismatch, "expected double for column '" + column.name + "'");
      }
      std::memcpy(dst, &d, sizeof(d));
      return;
    }
    case ColumnType::kChar: {
      const auto *s = std::get_if<std::string>(&value);
      if (s == nullptr || s->size() > column.width) {
        throw Error(ErrorCode::kSchemaMismatch,
                    "expected string of at most " + std::to_string(column.width) +
                        " bytes for column '" + column.name + "'");
      }
      std::memcpy(dst, s->data(), s->size());
      std::memset(dst + s->size(), 0, column.width - s->size());
      return;
    }
  }
}

Datum DecodeDatum(const Column &column, const std::byte *src) {
  switch (column.type) {
    case ColumnType::kInt64: {
      std::int64_t v;
      std::memcpy(&v, src, sizeof(v));
      return v;
    }
    case ColumnType::kDouble: {
      double v;
      std::memcpy(&v, src, sizeof(v));
      return v;
    }
    case ColumnType::kChar: {
      std::size_t len = column.width;
      while (len > 0 && src[len - 1] == std::byte{0}) --len;
      return std::string(reinterpret_cast<const char *>(src), len);
    }
  }
  return std::int64_t{0};
}

void EncodeTuple(const Schema &schema, const Tuple &tuple, std::byte *dst) {
  if (tuple.size() != schema.num_columns()) {
    throw Error(ErrorCode::kSchemaMismatch,
                "tuple has " + std::to_string(tuple.size()) + " values, schema has " +
                    std::to_string(schema.num_columns()));
  }
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    EncodeDatum(schema.column(i), tuple[i], dst + schema.offset(i));
  }
}

Tuple DecodeTuple(const Schema &schema, const std::byte *src) {
  Tuple out;
  out.reserve(schema.num_columns());
  for (std::size_t i = 0; i < schema.num_columns(); ++i) {
    out.push_back(DecodeDatum(schema.column(i), src + schema.offset(i)));
  }
  return out;
}

std::string DatumToString(const Datum &value) {
  if (const auto *i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
  if (const auto *d = std::get_if<double>(&value)) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", *d);
    return buf;
  }
  return std::get<std::string>(value);
}

}  // namespace uot
