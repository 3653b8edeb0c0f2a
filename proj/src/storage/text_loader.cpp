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

#include "uot/storage/text_loader.hpp"

#include <charconv>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string_view>

#include "uot/common/error.hpp"

namespace uot {

namespace {

Datum ParseField(std::string_view field, const Column &column, std::size_t line_no) {
  auto fail = [&](const char *what) {
    return Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ", column '" +
                                             column.name + "': " + what + " '" +
                                             std::string(field) + "'");
  };
  switch (column.type) {
    case ColumnType::kInt64: {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size()) throw fail("bad integer");
      return v;
    }
    case ColumnType::kDouble: {
      double v = 0;
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || ptr != field.data() + field.size()) throw fail("bad number");
      return v;
    }
    case ColumnType::kChar:
      if (field.size() > column.width) throw fail("string too long");
      return std::string(field);
  }
  return std::int64_t{0};
}

}  // namespace

Tuple ParseDelimitedLine(const std::string &line, const Schema &schema, char delimiter) {
  Tuple tuple;
  tuple.reserve(schema.num_columns());
  std::string_view rest(line);
  if (!rest.empty() && rest.back() == '\r') rest.remove_suffix(1);
  for (std::size_t c = 0; c < schema.num_columns(); ++c) {
    const std::size_t pos = rest.find(delimiter);
    const std::string_view field = rest.substr(0, pos);
    tuple.push_back(ParseField(field, schema.column(c), 0));
    if (pos == std::string_view::npos) {
      rest = {};
      if (c + 1 != schema.num_columns()) {
        throw Error(ErrorCode::kSchemaMismatch, "too few fields in line '" + line + "'");
      }
    } else {
      rest.remove_prefix(pos + 1);
    }
  }
  if (!rest.empty()) {
    throw Error(ErrorCode::kSchemaMismatch, "too many fields in line '" + line + "'");
  }
  return tuple;
}

std::vector<Tuple> ParseDelimited(std::istream &in, const Schema &schema, char delimiter) {
  std::vector<Tuple> tuples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    try {
      tuples.push_back(ParseDelimitedLine(line, schema, delimiter));
    } catch (const Error &e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return tuples;
}

void WriteDelimited(std::ostream &out, const Schema &schema, const std::vector<Tuple> &tuples,
                    char delimiter) {
  for (const Tuple &t : tuples) {
    for (std::size_t c = 0; c < schema.num_columns(); ++c) {
      if (c > 0) out << delimiter;
      out << DatumToString(t.at(c));
    }
    out << '\n';
  }
}

}  // namespace uot
