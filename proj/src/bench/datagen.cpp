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

#include "uot/bench/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "uot/common/error.hpp"
#include "uot/storage/text_loader.hpp"

namespace uot {

std::string_view KeyModeName(KeyMode mode) {
  return mode == KeyMode::kSequential ? "sequential" : "uniform";
}

KeyMode ParseKeyMode(std::string_view text) {
  if (text == "uniform") return KeyMode::kUniform;
  if (text == "sequential") return KeyMode::kSequential;
  throw Error(ErrorCode::kInvalidSpec, "key mode must be uniform or sequential");
}

namespace {

constexpr std::size_t kFixedBytes = 24;  // key, val, flag
constexpr std::size_t kMinWidth = kFixedBytes + 2;
constexpr std::size_t kChunkRows = 4096;

struct Shape {
  std::size_t pay_a;
  std::size_t pay_b;  // 0: column absent
  bool identity;
};

Shape ShapeOf(const GenTableSpec &spec) {
  if (spec.tuple_width < kMinWidth) {
    throw Error(ErrorCode::kInvalidSpec,
                "tuple width must be at least " + std::to_string(kMinWidth) + " bytes");
  }
  if (!(spec.selectivity >= 0 && spec.selectivity <= 1)) {
    throw Error(ErrorCode::kInvalidSpec, "selectivity must be in [0, 1]");
  }
  if (!(spec.projectivity > 0 && spec.projectivity <= 1)) {
    throw Error(ErrorCode::kInvalidSpec, "projectivity must be in (0, 1]");
  }
  const auto target =
      static_cast<std::size_t>(std::llround(spec.projectivity * static_cast<double>(spec.tuple_width)));
  if (target >= spec.tuple_width) return {spec.tuple_width - kFixedBytes, 0, true};
  const std::size_t max_a = spec.tuple_width - kFixedBytes - 1;
  const std::size_t a = std::clamp<std::size_t>(target > 8 ? target - 8 : 1, 1, max_a);
  return {a, spec.tuple_width - kFixedBytes - a, false};
}

// Calls `sink` with encoded row chunks in order.
GeneratedTable Generate(const GenTableSpec &spec,
                        const std::function<void(std::span<const std::byte>)> &sink) {
  const Shape shape = ShapeOf(spec);
  std::vector<Column> cols = {Column::Int64("key"), Column::Char("pay_a", shape.pay_a),
                              Column::Double("val"), Column::Int64("flag")};
  if (shape.pay_b > 0) cols.push_back(Column::Char("pay_b", shape.pay_b));

  GeneratedTable out;
  out.name = spec.name;
  out.schema = MakeSchema(cols);
  out.threshold = std::llround(spec.selectivity * static_cast<double>(spec.rows));
  out.passing_rows = static_cast<std::size_t>(out.threshold);
  out.canonical.predicate.And(3, CompareOp::kLt, Datum(out.threshold));
  if (shape.identity) {
    out.canonical.projection = Projection::Identity(*out.schema);
    out.projected_width = out.schema->tuple_width();
  } else {
    out.canonical.projection = Projection::Columns({0, 1});
    out.projected_width = 8 + shape.pay_a;
  }

  std::mt19937_64 rng(spec.seed);
  std::vector<std::int64_t> flags(spec.rows);
  std::iota(flags.begin(), flags.end(), 0);
  std::shuffle(flags.begin(), flags.end(), rng);

  const std::size_t card = spec.key_cardinality == 0 ? std::max<std::size_t>(spec.rows, 1)
                                                     : spec.key_cardinality;
  std::uniform_int_distribution<std::int64_t> key_dist(0, static_cast<std::int64_t>(card) - 1);
  std::uniform_real_distribution<double> val_dist(0.0, 1000.0);

  // Payload text: a rotating alphabet, offset per row.
  const std::size_t longest = std::max(shape.pay_a, shape.pay_b);
  std::string alphabet(longest + 26, ' ');
  for (std::size_t i = 0; i < alphabet.size(); ++i) alphabet[i] = static_cast<char>('a' + i % 26);

  const Schema &schema = *out.schema;
  const std::size_t width = schema.tuple_width();
  std::vector<std::byte> chunk;
  for (std::size_t begin = 0; begin < spec.rows; begin += kChunkRows) {
    const std::size_t n = std::min(kChunkRows, spec.rows - begin);
    chunk.assign(n * width, std::byte{0});
    for (std::size_t r = 0; r < n; ++r) {
      const std::size_t row = begin + r;
      std::byte *dst = chunk.data() + r * width;
      const std::int64_t key = spec.key_mode == KeyMode::kSequential
                                   ? static_cast<std::int64_t>(row % card)
                                   : key_dist(rng);
      const double val = val_dist(rng);
      std::memcpy(dst + schema.offset(0), &key, 8);
      std::memcpy(dst + schema.offset(1), alphabet.data() + row % 26, shape.pay_a);
      std::memcpy(dst + schema.offset(2), &val, 8);
      std::memcpy(dst + schema.offset(3), &flags[row], 8);
      if (shape.pay_b > 0) {
        std::memcpy(dst + schema.offset(4), alphabet.data() + (row + 13) % 26, shape.pay_b);
      }
    }
    sink(chunk);
  }
  return out;
}

}  // namespace

SchemaPtr GeneratedSchema(const GenTableSpec &spec) {
  GenTableSpec empty = spec;
  empty.rows = 0;
  return Generate(empty, [](std::span<const std::byte>) {}).schema;
}

GeneratedTable GenerateTable(StorageManager &storage, const GenTableSpec &spec) {
  const SchemaPtr schema = GeneratedSchema(spec);
  Table &table = storage.CreateTable(spec.name, schema, spec.layout, spec.block_size);
  try {
    GeneratedTable out = Generate(spec, [&](std::span<const std::byte> rows) {
      storage.InsertRows(table, rows);
    });
    out.schema = schema;
    return out;
  } catch (...) {
    storage.DropTable(spec.name);
    throw;
  }
}

GeneratedTable GenerateTableFile(const GenTableSpec &spec, const std::string &path,
                                 char delimiter) {
  std::ofstream file(path);
  if (!file) throw Error(ErrorCode::kConfigError, "cannot write '" + path + "'");
  const SchemaPtr schema = GeneratedSchema(spec);
  std::vector<Tuple> tuples;
  GeneratedTable out = Generate(spec, [&](std::span<const std::byte> rows) {
    const std::size_t width = schema->tuple_width();
    tuples.clear();
    for (std::size_t off = 0; off < rows.size(); off += width) {
      tuples.push_back(DecodeTuple(*schema, rows.data() + off));
    }
    WriteDelimited(file, *schema, tuples, delimiter);
  });
  return out;
}

}  // namespace uot
