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

#include "uot/plan/expression.hpp"

#include <limits>
#include <sstream>

#include "uot/common/error.hpp"

namespace uot {

std::string_view CompareOpName(CompareOp op) {
  switch (op) {
    case CompareOp::kLt: return "<";
    case CompareOp::kLe: return "<=";
    case CompareOp::kEq: return "=";
    case CompareOp::kGe: return ">=";
    case CompareOp::kGt: return ">";
    case CompareOp::kNe: return "!=";
  }
  return "?";
}

CompareOp ParseCompareOp(std::string_view text) {
  if (text == "<") return CompareOp::kLt;
  if (text == "<=") return CompareOp::kLe;
  if (text == "=" || text == "==") return CompareOp::kEq;
  if (text == ">=") return CompareOp::kGe;
  if (text == ">") return CompareOp::kGt;
  if (text == "!=" || text == "<>") return CompareOp::kNe;
  throw Error(ErrorCode::kParseError, "unknown comparator '" + std::string(text) + "'");
}

std::string_view ArithmeticOpName(ArithmeticOp op) {
  switch (op) {
    case ArithmeticOp::kAdd: return "+";
    case ArithmeticOp::kSub: return "-";
    case ArithmeticOp::kMul: return "*";
  }
  return "?";
}

ArithmeticOp ParseArithmeticOp(std::string_view text) {
  if (text == "+") return ArithmeticOp::kAdd;
  if (text == "-") return ArithmeticOp::kSub;
  if (text == "*") return ArithmeticOp::kMul;
  throw Error(ErrorCode::kParseError, "unknown arithmetic operator '" + std::string(text) + "'");
}

namespace {

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();

}  // namespace

std::int64_t SaturatingAdd(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) return b > 0 ? kMax : kMin;
  return r;
}

std::int64_t SaturatingSub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) return b < 0 ? kMax : kMin;
  return r;
}

std::int64_t SaturatingMul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) return ((a < 0) != (b < 0)) ? kMin : kMax;
  return r;
}

std::int64_t ClampToInt64(__int128 v) {
  if (v > kMax) return kMax;
  if (v < kMin) return kMin;
  return static_cast<std::int64_t>(v);
}

// ---------------------------------------------------------------------------

uot::Column Expr::ResultColumn(const Schema &input, const std::string &name) const {
  if (const auto *ref = std::get_if<ColumnRef>(&node_)) {
    if (ref->index >= input.num_columns()) {
      throw Error(ErrorCode::kSchemaMismatch, "column " + std::to_string(ref->index) +
                                                  " out of range for " + input.ToString());
    }
    uot::Column c = input.column(ref->index);
    if (!name.empty()) c.name = name;
    return c;
  }
  if (const auto *lit = std::get_if<Literal>(&node_)) {
    if (std::holds_alternative<std::string>(lit->value)) {
      throw Error(ErrorCode::kSchemaMismatch, "string literals are not projectable");
    }
    return std::holds_alternative<std::int64_t>(lit->value) ? uot::Column::Int64(name)
                                                            : uot::Column::Double(name);
  }
  const auto &bin = std::get<Binary>(node_);
  const uot::Column l = bin.lhs->ResultColumn(input, "");
  const uot::Column r = bin.rhs->ResultColumn(input, "");
  if (l.type == ColumnType::kChar || r.type == ColumnType::kChar) {
    throw Error(ErrorCode::kSchemaMismatch, "arithmetic on a char column in " + ToString());
  }
  if (l.type == ColumnType::kInt64 && r.type == ColumnType::kInt64) {
    return uot::Column::Int64(name);
  }
  return uot::Column::Double(name);
}

std::string Expr::ToString() const {
  if (const auto *ref = std::get_if<ColumnRef>(&node_)) return "#" + std::to_string(ref->index);
  if (const auto *lit = std::get_if<Literal>(&node_)) return DatumToString(lit->value);
  const auto &bin = std::get<Binary>(node_);
  return "(" + bin.lhs->ToString() + " " + std::string(ArithmeticOpName(bin.op)) + " " +
         bin.rhs->ToString() + ")";
}

Projection Projection::Identity(const Schema &schema) {
  Projection p;
  for (std::size_t i = 0; i < schema.num_columns(); ++i) p.Add(Expr::Column(i));
  return p;
}

Projection Projection::Columns(const std::vector<std::size_t> &indices) {
  Projection p;
  for (std::size_t i : indices) p.Add(Expr::Column(i));
  return p;
}

bool Projection::IsColumnSubset() const {
  for (const ProjectionItem &item : items_) {
    if (!item.expr.is_column()) return false;
  }
  return true;
}

SchemaPtr Projection::OutputSchema(const Schema &input) const {
  if (items_.empty()) {
    throw Error(ErrorCode::kSchemaMismatch, "projection must produce at least one column");
  }
  std::vector<uot::Column> columns;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    std::string name = items_[i].name;
    if (name.empty() && !items_[i].expr.is_column()) name = "expr" + std::to_string(i);
    columns.push_back(items_[i].expr.ResultColumn(input, name));
  }
  return MakeSchema(std::move(columns));
}

void Predicate::Validate(const Schema &input) const {
  for (const PredicateAtom &atom : atoms_) {
    if (atom.column >= input.num_columns()) {
      throw Error(ErrorCode::kSchemaMismatch, "predicate column " + std::to_string(atom.column) +
                                                  " out of range for " + input.ToString());
    }
    const uot::Column &c = input.column(atom.column);
    const bool literal_is_string = std::holds_alternative<std::string>(atom.literal);
    if ((c.type == ColumnType::kChar) != literal_is_string) {
      throw Error(ErrorCode::kSchemaMismatch,
                  "literal " + DatumToString(atom.literal) + " incompatible with column '" +
                      c.name + "'");
    }
    if (literal_is_string && std::get<std::string>(atom.literal).size() > c.width) {
      throw Error(ErrorCode::kSchemaMismatch, "string literal longer than column '" + c.name + "'");
    }
  }
}

// ---------------------------------------------------------------------------

BoundExpr::BoundExpr(const Expr &expr, const Schema &input) {
  // Resolve types (and validate) before flattening.
  is_int_ = expr.ResultColumn(input, "").type == ColumnType::kInt64;
  Flatten(expr, input);
}

std::size_t BoundExpr::Flatten(const Expr &expr, const Schema &input) {
  const std::size_t index = nodes_.size();
  nodes_.emplace_back();
  if (const auto *ref = std::get_if<Expr::ColumnRef>(&expr.node())) {
    const ColumnType type = input.column(ref->index).type;
    nodes_[index].kind = type == ColumnType::kInt64 ? NodeKind::kIntColumn : NodeKind::kDoubleColumn;
    nodes_[index].column = ref->index;
    nodes_[index].is_int = type == ColumnType::kInt64;
  } else if (const auto *lit = std::get_if<Expr::Literal>(&expr.node())) {
    nodes_[index].kind = NodeKind::kConstant;
    if (const auto *i = std::get_if<std::int64_t>(&lit->value)) {
      nodes_[index].constant = {true, *i, 0.0};
    } else {
      nodes_[index].constant = {false, 0, std::get<double>(lit->value)};
      nodes_[index].is_int = false;
    }
  } else {
    const auto &bin = std::get<Expr::Binary>(expr.node());
    const std::size_t lhs = Flatten(*bin.lhs, input);
    const std::size_t rhs = Flatten(*bin.rhs, input);
    FlatNode &n = nodes_[index];
    n.kind = NodeKind::kBinary;
    n.op = bin.op;
    n.lhs = lhs;
    n.rhs = rhs;
    n.is_int = nodes_[lhs].is_int && nodes_[rhs].is_int;
  }
  return index;
}

NumericValue BoundExpr::Combine(ArithmeticOp op, const NumericValue &a, const NumericValue &b) {
  if (a.is_int && b.is_int) {
    switch (op) {
      case ArithmeticOp::kAdd: return {true, SaturatingAdd(a.i, b.i), 0.0};
      case ArithmeticOp::kSub: return {true, SaturatingSub(a.i, b.i), 0.0};
      case ArithmeticOp::kMul: return {true, SaturatingMul(a.i, b.i), 0.0};
    }
  }
  const double x = a.as_double();
  const double y = b.as_double();
  switch (op) {
    case ArithmeticOp::kAdd: return {false, 0, x + y};
    case ArithmeticOp::kSub: return {false, 0, x - y};
    case ArithmeticOp::kMul: return {false, 0, x * y};
  }
  return {false, 0, 0.0};
}

BoundProjection::BoundProjection(const Projection &projection, const Schema &input)
    : output_schema_(projection.OutputSchema(input)) {
  for (std::size_t i = 0; i < projection.size(); ++i) {
    const Expr &expr = projection.items()[i].expr;
    Item item{output_schema_->offset(i), 0, output_schema_->column(i).width, nullptr};
    if (const auto *ref = std::get_if<Expr::ColumnRef>(&expr.node())) {
      item.column = ref->index;
    } else {
      item.expr = std::make_unique<BoundExpr>(expr, input);
    }
    items_.push_back(std::move(item));
  }
}

BoundPredicate::BoundPredicate(const Predicate &predicate, const Schema &input) {
  predicate.Validate(input);
  for (const PredicateAtom &a : predicate.atoms()) {
    const uot::Column &c = input.column(a.column);
    Atom atom{a.column, a.op, c.type, false, 0, 0.0, {}};
    if (c.type == ColumnType::kChar) {
      atom.char_literal = std::get<std::string>(a.literal);
      atom.char_literal.resize(c.width, '\0');
    } else if (const auto *i = std::get_if<std::int64_t>(&a.literal)) {
      atom.literal_is_int = true;
      atom.int_literal = *i;
      atom.double_literal = static_cast<double>(*i);
    } else {
      atom.double_literal = std::get<double>(a.literal);
    }
    atoms_.push_back(std::move(atom));
  }
}

namespace {

template <typename T>
bool Compare(CompareOp op, const T &a, const T &b) {
  switch (op) {
    case CompareOp::kLt: return a < b;
    case CompareOp::kLe: return a <= b;
    case CompareOp::kEq: return a == b;
    case CompareOp::kGe: return a >= b;
    case CompareOp::kGt: return a > b;
    case CompareOp::kNe: return a != b;
  }
  return false;
}

}  // namespace

bool BoundPredicate::Atom::Test(const std::byte *cell) const {
  switch (type) {
    case ColumnType::kInt64: {
      std::int64_t v;
      std::memcpy(&v, cell, sizeof(v));
      if (literal_is_int) return Compare(op, v, int_literal);
      return Compare(op, static_cast<double>(v), double_literal);
    }
    case ColumnType::kDouble: {
      double v;
      std::memcpy(&v, cell, sizeof(v));
      return Compare(op, v, double_literal);
    }
    case ColumnType::kChar: {
      const int c = std::memcmp(cell, char_literal.data(), char_literal.size());
      return Compare(op, c, 0);
    }
  }
  return false;
}

bool EvalPredicate(const Predicate &predicate, const Schema &schema, const Tuple &tuple) {
  std::vector<std::byte> row(schema.tuple_width());
  EncodeTuple(schema, tuple, row.data());
  return BoundPredicate(predicate, schema).Matches(RowBytesAccessor{&schema, row.data()});
}

Tuple EvalProjection(const Projection &projection, const Schema &schema, const Tuple &tuple) {
  std::vector<std::byte> row(schema.tuple_width());
  EncodeTuple(schema, tuple, row.data());
  BoundProjection bound(projection, schema);
  std::vector<std::byte> out(bound.output_schema()->tuple_width());
  bound.Write(RowBytesAccessor{&schema, row.data()}, out.data());
  return DecodeTuple(*bound.output_schema(), out.data());
}

}  // namespace uot
