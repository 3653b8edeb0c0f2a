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

#ifndef UOT_PLAN_EXPRESSION_HPP_
#define UOT_PLAN_EXPRESSION_HPP_

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "uot/storage/types.hpp"

namespace uot {

enum class ArithmeticOp { kAdd, kSub, kMul };
enum class CompareOp { kLt, kLe, kEq, kGe, kGt, kNe };

std::string_view CompareOpName(CompareOp op);
CompareOp ParseCompareOp(std::string_view text);
std::string_view ArithmeticOpName(ArithmeticOp op);
ArithmeticOp ParseArithmeticOp(std::string_view text);

// Saturating 64-bit integer arithmetic.
std::int64_t SaturatingAdd(std::int64_t a, std::int64_t b);
std::int64_t SaturatingSub(std::int64_t a, std::int64_t b);
std::int64_t SaturatingMul(std::int64_t a, std::int64_t b);
std::int64_t ClampToInt64(__int128 v);

/**
 * @brief Scalar expression over the columns of an input tuple: a column
 *        reference, a numeric literal, or a binary arithmetic node.
 **/
class Expr {
 public:
  struct ColumnRef {
    std::size_t index;
  };
  struct Literal {
    Datum value;
  };
  struct Binary {
    ArithmeticOp op;
    std::shared_ptr<const Expr> lhs;
    std::shared_ptr<const Expr> rhs;
  };
  using Node = std::variant<ColumnRef, Literal, Binary>;

  static Expr Column(std::size_t index) { return Expr(ColumnRef{index}); }
  static Expr Constant(Datum value) { return Expr(Literal{std::move(value)}); }
  static Expr Arithmetic(ArithmeticOp op, Expr lhs, Expr rhs) {
    return Expr(Binary{op, std::make_shared<const Expr>(std::move(lhs)),
                       std::make_shared<const Expr>(std::move(rhs))});
  }

  const Node &node() const { return node_; }
  bool is_column() const { return std::holds_alternative<ColumnRef>(node_); }

  // Output column for this expression over `input`. Column references keep
  // the source column's type and width; arithmetic yields an 8-byte int64
  // (both sides integer) or double. Throws SchemaMismatch on bad indices or
  // non-numeric operands.
  uot::Column ResultColumn(const Schema &input, const std::string &name) const;

  std::string ToString() const;

 private:
  explicit Expr(Node node) : node_(std::move(node)) {}
  Node node_;
};

inline Expr operator+(Expr a, Expr b) {
  return Expr::Arithmetic(ArithmeticOp::kAdd, std::move(a), std::move(b));
}
inline Expr operator-(Expr a, Expr b) {
  return Expr::Arithmetic(ArithmeticOp::kSub, std::move(a), std::move(b));
}
inline Expr operator*(Expr a, Expr b) {
  return Expr::Arithmetic(ArithmeticOp::kMul, std::move(a), std::move(b));
}

struct ProjectionItem {
  Expr expr;
  std::string name;  // empty: source column name, or "exprN"
};

// Ordered list of output expressions. Must be non-empty to validate.
class Projection {
 public:
  Projection() = default;
  explicit Projection(std::vector<ProjectionItem> items) : items_(std::move(items)) {}

  static Projection Identity(const Schema &schema);
  static Projection Columns(const std::vector<std::size_t> &indices);

  Projection &Add(Expr expr, std::string name = {}) {
    items_.push_back({std::move(expr), std::move(name)});
    return *this;
  }

  const std::vector<ProjectionItem> &items() const { return items_; }
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }

  // True if every item is a bare column reference.
  bool IsColumnSubset() const;

  SchemaPtr OutputSchema(const Schema &input) const;

 private:
  std::vector<ProjectionItem> items_;
};

struct PredicateAtom {
  std::size_t column;
  CompareOp op;
  Datum literal;
};

// Conjunction of comparison atoms; the empty conjunction is true.
class Predicate {
 public:
  Predicate() = default;
  explicit Predicate(std::vector<PredicateAtom> atoms) : atoms_(std::move(atoms)) {}

  Predicate &And(std::size_t column, CompareOp op, Datum literal) {
    atoms_.push_back({column, op, std::move(literal)});
    return *this;
  }

  const std::vector<PredicateAtom> &atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }

  // Throws SchemaMismatch if an atom is out of range or its literal type is
  // incompatible with the column.
  void Validate(const Schema &input) const;

 private:
  std::vector<PredicateAtom> atoms_;
};

// Tuple-level evaluation. The tuple must conform to `schema`.
bool EvalPredicate(const Predicate &predicate, const Schema &schema, const Tuple &tuple);
Tuple EvalProjection(const Projection &projection, const Schema &schema, const Tuple &tuple);

// ---------------------------------------------------------------------------
// Bound forms used by work orders. They are compiled against an input schema
// and evaluate straight from raw cell pointers. An accessor is any type with
// `const std::byte *cell(std::size_t column) const`.

struct NumericValue {
  bool is_int;
  std::int64_t i;
  double d;

  double as_double() const { return is_int ? static_cast<double>(i) : d; }
};

class BoundExpr {
 public:
  BoundExpr(const Expr &expr, const Schema &input);

  bool is_int() const { return is_int_; }

  template <typename Accessor>
  NumericValue Eval(const Accessor &row) const {
    return EvalNode(0, row);
  }

 private:
  enum class NodeKind { kIntColumn, kDoubleColumn, kConstant, kBinary };
  struct FlatNode {
    NodeKind kind;
    std::size_t column = 0;
    NumericValue constant{true, 0, 0.0};
    ArithmeticOp op = ArithmeticOp::kAdd;
    std::size_t lhs = 0;
    std::size_t rhs = 0;
    bool is_int = true;
  };

  std::size_t Flatten(const Expr &expr, const Schema &input);

  template <typename Accessor>
  NumericValue EvalNode(std::size_t index, const Accessor &row) const {
    const FlatNode &n = nodes_[index];
    switch (n.kind) {
      case NodeKind::kIntColumn: {
        std::int64_t v;
        std::memcpy(&v, row.cell(n.column), sizeof(v));
        return {true, v, 0.0};
      }
      case NodeKind::kDoubleColumn: {
        double v;
        std::memcpy(&v, row.cell(n.column), sizeof(v));
        return {false, 0, v};
      }
      case NodeKind::kConstant:
        return n.constant;
      case NodeKind::kBinary:
        return Combine(n.op, EvalNode(n.lhs, row), EvalNode(n.rhs, row));
    }
    return {true, 0, 0.0};
  }

  static NumericValue Combine(ArithmeticOp op, const NumericValue &a, const NumericValue &b);

  std::vector<FlatNode> nodes_;
  bool is_int_ = true;
};

/**
 * @brief Projection compiled against an input schema. Bare column references
 *        are copied byte-for-byte; arithmetic items are evaluated and written
 *        as 8-byte values.
 **/
class BoundProjection {
 public:
  BoundProjection(const Projection &projection, const Schema &input);

  const SchemaPtr &output_schema() const { return output_schema_; }

  template <typename Accessor>
  void Write(const Accessor &row, std::byte *dst) const {
    for (const Item &item : items_) {
      std::byte *out = dst + item.out_offset;
      if (item.expr == nullptr) {
        std::memcpy(out, row.cell(item.column), item.width);
      } else {
        const NumericValue v = item.expr->Eval(row);
        if (item.expr->is_int()) {
          std::memcpy(out, &v.i, sizeof(v.i));
        } else {
          const double d = v.as_double();
          std::memcpy(out, &d, sizeof(d));
        }
      }
    }
  }

 private:
  struct Item {
    std::size_t out_offset;
    std::size_t column;
    std::size_t width;
    std::unique_ptr<BoundExpr> expr;
  };
  std::vector<Item> items_;
  SchemaPtr output_schema_;
};

class BoundPredicate {
 public:
  BoundPredicate(const Predicate &predicate, const Schema &input);

  template <typename Accessor>
  bool Matches(const Accessor &row) const {
    for (const Atom &atom : atoms_) {
      if (!atom.Test(row.cell(atom.column))) return false;
    }
    return true;
  }

 private:
  struct Atom {
    std::size_t column;
    CompareOp op;
    ColumnType type;
    bool literal_is_int;
    std::int64_t int_literal;
    double double_literal;
    std::string char_literal;  // zero-padded to column width

    bool Test(const std::byte *cell) const;
  };
  std::vector<Atom> atoms_;
};

// Accessor over a row-format buffer.
struct RowBytesAccessor {
  const Schema *schema;
  const std::byte *row;
  const std::byte *cell(std::size_t column) const { return row + schema->offset(column); }
};

}  // namespace uot

#endif  // UOT_PLAN_EXPRESSION_HPP_
