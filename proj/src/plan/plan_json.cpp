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

#include "uot/plan/plan_json.hpp"

#include <fstream>
#include <sstream>

#include "uot/common/error.hpp"
#include "uot/storage/storage_manager.hpp"

namespace uot {

namespace {

using nlohmann::json;

[[noreturn]] void Fail(const std::string &what) { throw Error(ErrorCode::kParseError, what); }

const json &Require(const json &obj, const char *key) {
  if (!obj.is_object() || !obj.contains(key)) Fail(std::string("missing field '") + key + "'");
  return obj.at(key);
}

std::size_t Index(const json &v) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    Fail("expected a column index, got " + v.dump());
  }
  return v.get<std::size_t>();
}

std::vector<std::size_t> Indices(const json &v) {
  if (!v.is_array()) Fail("expected an array of indices, got " + v.dump());
  std::vector<std::size_t> out;
  for (const json &e : v) out.push_back(Index(e));
  return out;
}

Datum ParseDatum(const json &v) {
  if (v.is_number_integer()) return Datum(v.get<std::int64_t>());
  if (v.is_number_float()) return Datum(v.get<double>());
  if (v.is_string()) return Datum(v.get<std::string>());
  Fail("expected a literal, got " + v.dump());
}

Expr ParseExpr(const json &v) {
  if (v.is_number()) return Expr::Column(Index(v));
  if (v.is_object() && v.contains("col")) return Expr::Column(Index(v.at("col")));
  if (v.is_object() && v.contains("column")) return Expr::Column(Index(v.at("column")));
  if (v.is_object() && v.contains("const")) return Expr::Constant(ParseDatum(v.at("const")));
  if (v.is_object() && v.contains("op")) {
    return Expr::Arithmetic(ParseArithmeticOp(v.at("op").get<std::string>()),
                            ParseExpr(Require(v, "lhs")), ParseExpr(Require(v, "rhs")));
  }
  Fail("bad expression " + v.dump());
}

const CanonicalQuery &Canonical(const CanonicalQueries &canonical, const std::string &table) {
  auto it = canonical.find(table);
  if (it == canonical.end()) Fail("no canonical predicate/projection for table '" + table + "'");
  return it->second;
}

Projection ParseProjection(const json &v, const Schema *input, const CanonicalQueries &canonical,
                           const std::string &base) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "canonical") return Canonical(canonical, base).projection;
    if (s == "identity" || s == "*") {
      if (input == nullptr) Fail("identity projection needs a known input schema");
      return Projection::Identity(*input);
    }
    Fail("unknown projection '" + s + "'");
  }
  if (!v.is_array()) Fail("projection must be an array or a keyword");
  Projection p;
  for (const json &item : v) {
    if (item.is_number()) {
      p.Add(Expr::Column(Index(item)));
    } else if (item.is_object() && item.contains("expr")) {
      p.Add(ParseExpr(item.at("expr")), item.value("name", std::string()));
    } else if (item.is_object() && item.contains("column")) {
      p.Add(Expr::Column(Index(item.at("column"))), item.value("name", std::string()));
    } else {
      Fail("bad projection item " + item.dump());
    }
  }
  return p;
}

Predicate ParsePredicate(const json &v, const CanonicalQueries &canonical,
                         const std::string &base) {
  if (v.is_null()) return {};
  if (v.is_string()) {
    if (v.get<std::string>() == "canonical") return Canonical(canonical, base).predicate;
    if (v.get<std::string>() == "true") return {};
    Fail("unknown predicate '" + v.get<std::string>() + "'");
  }
  if (!v.is_array()) Fail("predicate must be an array of atoms");
  Predicate p;
  for (const json &atom : v) {
    p.And(Index(Require(atom, "column")), ParseCompareOp(Require(atom, "op").get<std::string>()),
          ParseDatum(Require(atom, "value")));
  }
  return p;
}

HashTableOptions ParseHashOptions(const json &v) {
  HashTableOptions o;
  o.bucket_bytes = v.value("bucket_bytes", o.bucket_bytes);
  o.load_factor = v.value("load_factor", o.load_factor);
  o.initial_capacity = v.value("initial_capacity", o.initial_capacity);
  return o;
}

std::vector<AggregateCall> ParseAggregates(const json &v) {
  std::vector<AggregateCall> calls;
  for (const json &a : v) {
    AggregateCall c;
    c.fn = ParseAggregateFn(Require(a, "fn").get<std::string>());
    c.column = a.contains("column") ? Index(a.at("column")) : 0;
    c.name = a.value("name", std::string());
    calls.push_back(c);
  }
  return calls;
}

InputRef ParseInput(const json &v) {
  if (v.is_object() && v.contains("table")) return InputRef::Table(v.at("table").get<std::string>());
  if (v.is_object() && v.contains("op")) return InputRef::Operator(Index(v.at("op")));
  Fail("input must be {\"table\": name} or {\"op\": id}, got " + v.dump());
}

// Walks an operator's input chain back to its base table.
std::string BaseTableOf(const json &ops, const json &op) {
  const json *cur = &op;
  for (std::size_t guard = 0; guard <= ops.size(); ++guard) {
    const json &in = Require(*cur, "input");
    if (in.contains("table")) return in.at("table").get<std::string>();
    const std::size_t id = Index(in.at("op"));
    const json *next = nullptr;
    for (const json &o : ops) {
      if (o.value("id", static_cast<std::size_t>(-1)) == id) next = &o;
    }
    if (next == nullptr) Fail("input references unknown operator " + std::to_string(id));
    cur = next;
  }
  Fail("operator inputs form a cycle");
}

PlanDAG ParseGeneral(const json &doc, const StorageManager &storage,
                     const CanonicalQueries &canonical) {
  const json &ops = Require(doc, "operators");
  if (!ops.is_array() || ops.empty()) Fail("'operators' must be a non-empty array");
  PlanBuilder builder;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const json &o = ops[i];
    OperatorNode node;
    node.id = o.contains("id") ? Index(o.at("id")) : i;
    node.name = o.value("name", std::string());
    node.input = ParseInput(Require(o, "input"));
    node.busy_work = o.value("busy_work", 0u);
    const std::string type = Require(o, "type").get<std::string>();
    const std::string base = BaseTableOf(ops, o);
    const Schema *table_schema =
        node.input.is_table() && storage.HasTable(node.input.table)
            ? &storage.GetTable(node.input.table).schema()
            : nullptr;
    if (type == "select") {
      node.spec = SelectSpec{ParsePredicate(o.value("predicate", json()), canonical, base),
                             ParseProjection(o.value("projection", json("identity")), table_schema,
                                             canonical, base)};
    } else if (type == "build") {
      node.spec = BuildSpec{Indices(Require(o, "key")), Indices(o.value("payload", json::array())),
                            ParseHashOptions(o)};
    } else if (type == "probe") {
      node.spec = ProbeSpec{Index(Require(o, "build")), Indices(Require(o, "key")),
                            ParseProjection(Require(o, "projection"), nullptr, canonical, base)};
    } else if (type == "aggregate") {
      node.spec = AggregateSpec{Indices(o.value("group_by", json::array())),
                                ParseAggregates(Require(o, "aggregates"))};
    } else {
      Fail("unknown operator type '" + type + "'");
    }
    builder.AddNode(std::move(node));
  }
  if (doc.contains("sink")) builder.SetSink(Index(doc.at("sink")));
  return builder.Build(storage);
}

PlanDAG ParseLeftDeep(const json &ld, const StorageManager &storage,
                      const CanonicalQueries &canonical) {
  const std::string base = Require(ld, "base").get<std::string>();
  const Schema &schema = storage.GetTable(base).schema();
  const Predicate predicate = ParsePredicate(ld.value("predicate", json()), canonical, base);
  const Projection projection =
      ParseProjection(ld.value("projection", json("identity")), &schema, canonical, base);
  std::vector<JoinStage> joins;
  for (const json &j : ld.value("joins", json::array())) {
    JoinStage stage;
    stage.build_table = Require(j, "build_table").get<std::string>();
    stage.build_key = Indices(Require(j, "build_key"));
    stage.build_payload = Indices(j.value("build_payload", json::array()));
    stage.probe_key = Indices(Require(j, "probe_key"));
    stage.post_projection = ParseProjection(Require(j, "projection"), nullptr, canonical, base);
    stage.options = ParseHashOptions(j);
    joins.push_back(std::move(stage));
  }
  if (!ld.contains("aggregate")) {
    return BuildLeftDeepPlan(storage, base, predicate, projection, joins);
  }
  // Rebuild with an aggregate on top: reuse the left-deep plan's nodes.
  const PlanDAG inner = BuildLeftDeepPlan(storage, base, predicate, projection, joins);
  PlanBuilder builder;
  for (const OperatorNode &n : inner.nodes()) {
    OperatorNode copy;
    copy.id = n.id;
    copy.name = n.name;
    copy.input = n.input;
    copy.spec = n.spec;
    copy.busy_work = n.busy_work;
    builder.AddNode(std::move(copy));
  }
  const json &agg = ld.at("aggregate");
  const OperatorId top = builder.AddAggregate(InputRef::Operator(inner.sink()),
                                              Indices(agg.value("group_by", json::array())),
                                              ParseAggregates(Require(agg, "aggregates")), "aggregate");
  builder.SetSink(top);
  return builder.Build(storage);
}

}  // namespace

PlanDAG ParsePlanJson(const nlohmann::json &doc, const StorageManager &storage,
                      const CanonicalQueries &canonical) {
  try {
    if (doc.contains("left_deep")) return ParseLeftDeep(doc.at("left_deep"), storage, canonical);
    return ParseGeneral(doc, storage, canonical);
  } catch (const json::exception &e) {
    Fail(std::string("plan JSON: ") + e.what());
  }
}

PlanDAG ParsePlanText(const std::string &text, const StorageManager &storage,
                      const CanonicalQueries &canonical) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception &e) {
    Fail(std::string("plan JSON: ") + e.what());
  }
  return ParsePlanJson(doc, storage, canonical);
}

PlanDAG LoadPlanFile(const std::string &path, const StorageManager &storage,
                     const CanonicalQueries &canonical) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot open plan file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return ParsePlanText(text.str(), storage, canonical);
}

}  // namespace uot
