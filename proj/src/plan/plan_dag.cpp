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

#include "uot/plan/plan_dag.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include "uot/common/error.hpp"
#include "uot/storage/storage_manager.hpp"

namespace uot {

std::string_view OperatorKindName(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::kSelect: return "select";
    case OperatorKind::kBuildHash: return "build";
    case OperatorKind::kProbeHash: return "probe";
    case OperatorKind::kAggregate: return "aggregate";
  }
  return "?";
}

std::string_view AggregateFnName(AggregateFn fn) {
  switch (fn) {
    case AggregateFn::kCount: return "count";
    case AggregateFn::kSum: return "sum";
    case AggregateFn::kMin: return "min";
    case AggregateFn::kMax: return "max";
  }
  return "?";
}

AggregateFn ParseAggregateFn(std::string_view text) {
  if (text == "count" || text == "COUNT") return AggregateFn::kCount;
  if (text == "sum" || text == "SUM") return AggregateFn::kSum;
  if (text == "min" || text == "MIN") return AggregateFn::kMin;
  if (text == "max" || text == "MAX") return AggregateFn::kMax;
  throw Error(ErrorCode::kParseError, "unknown aggregate function '" + std::string(text) + "'");
}

const OperatorNode &PlanDAG::node(OperatorId id) const {
  if (id >= nodes_.size()) {
    throw Error(ErrorCode::kUnknownOperator, "no operator " + std::to_string(id));
  }
  return nodes_[id];
}

std::vector<std::pair<OperatorId, OperatorId>> PlanDAG::StreamableOperatorEdges() const {
  std::vector<std::pair<OperatorId, OperatorId>> out;
  for (const PlanEdge &e : edges_) {
    if (!e.blocking && !e.from.is_table()) out.emplace_back(e.from.op, e.to);
  }
  return out;
}

OperatorId PlanDAG::ProbeOf(OperatorId build) const {
  if (node(build).kind() != OperatorKind::kBuildHash || !consumer_[build].has_value()) {
    throw Error(ErrorCode::kUnknownOperator, "operator " + std::to_string(build) + " is not a build");
  }
  return *consumer_[build];
}

std::size_t PlanDAG::CountKind(OperatorKind kind) const {
  return static_cast<std::size_t>(std::count_if(
      nodes_.begin(), nodes_.end(), [kind](const OperatorNode &n) { return n.kind() == kind; }));
}

std::string PlanDAG::ToString() const {
  std::ostringstream out;
  for (OperatorId id : order_) {
    const OperatorNode &n = nodes_[id];
    out << id << ":" << OperatorKindName(n.kind()) << " <- "
        << (n.input.is_table() ? "table " + n.input.table : "op " + std::to_string(n.input.op));
    if (const auto *probe = std::get_if<ProbeSpec>(&n.spec)) {
      out << " [build op " << probe->build << "]";
    }
    if (id == sink_) out << " (sink)";
    out << "\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------

namespace {

OperatorNode MakeNode(OperatorId id, InputRef input, OperatorSpec spec, std::string name) {
  OperatorNode node;
  node.id = id;
  node.input = std::move(input);
  node.spec = std::move(spec);
  node.name = name.empty() ? std::string(OperatorKindName(node.kind())) + std::to_string(id)
                           : std::move(name);
  return node;
}

SchemaPtr SubSchema(const Schema &schema, const std::vector<std::size_t> &columns,
                    const std::string &what) {
  if (columns.empty()) return nullptr;
  std::vector<Column> out;
  for (std::size_t c : columns) {
    if (c >= schema.num_columns()) {
      throw Error(ErrorCode::kSchemaMismatch, what + " column " + std::to_string(c) +
                                                  " out of range for " + schema.ToString());
    }
    out.push_back(schema.column(c));
  }
  return MakeSchema(std::move(out));
}

bool SameKeyTypes(const Schema &a, const Schema &b) {
  if (a.num_columns() != b.num_columns()) return false;
  for (std::size_t i = 0; i < a.num_columns(); ++i) {
    if (a.column(i).type != b.column(i).type || a.column(i).width != b.column(i).width) {
      return false;
    }
  }
  return true;
}

}  // namespace

OperatorId PlanBuilder::AddSelect(InputRef input, Predicate predicate, Projection projection,
                                  std::string name) {
  const OperatorId id = nodes_.size();
  nodes_.push_back(MakeNode(id, std::move(input),
                            SelectSpec{std::move(predicate), std::move(projection)},
                            std::move(name)));
  return id;
}

OperatorId PlanBuilder::AddBuild(InputRef input, std::vector<std::size_t> key_columns,
                                 std::vector<std::size_t> payload_columns,
                                 HashTableOptions options, std::string name) {
  const OperatorId id = nodes_.size();
  nodes_.push_back(MakeNode(id, std::move(input),
                            BuildSpec{std::move(key_columns), std::move(payload_columns), options},
                            std::move(name)));
  return id;
}

OperatorId PlanBuilder::AddProbe(InputRef input, OperatorId build,
                                 std::vector<std::size_t> probe_key_columns, Projection projection,
                                 std::string name) {
  const OperatorId id = nodes_.size();
  nodes_.push_back(MakeNode(id, std::move(input),
                            ProbeSpec{build, std::move(probe_key_columns), std::move(projection)},
                            std::move(name)));
  return id;
}

OperatorId PlanBuilder::AddAggregate(InputRef input, std::vector<std::size_t> group_by,
                                     std::vector<AggregateCall> aggregates, std::string name) {
  const OperatorId id = nodes_.size();
  nodes_.push_back(MakeNode(id, std::move(input),
                            AggregateSpec{std::move(group_by), std::move(aggregates)},
                            std::move(name)));
  return id;
}

void PlanBuilder::AddNode(OperatorNode node) {
  if (node.name.empty()) {
    node.name = std::string(OperatorKindName(node.kind())) + std::to_string(node.id);
  }
  nodes_.push_back(std::move(node));
}

void PlanBuilder::set_busy_work(OperatorId id, std::uint32_t spins) {
  for (OperatorNode &n : nodes_) {
    if (n.id == id) n.busy_work = spins;
  }
}

PlanDAG PlanBuilder::Build(const StorageManager &storage) const {
  auto invalid = [](const std::string &msg) { return Error(ErrorCode::kInvalidPlan, msg); };

  PlanDAG dag;
  dag.nodes_ = nodes_;
  std::sort(dag.nodes_.begin(), dag.nodes_.end(),
            [](const OperatorNode &a, const OperatorNode &b) { return a.id < b.id; });
  const std::size_t n = dag.nodes_.size();
  if (n == 0) throw invalid("plan has no operators");
  for (std::size_t i = 0; i < n; ++i) {
    if (dag.nodes_[i].id != i) throw invalid("operator ids must be dense 0.." + std::to_string(n - 1));
  }

  // Consumers and dependency edges.
  dag.consumer_.assign(n, std::nullopt);
  std::vector<std::vector<OperatorId>> deps(n);
  auto claim = [&](OperatorId producer, OperatorId consumer) {
    if (producer >= n) throw invalid("operator " + std::to_string(producer) + " does not exist");
    if (producer == consumer) throw invalid("operator " + std::to_string(consumer) + " consumes itself");
    if (dag.consumer_[producer].has_value()) {
      throw invalid("output of operator " + std::to_string(producer) + " has two consumers");
    }
    dag.consumer_[producer] = consumer;
    deps[consumer].push_back(producer);
  };
  for (const OperatorNode &node : dag.nodes_) {
    if (node.input.is_table()) {
      if (!storage.HasTable(node.input.table)) {
        throw Error(ErrorCode::kUnknownTable, "no table '" + node.input.table + "'");
      }
    } else {
      claim(node.input.op, node.id);
      if (node.input.op < n && dag.nodes_[node.input.op].kind() == OperatorKind::kBuildHash) {
        throw invalid("build operator " + std::to_string(node.input.op) +
                      " can only feed a probe's hash-table input");
      }
    }
    if (const auto *probe = std::get_if<ProbeSpec>(&node.spec)) {
      claim(probe->build, node.id);
      if (dag.nodes_[probe->build].kind() != OperatorKind::kBuildHash) {
        throw invalid("probe " + std::to_string(node.id) + " references non-build operator " +
                      std::to_string(probe->build));
      }
    }
  }

  // Sink: the unique operator without a consumer.
  std::vector<OperatorId> roots;
  for (OperatorId id = 0; id < n; ++id) {
    if (!dag.consumer_[id].has_value()) roots.push_back(id);
  }
  if (roots.size() != 1) {
    throw invalid("plan must have exactly one sink, found " + std::to_string(roots.size()));
  }
  if (sink_.has_value() && *sink_ != roots.front()) {
    throw invalid("declared sink " + std::to_string(*sink_) + " has a consumer");
  }
  dag.sink_ = roots.front();
  if (dag.nodes_[dag.sink_].kind() == OperatorKind::kBuildHash) {
    throw invalid("a build operator cannot be the sink");
  }

  // Kahn's algorithm; leftover nodes mean a cycle.
  std::vector<std::size_t> indegree(n, 0);
  for (OperatorId id = 0; id < n; ++id) indegree[id] = deps[id].size();
  std::deque<OperatorId> ready;
  for (OperatorId id = 0; id < n; ++id) {
    if (indegree[id] == 0) ready.push_back(id);
  }
  while (!ready.empty()) {
    const OperatorId id = ready.front();
    ready.pop_front();
    dag.order_.push_back(id);
    if (dag.consumer_[id].has_value() && --indegree[*dag.consumer_[id]] == 0) {
      ready.push_back(*dag.consumer_[id]);
    }
  }
  if (dag.order_.size() != n) throw invalid("plan contains a cycle");

  // Schemas, in dependency order.
  for (OperatorId id : dag.order_) {
    OperatorNode &node = dag.nodes_[id];
    node.input_schema = node.input.is_table() ? storage.GetTable(node.input.table).schema_ptr()
                                              : dag.nodes_[node.input.op].output_schema;
    const Schema &input = *node.input_schema;
    switch (node.kind()) {
      case OperatorKind::kSelect: {
        const auto &spec = std::get<SelectSpec>(node.spec);
        spec.predicate.Validate(input);
        node.output_schema = spec.projection.OutputSchema(input);
        break;
      }
      case OperatorKind::kBuildHash: {
        const auto &spec = std::get<BuildSpec>(node.spec);
        if (spec.key_columns.empty()) throw invalid("build needs at least one key column");
        node.key_schema = SubSchema(input, spec.key_columns, "build key");
        node.payload_schema = SubSchema(input, spec.payload_columns, "build payload");
        if (!(spec.options.load_factor > 0.0 && spec.options.load_factor <= 1.0)) {
          throw invalid("load factor must be in (0, 1]");
        }
        break;
      }
      case OperatorKind::kProbeHash: {
        const auto &spec = std::get<ProbeSpec>(node.spec);
        const OperatorNode &build = dag.nodes_[spec.build];
        node.key_schema = SubSchema(input, spec.probe_key_columns, "probe key");
        if (node.key_schema == nullptr || !SameKeyTypes(*node.key_schema, *build.key_schema)) {
          throw Error(ErrorCode::kSchemaMismatch,
                      "probe " + std::to_string(id) + " key types do not match build " +
                          std::to_string(spec.build));
        }
        std::vector<Column> joined = input.columns();
        if (build.payload_schema != nullptr) {
          for (const Column &c : build.payload_schema->columns()) joined.push_back(c);
        }
        node.output_schema = spec.projection.OutputSchema(Schema(std::move(joined)));
        break;
      }
      case OperatorKind::kAggregate: {
        const auto &spec = std::get<AggregateSpec>(node.spec);
        if (spec.group_by.empty() && spec.aggregates.empty()) {
          throw invalid("aggregate needs group-by columns or aggregate functions");
        }
        std::vector<Column> out;
        if (!spec.group_by.empty()) out = SubSchema(input, spec.group_by, "group-by")->columns();
        for (std::size_t i = 0; i < spec.aggregates.size(); ++i) {
          const AggregateCall &call = spec.aggregates[i];
          std::string name = call.name.empty()
                                 ? std::string(AggregateFnName(call.fn)) + std::to_string(i)
                                 : call.name;
          if (call.fn == AggregateFn::kCount) {
            out.push_back(Column::Int64(std::move(name)));
            continue;
          }
          if (call.column >= input.num_columns()) {
            throw Error(ErrorCode::kSchemaMismatch, "aggregate column out of range");
          }
          const Column &source = input.column(call.column);
          if (source.type == ColumnType::kChar) {
            throw Error(ErrorCode::kSchemaMismatch, "cannot aggregate char column '" + source.name + "'");
          }
          out.push_back({std::move(name), source.type, 8});
        }
        node.output_schema = MakeSchema(std::move(out));
        break;
      }
    }
  }

  for (const OperatorNode &node : dag.nodes_) {
    const bool from_aggregate = !node.input.is_table() &&
                                dag.nodes_[node.input.op].kind() == OperatorKind::kAggregate;
    dag.edges_.push_back({node.input, node.id, from_aggregate});
    if (const auto *probe = std::get_if<ProbeSpec>(&node.spec)) {
      dag.edges_.push_back({InputRef::Operator(probe->build), node.id, true});
    }
  }
  return dag;
}

PlanDAG BuildLeftDeepPlan(const StorageManager &storage, const std::string &base_table,
                          Predicate predicate, Projection projection,
                          const std::vector<JoinStage> &joins) {
  PlanBuilder builder;
  OperatorId current =
      builder.AddSelect(InputRef::Table(base_table), std::move(predicate), std::move(projection));
  for (const JoinStage &stage : joins) {
    std::vector<std::size_t> payload = stage.build_payload;
    if (payload.empty()) {
      const std::size_t width = storage.GetTable(stage.build_table).schema().num_columns();
      for (std::size_t c = 0; c < width; ++c) payload.push_back(c);
    }
    const OperatorId build = builder.AddBuild(InputRef::Table(stage.build_table), stage.build_key,
                                              std::move(payload), stage.options);
    current = builder.AddProbe(InputRef::Operator(current), build, stage.probe_key,
                               stage.post_projection);
  }
  return builder.Build(storage);
}

}  // namespace uot
