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

#ifndef UOT_PLAN_PLAN_DAG_HPP_
#define UOT_PLAN_PLAN_DAG_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "uot/plan/expression.hpp"
#include "uot/storage/types.hpp"

namespace uot {

class StorageManager;

using OperatorId = std::size_t;

enum class OperatorKind { kSelect, kBuildHash, kProbeHash, kAggregate };
std::string_view OperatorKindName(OperatorKind kind);

enum class AggregateFn { kCount, kSum, kMin, kMax };
std::string_view AggregateFnName(AggregateFn fn);
AggregateFn ParseAggregateFn(std::string_view text);

// Where an operator's streamable input comes from.
struct InputRef {
  enum class Kind { kBaseTable, kOperator };
  Kind kind;
  std::string table;
  OperatorId op = 0;

  static InputRef Table(std::string name) { return {Kind::kBaseTable, std::move(name), 0}; }
  static InputRef Operator(OperatorId id) { return {Kind::kOperator, {}, id}; }
  bool is_table() const { return kind == Kind::kBaseTable; }
};

struct HashTableOptions {
  // Bytes per bucket; 0 selects the minimum (chain slot + key + payload).
  std::size_t bucket_bytes = 0;
  double load_factor = 0.5;
  std::size_t initial_capacity = 64;
};

struct SelectSpec {
  Predicate predicate;
  Projection projection;
};

struct BuildSpec {
  std::vector<std::size_t> key_columns;
  std::vector<std::size_t> payload_columns;
  HashTableOptions options;
};

// Output projection indexes the concatenation (probe tuple ++ build payload).
struct ProbeSpec {
  OperatorId build;
  std::vector<std::size_t> probe_key_columns;
  Projection projection;
};

struct AggregateCall {
  AggregateFn fn;
  std::size_t column = 0;  // ignored for COUNT
  std::string name;
};

struct AggregateSpec {
  std::vector<std::size_t> group_by;
  std::vector<AggregateCall> aggregates;
};

using OperatorSpec = std::variant<SelectSpec, BuildSpec, ProbeSpec, AggregateSpec>;

struct OperatorNode {
  OperatorId id = 0;
  std::string name;
  InputRef input = InputRef::Table({});
  OperatorSpec spec;
  // Extra spin iterations per input tuple; a benchmarking knob for shaping
  // relative producer/consumer cost.
  std::uint32_t busy_work = 0;

  // Resolved at validation.
  SchemaPtr input_schema;
  SchemaPtr output_schema;   // unset for BuildHash
  SchemaPtr payload_schema;  // BuildHash only
  SchemaPtr key_schema;      // BuildHash and ProbeHash

  OperatorKind kind() const { return static_cast<OperatorKind>(spec.index()); }
};

struct PlanEdge {
  InputRef from;
  OperatorId to;
  bool blocking;
};

/**
 * @brief Validated operator DAG. Immutable after construction and safe to
 *        share across threads.
 *
 * Every operator's output has exactly one consumer except the sink. Build
 * outputs feed exactly one probe through a blocking edge; Select and Probe
 * outputs are streamable; Aggregate outputs are released only after
 * finalization.
 **/
class PlanDAG {
 public:
  const std::vector<OperatorNode> &nodes() const { return nodes_; }
  const OperatorNode &node(OperatorId id) const;
  std::size_t size() const { return nodes_.size(); }
  OperatorId sink() const { return sink_; }
  const std::vector<PlanEdge> &edges() const { return edges_; }
  // Topological order (producers before consumers).
  const std::vector<OperatorId> &topological_order() const { return order_; }

  // The consumer of an operator's output, if any (nullopt for the sink).
  std::optional<OperatorId> consumer(OperatorId id) const { return consumer_.at(id); }
  // Streamable (producer op -> consumer op) pairs.
  std::vector<std::pair<OperatorId, OperatorId>> StreamableOperatorEdges() const;
  // The probe fed by a build operator.
  OperatorId ProbeOf(OperatorId build) const;

  std::size_t CountKind(OperatorKind kind) const;

  std::string ToString() const;

 private:
  friend class PlanBuilder;

  std::vector<OperatorNode> nodes_;
  std::vector<PlanEdge> edges_;
  std::vector<OperatorId> order_;
  std::vector<std::optional<OperatorId>> consumer_;
  OperatorId sink_ = 0;
};

// Assembles operators and validates them against base-table schemas.
class PlanBuilder {
 public:
  OperatorId AddSelect(InputRef input, Predicate predicate, Projection projection,
                       std::string name = {});
  OperatorId AddBuild(InputRef input, std::vector<std::size_t> key_columns,
                      std::vector<std::size_t> payload_columns, HashTableOptions options = {},
                      std::string name = {});
  OperatorId AddProbe(InputRef input, OperatorId build, std::vector<std::size_t> probe_key_columns,
                      Projection projection, std::string name = {});
  OperatorId AddAggregate(InputRef input, std::vector<std::size_t> group_by,
                          std::vector<AggregateCall> aggregates, std::string name = {});

  // Adds a node with an explicit id (ids must end up dense 0..n-1).
  void AddNode(OperatorNode node);

  void set_busy_work(OperatorId id, std::uint32_t spins);
  void SetSink(OperatorId id) { sink_ = id; }

  // Throws InvalidPlan / SchemaMismatch / UnknownTable.
  PlanDAG Build(const StorageManager &storage) const;

 private:
  std::vector<OperatorNode> nodes_;
  std::optional<OperatorId> sink_;
};

struct JoinStage {
  std::string build_table;
  std::vector<std::size_t> build_key;
  // Empty: every build-table column is carried as payload.
  std::vector<std::size_t> build_payload;
  std::vector<std::size_t> probe_key;
  Projection post_projection;
  HashTableOptions options;
};

// Select(base) -> Probe_1 -> ... -> Probe_n, each probe fed by its own build.
PlanDAG BuildLeftDeepPlan(const StorageManager &storage, const std::string &base_table,
                          Predicate predicate, Projection projection,
                          const std::vector<JoinStage> &joins);

}  // namespace uot

#endif  // UOT_PLAN_PLAN_DAG_HPP_
