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

#ifndef UOT_PLAN_PLAN_JSON_HPP_
#define UOT_PLAN_PLAN_JSON_HPP_

#include <map>
#include <string>

#include "json.hpp"
#include "uot/plan/expression.hpp"
#include "uot/plan/plan_dag.hpp"

namespace uot {

// Canonical predicate and projection of a generated table, substituted for
// the strings "canonical" in plan files.
struct CanonicalQuery {
  Predicate predicate;
  Projection projection;
};

using CanonicalQueries = std::map<std::string, CanonicalQuery>;

/**
 * @brief Parses a plan description.
 *
 * Two shapes are accepted. General:
 *
 *   {"operators": [{"id": 0, "type": "select", "input": {"table": "t"},
 *                   "predicate": [{"column": 3, "op": "<", "value": 10}],
 *                   "projection": [0, 1]}, ...],
 *    "sink": 2}
 *
 * with types select / build / probe / aggregate. Shorthand:
 *
 *   {"left_deep": {"base": "t", "predicate": ..., "projection": ...,
 *                  "joins": [{"build_table": "d", "build_key": [0],
 *                             "probe_key": [0], "projection": [...]}],
 *                  "aggregate": {"group_by": [0], "aggregates": [...]}}}
 *
 * Projection items are a column index, {"column": i, "name": n}, or
 * {"expr": E, "name": n} where E is an index, {"const": v}, or
 * {"op": "+", "lhs": E, "rhs": E}. Throws ParseError on malformed input and
 * the PlanBuilder errors on invalid plans.
 **/
PlanDAG ParsePlanJson(const nlohmann::json &doc, const StorageManager &storage,
                      const CanonicalQueries &canonical = {});
PlanDAG ParsePlanText(const std::string &text, const StorageManager &storage,
                      const CanonicalQueries &canonical = {});
PlanDAG LoadPlanFile(const std::string &path, const StorageManager &storage,
                     const CanonicalQueries &canonical = {});

}  // namespace uot

#endif  // UOT_PLAN_PLAN_JSON_HPP_
