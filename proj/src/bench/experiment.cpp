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

#include "uot/bench/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <optional>
#include <tuple>
#include <ostream>
#include <set>
#include <sstream>

#include "uot/bench/result_table.hpp"
#include "uot/common/error.hpp"
#include "uot/scheduler/trace_checks.hpp"
#include "uot/storage/text_loader.hpp"

namespace uot {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void ConfigFail(const std::string &what) {
  throw Error(ErrorCode::kConfigError, what);
}

std::string Resolve(const std::string &base_dir, const std::string &path) {
  if (path.empty() || fs::path(path).is_absolute() || base_dir.empty()) return path;
  return (fs::path(base_dir) / path).string();
}

json ReadJsonFile(const std::string &path) {
  std::ifstream in(path);
  if (!in) ConfigFail("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception &e) {
    throw Error(ErrorCode::kParseError, path + ": " + e.what());
  }
}

SchemaPtr ParseSchemaJson(const json &cols) {
  if (!cols.is_array() || cols.empty()) ConfigFail("table schema must be a non-empty array");
  std::vector<Column> columns;
  for (const json &c : cols) {
    const std::string name = c.at("name").get<std::string>();
    const std::string type = c.at("type").get<std::string>();
    if (type == "int64") {
      columns.push_back(Column::Int64(name));
    } else if (type == "double") {
      columns.push_back(Column::Double(name));
    } else if (type == "char") {
      columns.push_back(Column::Char(name, c.at("width").get<std::size_t>()));
    } else {
      ConfigFail("unknown column type '" + type + "'");
    }
  }
  return MakeSchema(columns);
}

template <typename T, typename F>
std::vector<T> ParseList(const json &sweep, const char *key, std::vector<T> fallback, F parse) {
  if (!sweep.contains(key)) return fallback;
  const json &v = sweep.at(key);
  std::vector<T> out;
  if (v.is_array()) {
    for (const json &e : v) out.push_back(parse(e));
  } else {
    out.push_back(parse(v));
  }
  return out;
}

UoTPolicy ParseUoTJson(const json &v) {
  if (v.is_number_unsigned() || v.is_number_integer()) {
    return UoTPolicy::Blocks(v.get<std::size_t>());
  }
  return UoTPolicy::Parse(v.get<std::string>());
}

std::string Csv(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

std::vector<std::string> SplitCsvLine(const std::string &line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

void PointColumns(std::ostream &out, const ConfigPoint &p) {
  out << Csv(p.query) << ',' << p.block_size << ',' << p.uot.ToString() << ','
      << LayoutName(p.layout) << ',' << p.threads;
}

constexpr const char *kPointHeader = "query,block_size,uot,layout,threads";

template <typename F>
double MeanOver(const SweepResult &r, const std::vector<std::size_t> &runs, F value) {
  if (runs.empty()) return 0.0;
  double total = 0;
  for (std::size_t i : runs) total += value(r.records[i]);
  return total / static_cast<double>(runs.size());
}

}  // namespace

void ExperimentConfig::Validate() const {
  if (repetitions == 0) ConfigFail("repetitions must be >= 1");
  if (block_sizes.empty() || uots.empty() || layouts.empty() || threads.empty()) {
    ConfigFail("sweep lists must be non-empty");
  }
  for (std::size_t t : threads) {
    if (t == 0) ConfigFail("thread counts must be >= 1");
  }
  for (std::size_t b : block_sizes) {
    if (b == 0) ConfigFail("block sizes must be positive");
  }
  if (queries.empty()) ConfigFail("config names no plan");
  std::set<std::string> names;
  for (const TableSource &t : tables) {
    if (!names.insert(t.name).second) ConfigFail("table '" + t.name + "' defined twice");
  }
}

ExperimentConfig ParseExperimentConfig(const json &doc, const std::string &base_dir) {
  ExperimentConfig c;
  try {
    for (const json &t : doc.value("tables", json::array())) {
      TableSource src;
      src.name = t.at("name").get<std::string>();
      if (t.contains("file")) {
        src.generated = false;
        src.file = Resolve(base_dir, t.at("file").get<std::string>());
        src.schema = ParseSchemaJson(t.at("schema"));
        const std::string delim = t.value("delimiter", std::string("|"));
        if (delim.size() != 1) ConfigFail("delimiter must be one character");
        src.delimiter = delim[0];
      } else {
        GenTableSpec &g = src.gen;
        g.name = src.name;
        g.rows = t.at("rows").get<std::size_t>();
        g.tuple_width = t.value("tuple_width", g.tuple_width);
        g.selectivity = t.value("selectivity", g.selectivity);
        g.projectivity = t.value("projectivity", g.projectivity);
        g.key_cardinality = t.value("key_cardinality", g.key_cardinality);
        g.key_mode = ParseKeyMode(t.value("key_mode", std::string("uniform")));
        g.seed = t.value("seed", g.seed);
      }
      c.tables.push_back(std::move(src));
    }

    auto plan_of = [&](const json &p) {
      return p.is_string() ? ReadJsonFile(Resolve(base_dir, p.get<std::string>())) : p;
    };
    if (doc.contains("queries")) {
      for (const json &q : doc.at("queries")) {
        c.queries.push_back({q.at("name").get<std::string>(), plan_of(q.at("plan"))});
      }
    } else if (doc.contains("plan")) {
      c.queries.push_back({doc.value("query_name", std::string("q")), plan_of(doc.at("plan"))});
    }

    const json sweep = doc.value("sweep", json::object());
    c.block_sizes = ParseList<std::size_t>(sweep, "block_size", c.block_sizes,
                                           [](const json &v) { return v.get<std::size_t>(); });
    c.uots = ParseList<UoTPolicy>(sweep, "uot", c.uots, ParseUoTJson);
    c.layouts = ParseList<Layout>(sweep, "layout", c.layouts,
                                  [](const json &v) { return ParseLayout(v.get<std::string>()); });
    c.threads = ParseList<std::size_t>(sweep, "threads", c.threads,
                                       [](const json &v) { return v.get<std::size_t>(); });
    c.repetitions = doc.value("repetitions", c.repetitions);
    c.output_dir = Resolve(base_dir, doc.value("output_dir", c.output_dir));
    const json chains = doc.value("chains", json::object());
    for (const auto &[name, ops] : chains.items()) {
      c.chains[name] = ops.get<std::vector<OperatorId>>();
    }
    c.buffer_cap = doc.value("buffer_cap", c.buffer_cap);
    c.seed = doc.value("seed", c.seed);
    c.build_ordering = ParseBuildOrdering(doc.value("build_ordering", std::string("strategy_aware")));
    c.prefer_consumers = doc.value("prefer_consumers", c.prefer_consumers);
    const std::string events = doc.value("events", std::string("first"));
    if (events == "none") {
      c.events = EventCapture::kNone;
    } else if (events == "all") {
      c.events = EventCapture::kAll;
    } else if (events == "first") {
      c.events = EventCapture::kFirst;
    } else {
      ConfigFail("events must be none, first or all");
    }
  } catch (const json::exception &e) {
    ConfigFail(std::string("config: ") + e.what());
  }
  c.Validate();
  return c;
}

ExperimentConfig LoadExperimentConfig(const std::string &path) {
  return ParseExperimentConfig(ReadJsonFile(path), fs::path(path).parent_path().string());
}

CanonicalQueries LoadTables(StorageManager &storage, const ExperimentConfig &config,
                            std::size_t block_size, Layout layout) {
  CanonicalQueries canonical;
  for (const TableSource &t : config.tables) {
    if (t.generated) {
      GenTableSpec spec = t.gen;
      spec.layout = layout;
      spec.block_size = block_size;
      canonical[t.name] = GenerateTable(storage, spec).canonical;
    } else {
      std::ifstream in(t.file);
      if (!in) ConfigFail("cannot open table file '" + t.file + "'");
      const std::vector<Tuple> tuples = ParseDelimited(in, *t.schema, t.delimiter);
      Table &table = storage.CreateTable(t.name, t.schema, layout, block_size);
      storage.InsertTuples(table, tuples);
    }
  }
  return canonical;
}

std::string ConfigPoint::Label() const {
  return "query=" + query + " block_size=" + std::to_string(block_size) + " uot=" +
         uot.ToString() + " layout=" + std::string(LayoutName(layout)) +
         " threads=" + std::to_string(threads);
}

std::size_t BestSubsetSize(std::size_t repetitions) {
  return std::max<std::size_t>(1, (3 * repetitions + 9) / 10);
}

double BestSubsetMean(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = std::min(values.size(), BestSubsetSize(values.size()));
  return std::accumulate(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(n), 0.0) /
         static_cast<double>(n);
}

namespace {

void CheckRun(const ExecutionMetrics &m, const PlanDAG &dag, const ConfigPoint &point,
              BuildOrdering ordering, std::vector<std::string> &failures) {
  const auto edges = dag.StreamableOperatorEdges();
  auto note = [&](const char *check, const Violations &v) {
    if (!v.empty()) {
      failures.push_back(point.Label() + ": " + check + ": " + std::to_string(v.size()) +
                         " violation(s), first: " + v.front());
    }
  };
  note("timestamps", CheckTimestampOrder(m.events));
  note("worker conservation", CheckWorkerConservation(m.events, point.threads));
  note("monotone availability", CheckMonotoneAvailability(m.events));
  note("build/probe barrier", CheckBuildProbeBarrier(m.events, dag));
  if (point.uot.whole_table()) note("whole-table ordering", CheckWholeTableOrdering(m.events, edges));
  if (!point.uot.whole_table() && point.uot.k_blocks() == 1 &&
      ordering == BuildOrdering::kStrategyAware) {
    note("k=1 promptness", CheckPipeliningPromptness(m.events, edges));
  }
}

}  // namespace

SweepResult RunSweep(const ExperimentConfig &config, const SweepOptions &options) {
  config.Validate();
  SweepResult out;
  out.chains = config.chains;
  std::ostringstream events;
  std::map<std::string, std::string> result_origin;

  for (Layout layout : config.layouts) {
    for (std::size_t block_size : config.block_sizes) {
      StorageManager storage(config.buffer_cap);
      CanonicalQueries canonical;
      std::string load_error_code;
      std::string load_error;
      try {
        canonical = LoadTables(storage, config, block_size, layout);
      } catch (const Error &e) {
        load_error_code = std::string(ErrorCodeName(e.code()));
        load_error = e.what();
      }

      for (const QuerySource &query : config.queries) {
        std::optional<PlanDAG> dag;
        std::string plan_code = load_error_code;
        std::string plan_error = load_error;
        if (plan_error.empty()) {
          try {
            dag.emplace(ParsePlanJson(query.plan, storage, canonical));
            for (const auto &[name, ops] : config.chains) {
              for (OperatorId op : ops) {
                if (op >= dag->size()) {
                  ConfigFail("chain '" + name + "' names operator " + std::to_string(op) +
                             " outside query '" + query.name + "'");
                }
              }
            }
          } catch (const Error &e) {
            plan_code = std::string(ErrorCodeName(e.code()));
            plan_error = e.what();
          }
        }

        for (const UoTPolicy &uot : config.uots) {
          for (std::size_t threads : config.threads) {
            ConfigPoint point{query.name, block_size, uot, layout, threads};
            if (!plan_error.empty()) {
              out.errors.push_back({point, plan_code, plan_error});
              continue;
            }
            SchedulerOptions so;
            so.policy = uot;
            so.threads = threads;
            so.block_size_bytes = block_size;
            so.prefer_consumers = config.prefer_consumers;
            so.build_ordering = config.build_ordering;
            so.seed = config.seed;

            PointSummary summary;
            summary.point = point;
            std::vector<RunRecord> runs;
            bool failed = false;
            for (std::size_t rep = 0; rep < config.repetitions && !failed; ++rep) {
              if (options.progress) *options.progress << point.Label() << " rep=" << rep << '\n';
              try {
                QueryResult qr = RunQuery(storage, *dag, so);
                const ExecutionMetrics &m = qr.metrics;
                RunRecord rec;
                rec.point = point;
                rec.repetition = rep;
                rec.query_ns = m.query_ns();
                rec.peak_intermediate_bytes = m.peak_intermediate_bytes;
                rec.result_rows = qr.result_table->total_tuples();
                for (const OperatorStats &s : m.operators) {
                  rec.operators.push_back(
                      {s, SummarizeWorkOrders(m, s.op), SummarizeDop(m, s.op)});
                }
                for (const auto &[name, ops] : config.chains) rec.chain_ns[name] = ChainSpanNs(m, ops);

                if (config.events == EventCapture::kAll ||
                    (config.events == EventCapture::kFirst && rep == 0)) {
                  events << "# " << point.Label() << " rep=" << rep << '\n';
                  WriteEventLog(events, m.events);
                }
                if (options.check) {
                  CheckRun(m, *dag, point, config.build_ordering, out.check_failures);
                }
                if (rep == 0) {
                  std::vector<std::string> rows = SortedResultRows(storage, *qr.result_table);
                  auto it = out.results.find(query.name);
                  if (it != out.results.end()) rows.insert(rows.begin(), it->second.front());
                  if (it == out.results.end()) {
                    std::ostringstream header;
                    WriteResultCsv(header, storage, *qr.result_table);
                    rows.insert(rows.begin(), header.str().substr(0, header.str().find('\n')));
                    out.results[query.name] = std::move(rows);
                    result_origin[query.name] = point.Label();
                  } else if (options.check && it->second != rows) {
                    out.check_failures.push_back(point.Label() + ": result differs from " +
                                                 result_origin[query.name]);
                  }
                }
                runs.push_back(std::move(rec));
              } catch (const Error &e) {
                out.errors.push_back({point, std::string(ErrorCodeName(e.code())), e.what()});
                failed = true;
              }
            }
            if (failed) continue;
            std::vector<std::pair<std::int64_t, std::size_t>> order;
            for (RunRecord &r : runs) {
              summary.runs.push_back(out.records.size());
              order.emplace_back(r.query_ns, out.records.size());
              out.records.push_back(std::move(r));
            }
            std::sort(order.begin(), order.end());
            const std::size_t best = std::min(order.size(), BestSubsetSize(order.size()));
            double best_total = 0;
            double all_total = 0;
            for (std::size_t i = 0; i < order.size(); ++i) {
              if (i < best) {
                summary.best_runs.push_back(order[i].second);
                best_total += static_cast<double>(order[i].first);
              }
              all_total += static_cast<double>(order[i].first);
            }
            summary.mean_best_ns = best_total / static_cast<double>(best);
            summary.mean_all_ns = all_total / static_cast<double>(order.size());
            summary.min_ns = order.front().first;
            summary.max_ns = order.back().first;
            out.summaries.push_back(std::move(summary));
          }
        }
      }
    }
  }
  out.events = events.str();
  return out;
}

void WriteQueryTimesCsv(std::ostream &out, const SweepResult &r) {
  out << kPointHeader << ",repetitions,best_n,mean_best_ns,mean_all_ns,min_ns,max_ns,result_rows\n";
  out << std::fixed << std::setprecision(1);
  for (const PointSummary &s : r.summaries) {
    PointColumns(out, s.point);
    out << ',' << s.runs.size() << ',' << s.best_runs.size() << ',' << s.mean_best_ns << ','
        << s.mean_all_ns << ',' << s.min_ns << ',' << s.max_ns << ','
        << r.records[s.runs.front()].result_rows << '\n';
  }
}

void WriteChainTimesCsv(std::ostream &out, const SweepResult &r) {
  out << kPointHeader << ",kind,name,ops,mean_best_span_ns\n";
  out << std::fixed << std::setprecision(1);
  for (const PointSummary &s : r.summaries) {
    const RunRecord &first = r.records[s.runs.front()];
    for (std::size_t i = 0; i < first.operators.size(); ++i) {
      PointColumns(out, s.point);
      out << ",operator," << Csv(first.operators[i].stats.name) << ',' << i << ','
          << MeanOver(r, s.best_runs, [&](const RunRecord &rec) {
               return static_cast<double>(rec.operators[i].stats.span_ns());
             })
          << '\n';
    }
    for (const auto &[name, ops] : r.chains) {
      PointColumns(out, s.point);
      std::string ids;
      for (OperatorId op : ops) ids += (ids.empty() ? "" : ";") + std::to_string(op);
      out << ",chain," << Csv(name) << ',' << ids << ','
          << MeanOver(r, s.best_runs, [&, &chain = name](const RunRecord &rec) {
               return static_cast<double>(rec.chain_ns.at(chain));
             })
          << '\n';
    }
  }
}

void WriteWorkOrderTimesCsv(std::ostream &out, const SweepResult &r) {
  out << kPointHeader << ",op,name,op_kind,work_orders,mean_ns,p50_ns,p99_ns\n";
  out << std::fixed << std::setprecision(1);
  for (const PointSummary &s : r.summaries) {
    const RunRecord &first = r.records[s.runs.front()];
    for (std::size_t i = 0; i < first.operators.size(); ++i) {
      const OperatorStats &st = first.operators[i].stats;
      auto mean = [&](auto field) {
        return MeanOver(r, s.best_runs, [&](const RunRecord &rec) {
          return static_cast<double>(field(rec.operators[i].work_orders));
        });
      };
      PointColumns(out, s.point);
      out << ',' << i << ',' << Csv(st.name) << ',' << OperatorKindName(st.kind) << ','
          << st.work_orders << ',' << mean([](const DurationSummary &d) { return d.mean_ns; })
          << ',' << mean([](const DurationSummary &d) { return d.p50_ns; }) << ','
          << mean([](const DurationSummary &d) { return d.p99_ns; }) << '\n';
    }
  }
}

void WriteDopCsv(std::ostream &out, const SweepResult &r) {
  out << kPointHeader << ",op,name,peak_dop,mean_dop\n";
  for (const PointSummary &s : r.summaries) {
    const RunRecord &first = r.records[s.runs.front()];
    for (std::size_t i = 0; i < first.operators.size(); ++i) {
      std::size_t peak = 0;
      for (std::size_t run : s.best_runs) peak = std::max(peak, r.records[run].operators[i].dop.peak);
      PointColumns(out, s.point);
      out << ',' << i << ',' << Csv(first.operators[i].stats.name) << ',' << peak << ','
          << std::fixed << std::setprecision(4)
          << MeanOver(r, s.best_runs,
                      [&](const RunRecord &rec) { return rec.operators[i].dop.mean; })
          << std::defaultfloat << '\n';
    }
  }
}

void WriteMemoryCsv(std::ostream &out, const SweepResult &r) {
  out << kPointHeader << ",scope,name,blocks,block_bytes,payload_bytes,peak_intermediate_bytes\n";
  for (const PointSummary &s : r.summaries) {
    const RunRecord &first = r.records[s.runs.front()];
    std::size_t peak = 0;
    for (std::size_t run : s.best_runs) {
      peak = std::max(peak, r.records[run].peak_intermediate_bytes);
    }
    PointColumns(out, s.point);
    out << ",query," << Csv(s.point.query) << ",,,," << peak << '\n';
    for (std::size_t i = 0; i < first.operators.size(); ++i) {
      const OperatorStats &st = first.operators[i].stats;
      PointColumns(out, s.point);
      out << ",op:" << i << ',' << Csv(st.name) << ',' << st.blocks_produced << ','
          << st.output_block_bytes << ',' << st.output_payload_bytes() << ",\n";
    }
  }
}

void WriteErrorsCsv(std::ostream &out, const SweepResult &r) {
  out << kPointHeader << ",code,message\n";
  for (const PointError &e : r.errors) {
    PointColumns(out, e.point);
    out << ',' << e.code << ',' << Csv(e.message) << '\n';
  }
}

void WriteSweepOutputs(const SweepResult &result, const std::string &dir) {
  fs::create_directories(dir);
  auto write = [&](const std::string &name, auto fn) {
    std::ofstream out(fs::path(dir) / name);
    if (!out) ConfigFail("cannot write '" + (fs::path(dir) / name).string() + "'");
    fn(out);
  };
  write("query_times.csv", [&](std::ostream &o) { WriteQueryTimesCsv(o, result); });
  write("chain_times.csv", [&](std::ostream &o) { WriteChainTimesCsv(o, result); });
  write("workorder_times.csv", [&](std::ostream &o) { WriteWorkOrderTimesCsv(o, result); });
  write("dop.csv", [&](std::ostream &o) { WriteDopCsv(o, result); });
  write("memory.csv", [&](std::ostream &o) { WriteMemoryCsv(o, result); });
  write("errors.csv", [&](std::ostream &o) { WriteErrorsCsv(o, result); });
  write("events.log", [&](std::ostream &o) { o << result.events; });
  for (const auto &[query, rows] : result.results) {
    write("result_" + query + ".csv", [&](std::ostream &o) {
      for (const std::string &row : rows) o << row << '\n';
    });
  }
}

std::vector<OperatorSplitRow> ReportOperatorSplit(const std::vector<RunRecord> &records) {
  using Key = std::tuple<std::string, std::size_t, std::string, std::size_t>;
  std::map<Key, std::vector<const RunRecord *>> groups;
  for (const RunRecord &rec : records) {
    if (!rec.point.uot.whole_table()) {
      throw Error(ErrorCode::kRefusesOverlappedRuns,
                  "operator split needs WHOLE_TABLE runs; got uot=" + rec.point.uot.ToString());
    }
    groups[{rec.point.query, rec.point.block_size, std::string(LayoutName(rec.point.layout)),
            rec.point.threads}]
        .push_back(&rec);
  }
  std::vector<OperatorSplitRow> rows;
  for (const auto &[key, recs] : groups) {
    std::vector<OperatorSplitRow> group;
    for (std::size_t i = 0; i < recs.front()->operators.size(); ++i) {
      OperatorSplitRow row;
      std::tie(row.query, row.block_size, row.layout, row.threads) = key;
      row.op = i;
      row.name = recs.front()->operators[i].stats.name;
      for (const RunRecord *rec : recs) {
        row.span_ns += static_cast<double>(rec->operators[i].stats.span_ns());
      }
      row.span_ns /= static_cast<double>(recs.size());
      group.push_back(row);
    }
    double total = 0;
    for (const auto &row : group) total += row.span_ns;
    for (auto &row : group) row.share = total > 0 ? row.span_ns / total : 0.0;
    std::vector<std::size_t> order(group.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return group[a].share > group[b].share; });
    if (!order.empty()) group[order[0]].rank = "dominant";
    if (order.size() > 1) group[order[1]].rank = "second";
    rows.insert(rows.end(), group.begin(), group.end());
  }
  return rows;
}

std::vector<OperatorSplitRow> ReportOperatorSplitFromCsv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParseError, "empty chain_times input");
  const std::vector<std::string> header = SplitCsvLine(line);
  auto col = [&](const char *name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
      throw Error(ErrorCode::kParseError, std::string("chain_times input lacks column ") + name);
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t c_query = col("query"), c_block = col("block_size"), c_uot = col("uot"),
                    c_layout = col("layout"), c_threads = col("threads"), c_kind = col("kind"),
                    c_name = col("name"), c_ops = col("ops"), c_span = col("mean_best_span_ns");

  // Reuse the record-based path with one synthetic record per point.
  std::map<std::string, RunRecord> points;
  std::vector<std::string> order;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = SplitCsvLine(line);
    if (f.size() != header.size()) throw Error(ErrorCode::kParseError, "bad row: " + line);
    if (f[c_kind] != "operator") continue;
    const UoTPolicy uot = UoTPolicy::Parse(f[c_uot]);
    const std::string key = f[c_query] + '\x1f' + f[c_block] + '\x1f' + f[c_uot] + '\x1f' +
                            f[c_layout] + '\x1f' + f[c_threads];
    auto [it, fresh] = points.try_emplace(key);
    RunRecord &rec = it->second;
    if (fresh) {
      order.push_back(key);
      rec.point = {f[c_query], std::stoull(f[c_block]), uot, ParseLayout(f[c_layout]),
                   std::stoull(f[c_threads])};
    }
    OperatorRun op;
    op.stats.op = std::stoull(f[c_ops]);
    op.stats.name = f[c_name];
    op.stats.first_start_ns = 0;
    op.stats.last_finish_ns = std::llround(std::stod(f[c_span]));
    if (rec.operators.size() <= op.stats.op) rec.operators.resize(op.stats.op + 1);
    rec.operators[op.stats.op] = op;
  }
  std::vector<RunRecord> records;
  for (const std::string &key : order) records.push_back(points[key]);
  return ReportOperatorSplit(records);
}

void WriteOperatorSplitCsv(std::ostream &out, const std::vector<OperatorSplitRow> &rows) {
  out << "query,block_size,layout,threads,op,name,span_ns,share,rank\n";
  for (const OperatorSplitRow &r : rows) {
    out << Csv(r.query) << ',' << r.block_size << ',' << r.layout << ',' << r.threads << ','
        << r.op << ',' << Csv(r.name) << ',' << std::fixed << std::setprecision(1) << r.span_ns
        << ',' << std::setprecision(6) << r.share << std::defaultfloat << ',' << r.rank << '\n';
  }
}

}  // namespace uot
