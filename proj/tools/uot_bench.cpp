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

// uot_bench: data generation, experiment sweeps and the analytical models
// from the command line.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uot/bench/datagen.hpp"
#include "uot/bench/experiment.hpp"
#include "uot/common/error.hpp"
#include "uot/costmodel/calibration.hpp"
#include "uot/costmodel/cost_model.hpp"
#include "uot/memmodel/mem_model.hpp"
#include "uot/storage/storage_manager.hpp"
#include "uot/storage/text_loader.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitEngine = 2;
constexpr int kExitCheck = 3;

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::size_t> block_size;
  std::optional<std::string> uot;
  std::optional<std::string> layout;
  std::optional<std::size_t> buffer_cap;
  bool check = false;
};

bool IsInputError(uot::ErrorCode code) {
  using uot::ErrorCode;
  switch (code) {
    case ErrorCode::kConfigError:
    case ErrorCode::kParseError:
    case ErrorCode::kInvalidParams:
    case ErrorCode::kInvalidStats:
    case ErrorCode::kInvalidSpec:
    case ErrorCode::kInvalidPlan:
    case ErrorCode::kNonPositiveInput:
    case ErrorCode::kZeroDenominator:
    case ErrorCode::kUnknownTable:
    case ErrorCode::kUnknownOperator:
    case ErrorCode::kSchemaMismatch:
    case ErrorCode::kDuplicateTableName:
    case ErrorCode::kBlockTooSmall:
    case ErrorCode::kRefusesOverlappedRuns:
      return true;
    default:
      return false;
  }
}

void ApplyOverrides(uot::ExperimentConfig &config, const GlobalFlags &g) {
  if (g.seed) config.seed = *g.seed;
  if (g.threads) config.threads = {*g.threads};
  if (g.block_size) config.block_sizes = {*g.block_size};
  if (g.uot) config.uots = {uot::UoTPolicy::Parse(*g.uot)};
  if (g.layout) config.layouts = {uot::ParseLayout(*g.layout)};
  if (g.buffer_cap) config.buffer_cap = *g.buffer_cap;
}

int FinishSweep(const uot::SweepResult &result, const std::string &dir, bool check) {
  uot::WriteSweepOutputs(result, dir);
  std::cout << result.summaries.size() << " point(s), " << result.records.size() << " run(s), "
            << result.errors.size() << " error(s); outputs in " << dir << "\n";
  for (const uot::PointError &e : result.errors) {
    std::cerr << "error: " << e.point.Label() << ": " << e.message << "\n";
  }
  if (check) {
    for (const std::string &f : result.check_failures) std::cerr << "check: " << f << "\n";
    std::cout << "check: " << (result.check_failures.empty() ? "PASS" : "FAIL") << "\n";
    if (!result.check_failures.empty()) return kExitCheck;
  }
  return result.errors.empty() ? kExitOk : kExitEngine;
}

std::vector<double> SplitNumbers(const std::string &text, std::size_t expected,
                                 const std::string &what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    try {
      out.push_back(std::stod(part));
    } catch (const std::exception &) {
      throw uot::Error(uot::ErrorCode::kConfigError, what + ": bad number '" + part + "'");
    }
  }
  if (out.size() != expected) {
    throw uot::Error(uot::ErrorCode::kConfigError,
                     what + " takes " + std::to_string(expected) + " comma-separated numbers");
  }
  return out;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"UoT engine benchmark harness"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags g;
  app.add_option("--seed", g.seed, "Work-order shuffle seed (0 = arrival order)");
  app.add_option("--threads", g.threads, "Worker threads");
  app.add_option("--block-size", g.block_size, "Block size in bytes");
  app.add_option("--uot", g.uot, "Unit of transfer: k blocks or 'whole'");
  app.add_option("--layout", g.layout, "Base table layout: row or column");
  app.add_option("--buffer-cap", g.buffer_cap, "Memory budget in bytes (0 = unlimited)");
  app.add_flag("--check", g.check, "Verify trace invariants and result equality; exit 3 on failure");

  // load
  auto *load = app.add_subcommand("load", "Parse a delimited file into a table and report it");
  std::string load_schema, load_file, load_name = "t", load_delim = "|";
  load->add_option("--schema", load_schema, "JSON array of {name, type, width}")->required();
  load->add_option("--file", load_file, "Delimited input")->required();
  load->add_option("--name", load_name, "Table name");
  load->add_option("--delimiter", load_delim, "Field delimiter");

  // gen
  auto *gen = app.add_subcommand("gen", "Generate a synthetic table to a delimited file");
  uot::GenTableSpec gs;
  std::string gen_out, gen_key_mode = "uniform";
  gen->add_option("--rows", gs.rows, "Row count")->required();
  gen->add_option("--width", gs.tuple_width, "Tuple width in bytes");
  gen->add_option("--selectivity", gs.selectivity, "Canonical predicate selectivity");
  gen->add_option("--projectivity", gs.projectivity, "Canonical projection byte fraction");
  gen->add_option("--key-card", gs.key_cardinality, "Distinct keys (0 = rows)");
  gen->add_option("--key-mode", gen_key_mode, "uniform or sequential");
  gen->add_option("--gen-seed", gs.seed, "Generator seed");
  gen->add_option("--out", gen_out, "Output file")->required();

  // run / sweep
  auto *run = app.add_subcommand("run", "Run one configuration point of an experiment");
  auto *sweep = app.add_subcommand("sweep", "Run every configuration point of an experiment");
  std::string config_path, out_dir;
  for (CLI::App *sub : {run, sweep}) {
    sub->add_option("--config", config_path, "Experiment JSON")->required();
    sub->add_option("--out", out_dir, "Output directory (overrides the config)");
  }
  std::size_t run_reps = 0;
  run->add_option("--repetitions", run_reps, "Repetitions (default: from config)");

  // costmodel
  auto *cost = app.add_subcommand("costmodel", "Evaluate the extra-work cost model");
  std::string params_in, params_out;
  std::vector<std::string> sets;
  bool calibrate = false;
  uot::CalibrationOptions calibration;
  cost->add_option("--params", params_in, "key=value parameter file");
  cost->add_option("--set", sets, "Override a parameter, key=value");
  cost->add_flag("--calibrate", calibrate, "Measure AR_L3, R_L3, W_mem at --block-size");
  cost->add_option("--max-cv", calibration.max_cv,
                   "Largest accepted coefficient of variation across calibration runs");
  cost->add_option("--write-params", params_out, "Write the effective parameters here");

  // memmodel
  auto *mem = app.add_subcommand("memmodel", "Compare low/high UoT memory footprints");
  std::string mem_query = "q", mem_selection, mem_out;
  std::vector<std::string> mem_hash;
  mem->add_option("--query", mem_query, "Query label for the CSV");
  mem->add_option("--selection", mem_selection, "rows,tuple_bytes,selectivity,projectivity")
      ->required();
  mem->add_option("--hash", mem_hash, "M,w,c,f for H1..Hn, in cascade order");
  mem->add_option("--out", mem_out, "CSV output (default stdout)");

  // report
  auto *report = app.add_subcommand("report", "Per-operator time share from WHOLE_TABLE runs");
  std::string report_in, report_out;
  report->add_option("--in", report_in, "chain_times.csv")->required();
  report->add_option("--out", report_out, "operator_split.csv (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*load) {
      std::ifstream schema_in(load_schema);
      if (!schema_in) throw uot::Error(uot::ErrorCode::kConfigError, "cannot open " + load_schema);
      nlohmann::json doc;
      try {
        doc = nlohmann::json::parse(schema_in);
      } catch (const nlohmann::json::exception &e) {
        throw uot::Error(uot::ErrorCode::kParseError, e.what());
      }
      std::vector<uot::Column> cols;
      for (const auto &c : doc) {
        const std::string type = c.at("type").get<std::string>();
        const std::string name = c.at("name").get<std::string>();
        if (type == "int64") {
          cols.push_back(uot::Column::Int64(name));
        } else if (type == "double") {
          cols.push_back(uot::Column::Double(name));
        } else {
          cols.push_back(uot::Column::Char(name, c.at("width").get<std::size_t>()));
        }
      }
      const uot::SchemaPtr schema = uot::MakeSchema(cols);
      std::ifstream in(load_file);
      if (!in) throw uot::Error(uot::ErrorCode::kConfigError, "cannot open " + load_file);
      uot::StorageManager storage(g.buffer_cap.value_or(0));
      uot::Table &table = storage.CreateTable(
          load_name, schema, uot::ParseLayout(g.layout.value_or("row")),
          g.block_size.value_or(128 * 1024));
      storage.InsertTuples(table, uot::ParseDelimited(in, *schema, load_delim.at(0)));
      std::cout << table.name() << ": " << table.total_tuples() << " rows, " << table.num_blocks()
                << " blocks, " << table.total_bytes() << " bytes, schema " << schema->ToString()
                << "\n";
      return kExitOk;
    }
    if (*gen) {
      gs.name = "gen";
      gs.key_mode = uot::ParseKeyMode(gen_key_mode);
      const uot::GeneratedTable t = uot::GenerateTableFile(gs, gen_out);
      std::cout << "schema " << t.schema->ToString() << "\n"
                << "threshold " << t.threshold << " (flag < threshold passes " << t.passing_rows
                << " rows)\n"
                << "projected_width " << t.projected_width << " of " << t.schema->tuple_width()
                << "\n";
      return kExitOk;
    }
    if (*run || *sweep) {
      uot::ExperimentConfig config = uot::LoadExperimentConfig(config_path);
      ApplyOverrides(config, g);
      if (*run) {
        config.block_sizes.erase(config.block_sizes.begin() + 1, config.block_sizes.end());
        config.uots.erase(config.uots.begin() + 1, config.uots.end());
        config.layouts.erase(config.layouts.begin() + 1, config.layouts.end());
        config.threads.erase(config.threads.begin() + 1, config.threads.end());
        if (run_reps > 0) config.repetitions = run_reps;
      }
      uot::SweepOptions options;
      options.check = g.check;
      const uot::SweepResult result = uot::RunSweep(config, options);
      return FinishSweep(result, out_dir.empty() ? config.output_dir : out_dir, g.check);
    }
    if (*cost) {
      uot::CostParams params;
      if (!params_in.empty()) {
        std::ifstream in(params_in);
        if (!in) throw uot::Error(uot::ErrorCode::kConfigError, "cannot open " + params_in);
        params = uot::ReadCostParams(in);
      }
      if (calibrate) {
        const uot::CostParams measured = uot::CalibrateParams(g.block_size.value_or(128 * 1024), calibration);
        for (const char *f : {"AR_L3", "R_L3", "W_mem", "B"}) {
          params.Set(f, measured.Get(f), measured.ProvenanceOf(f));
        }
      }
      if (g.threads) params.Set("T", static_cast<double>(*g.threads));
      if (g.block_size && !calibrate) params.Set("B", static_cast<double>(*g.block_size));
      for (const std::string &kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
          throw uot::Error(uot::ErrorCode::kConfigError, "--set expects key=value");
        }
        params.Set(kv.substr(0, eq), std::stod(kv.substr(eq + 1)));
      }
      for (const std::string &w : uot::ValidateCostParams(params)) std::cerr << "warning: " << w << "\n";
      std::cout.precision(17);
      std::cout << "p_prime_1=" << uot::PPrime1(params.B, params.T, params.L3_size) << "\n"
                << "extra_cost_high=" << uot::ExtraCostHighUoT(params) << "\n"
                << "extra_cost_low=" << uot::ExtraCostLowUoT(params) << "\n";
      for (bool simplified : {true, false}) {
        std::cout << (simplified ? "cost_ratio_simplified=" : "cost_ratio_full=");
        try {
          std::cout << uot::CostRatio(params, simplified) << "\n";
        } catch (const uot::Error &e) {
          std::cout << "undefined (" << e.what() << ")\n";
        }
      }
      std::cout << "extra_cost_disk_high=" << uot::ExtraCostDisk(params, uot::UoTRegime::kHigh)
                << "\n"
                << "extra_cost_disk_low=" << uot::ExtraCostDisk(params, uot::UoTRegime::kLow)
                << "\n";
      for (const std::string &line : uot::DescribeRegime(params)) {
        std::cout << "# " << line << "\n";
      }
      if (!params_out.empty()) {
        std::ofstream out(params_out);
        uot::WriteCostParams(out, params);
      }
      return kExitOk;
    }
    if (*mem) {
      const auto s = SplitNumbers(mem_selection, 4, "--selection");
      const uot::SelectionStats stats = uot::SelectionStats::FromFractions(s[0], s[1], s[2], s[3]);
      std::vector<uot::HashTableSpec> cascade;
      for (const std::string &h : mem_hash) {
        const auto v = SplitNumbers(h, 4, "--hash");
        cascade.push_back({v[0], v[1], v[2], v[3]});
      }
      const uot::FootprintReport r = uot::CompareFootprints(cascade, stats);
      if (mem_out.empty()) {
        uot::WriteFootprintCsv(std::cout, mem_query, r);
      } else {
        std::ofstream out(mem_out);
        uot::WriteFootprintCsv(out, mem_query, r);
      }
      return kExitOk;
    }
    if (*report) {
      std::ifstream in(report_in);
      if (!in) throw uot::Error(uot::ErrorCode::kConfigError, "cannot open " + report_in);
      const auto rows = uot::ReportOperatorSplitFromCsv(in);
      if (report_out.empty()) {
        uot::WriteOperatorSplitCsv(std::cout, rows);
      } else {
        std::ofstream out(report_out);
        uot::WriteOperatorSplitCsv(out, rows);
      }
      return kExitOk;
    }
  } catch (const uot::Error &e) {
    std::cerr << "uot_bench: " << e.what() << "\n";
    return IsInputError(e.code()) ? kExitConfig : kExitEngine;
  } catch (const std::exception &e) {
    std::cerr << "uot_bench: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitOk;
}
