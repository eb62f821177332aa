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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "colstore/cluster.hpp"
#include "colstore/experiments.hpp"
#include "colstore/generators.hpp"
#include "colstore/jobs.hpp"

namespace fs = std::filesystem;
using namespace colstore;

namespace {

nlohmann::json metrics_json(const ScanMetrics& m) {
  nlohmann::json j;
  j["bytes_read_local"] = m.bytes_read_local;
  j["bytes_read_remote"] = m.bytes_read_remote;
  j["bytes_read_total"] = m.bytes_read_total();
  j["transfers"] = m.transfers;
  j["blocks_decompressed"] = m.blocks_decompressed;
  j["values_deserialized"] = m.values_deserialized;
  j["values_deserialized_total"] = m.values_deserialized_total();
  j["records_emitted"] = m.records_emitted;
  j["wall_time_s"] = m.wall_time_s;
  j["load_time_s"] = m.load_time_s;
  return j;
}

int cmd_generate(const std::string& kind, uint64_t records, uint64_t seed,
                 const fs::path& out, double match_fraction, uint32_t columns,
                 double typed_fraction, const std::string& typed_kind,
                 uint64_t content_bytes) {
  Dataset data;
  if (kind == "synthetic") {
    data = match_fraction >= 0
               ? generate_synthetic_with_matches(records, match_fraction, seed)
               : generate_synthetic(records, seed);
  } else if (kind == "crawl") {
    double f = match_fraction >= 0 ? match_fraction : 0.06;
    data = generate_crawl(records, f, content_bytes, seed);
  } else if (kind == "wide") {
    data = generate_wide(columns, records * columns * 34ull, seed);
  } else if (kind == "deser") {
    data = generate_deser_bench(records, typed_fraction,
                                deser_kind_from_name(typed_kind), seed);
  } else {
    throw SchemaError("unknown --kind '" + kind + "'");
  }
  uint64_t n = write_dataset(out, FileFormat::Seq, data.records, data.schema);
  std::cout << "wrote " << n << " records to " << out.string()
            << " (seq format)\n";
  return 0;
}

int cmd_load(const fs::path& in, const std::string& in_format,
             const fs::path& out, const std::string& out_format,
             const std::string& layout, uint64_t split_bytes,
             uint64_t rowgroup_bytes, const std::string& seq_variant,
             const std::string& codec) {
  DatasetWriteOptions options;
  options.cif_plan = ColumnLayoutPlan::parse(layout);
  options.split_target_bytes = split_bytes;
  options.pax.rowgroup_target_bytes = rowgroup_bytes;
  options.pax.codec = codec_from_name(codec);
  options.seq.variant = seq_variant == "block" ? SeqVariant::Block
                                               : SeqVariant::Uncompressed;
  LoadResult r = load_dataset(in, format_from_name(in_format), out,
                              format_from_name(out_format), options);
  std::cout << "loaded " << r.records << " records in " << r.load_time_s
            << " s\n";
  return 0;
}

int cmd_scan(const fs::path& data, const std::string& format,
             const std::string& columns, const std::string& job_name,
             const std::string& predicate_col, const std::string& pattern,
             const std::string& target_col, const std::string& map_key,
             const std::string& mode, const std::string& metering,
             uint64_t transfer_bytes, uint32_t workers) {
  DatasetHandle handle = open_dataset(data, format_from_name(format));
  JobSpec job;
  job.kind = job_kind_from_name(job_name);
  job.predicate_column = predicate_col;
  job.predicate_substring = pattern;
  job.target_column = target_col;
  job.target_map_key = map_key;
  job.projection = Projection::parse_csv(columns);

  ScanOptions options;
  options.mode = mode == "lazy" ? ScanMode::Lazy : ScanMode::Eager;
  options.metering.mode =
      metering == "transfer" ? MeterMode::Transfer : MeterMode::Exact;
  options.metering.transfer_bytes = transfer_bytes;
  options.workers = workers;

  JobResult result = run_job(handle, job, options);
  for (const std::string& line : result.output) std::cout << line << '\n';
  std::cout << "---\n" << metrics_json(result.metrics).dump(2) << '\n';
  return 0;
}

int cmd_bench(const std::string& experiment, const fs::path& spec_file,
              const fs::path& report_dir) {
  ExperimentSpec spec = ExperimentSpec::from_json_file(spec_file, experiment);
  fs::create_directories(report_dir);
  ExperimentReport report = run_experiment(spec, report_dir);
  std::cout << "experiment " << experiment << ": " << report.rows.size()
            << " rows -> " << (report_dir / (experiment + ".csv")).string()
            << '\n';
  return 0;
}

int cmd_simulate(uint32_t nodes, uint32_t slots, uint32_t replication,
                 uint64_t block_bytes, const std::string& policy_name,
                 uint64_t seed, const fs::path& data,
                 const std::string& columns, const fs::path& config_file,
                 const fs::path& report_dir) {
  ClusterConfig config;
  if (!config_file.empty()) config = parse_cluster_config(config_file);
  if (nodes) config.node_count = nodes;
  if (slots) config.map_slots_per_node = slots;
  if (replication) config.replication_factor = replication;
  if (block_bytes) config.block_bytes = block_bytes;
  config.rng_seed = seed;

  PlacementPolicy policy = placement_from_name(policy_name);
  DatasetHandle handle = open_dataset(data, FileFormat::Cif);
  Projection projection = Projection::parse_csv(columns);

  BlockMap map = place(dataset_files(data), policy, config);
  auto assignment = schedule(handle.splits, projection, map, config);
  LocalityReport locality =
      simulate_scan(assignment, handle.splits, projection, map);

  // Re-run the scan for real, with reads tagged local/remote per block.
  BlockLocalityMap merged;
  merged.block_bytes = config.block_bytes;
  for (const TaskAssignment& task : assignment) {
    BlockLocalityMap one = locality_for_task(
        task, handle.splits.at(task.split_index), projection, map);
    merged.per_file.insert(one.per_file.begin(), one.per_file.end());
  }
  ScanOptions options;
  options.locality = &merged;
  JobSpec job;
  job.kind = JobKind::FullChecksum;
  job.projection = projection;
  JobResult scanned = run_job(handle, job, options);

  nlohmann::json out = nlohmann::json::parse(locality.to_json());
  out["policy"] = policy_name;
  out["nodes"] = config.node_count;
  out["slots_per_node"] = config.map_slots_per_node;
  out["replication"] = config.replication_factor;
  out["block_bytes"] = config.block_bytes;
  out["seed"] = config.rng_seed;
  out["scan_metrics"] = metrics_json(scanned.metrics);
  std::cout << out.dump(2) << '\n';

  if (!report_dir.empty()) {
    fs::create_directories(report_dir);
    std::ofstream csv(report_dir / "locality.csv", std::ios::trunc);
    csv << locality.to_csv();
    std::ofstream js(report_dir / "locality.json", std::ios::trunc);
    js << out.dump(2);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"columnar storage engine benchmark harness"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "generate a dataset (seq format)");
  std::string g_kind;
  uint64_t g_records = 0, g_seed = 42, g_content_bytes = 4096;
  double g_match = -1.0, g_typed_fraction = 0.5;
  uint32_t g_columns = 20;
  std::string g_typed_kind = "int";
  fs::path g_out;
  gen->add_option("--kind", g_kind, "synthetic|crawl|wide|deser")->required();
  gen->add_option("--records", g_records)->required();
  gen->add_option("--seed", g_seed);
  gen->add_option("--out", g_out)->required();
  gen->add_option("--match-fraction", g_match);
  gen->add_option("--columns", g_columns);
  gen->add_option("--typed-fraction", g_typed_fraction);
  gen->add_option("--typed-kind", g_typed_kind, "int|double|map");
  gen->add_option("--content-bytes", g_content_bytes);

  // load
  auto* load = app.add_subcommand("load", "convert a dataset between formats");
  fs::path l_in, l_out;
  std::string l_in_format, l_out_format, l_layout = "plain";
  std::string l_seq_variant = "uncomp", l_codec = "raw";
  uint64_t l_split_bytes = 64ull << 20, l_rowgroup_bytes = 4ull << 20;
  load->add_option("--in", l_in)->required();
  load->add_option("--in-format", l_in_format, "txt|seq|pax|cif")->required();
  load->add_option("--out", l_out)->required();
  load->add_option("--out-format", l_out_format)->required();
  load->add_option("--layout", l_layout,
                   "plain|skiplist|blocks:CODEC:SIZE|dcsl:N");
  load->add_option("--split-bytes", l_split_bytes);
  load->add_option("--rowgroup-bytes", l_rowgroup_bytes);
  load->add_option("--seq-variant", l_seq_variant, "uncomp|block");
  load->add_option("--codec", l_codec, "raw|fast|high (pax segments)");

  // scan
  auto* scan = app.add_subcommand("scan", "run a job over a dataset");
  fs::path s_data;
  std::string s_format, s_columns, s_job = "checksum";
  std::string s_pred, s_pattern, s_target, s_map_key;
  std::string s_mode = "eager", s_metering = "exact";
  uint64_t s_transfer = 128 * 1024;
  uint32_t s_workers = 1;
  scan->add_option("--data", s_data)->required();
  scan->add_option("--format", s_format)->required();
  scan->add_option("--columns", s_columns, "projection, comma separated");
  scan->add_option("--job", s_job, "distinct|aggregate|checksum");
  scan->add_option("--predicate-col", s_pred);
  scan->add_option("--pattern", s_pattern);
  scan->add_option("--target-col", s_target);
  scan->add_option("--map-key", s_map_key);
  scan->add_option("--mode", s_mode, "eager|lazy");
  scan->add_option("--metering", s_metering, "exact|transfer");
  scan->add_option("--transfer-bytes", s_transfer);
  scan->add_option("--workers", s_workers);

  // bench
  auto* bench = app.add_subcommand("bench", "run a built-in experiment");
  std::string b_experiment;
  fs::path b_spec, b_report_dir;
  bench
      ->add_option("--experiment", b_experiment,
                   "scan-matrix|selectivity|rowgroup|width|deser|placement|"
                   "load-times")
      ->required();
  bench->add_option("--spec", b_spec, "JSON overrides for the defaults");
  bench->add_option("--report-dir", b_report_dir)->required();

  // simulate
  auto* sim = app.add_subcommand(
      "simulate", "block placement, scheduling, and locality accounting");
  uint32_t m_nodes = 0, m_slots = 0, m_replication = 0;
  uint64_t m_block_bytes = 0, m_seed = 42;
  std::string m_policy = "cpp", m_columns;
  fs::path m_data, m_config, m_report_dir;
  sim->add_option("--nodes", m_nodes);
  sim->add_option("--slots", m_slots);
  sim->add_option("--replication", m_replication);
  sim->add_option("--block-bytes", m_block_bytes);
  sim->add_option("--policy", m_policy, "default|cpp");
  sim->add_option("--seed", m_seed);
  sim->add_option("--data", m_data)->required();
  sim->add_option("--columns", m_columns);
  sim->add_option("--config", m_config, "key=value cluster config file");
  sim->add_option("--report-dir", m_report_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return cmd_generate(g_kind, g_records, g_seed, g_out, g_match, g_columns,
                          g_typed_fraction, g_typed_kind, g_content_bytes);
    }
    if (load->parsed()) {
      return cmd_load(l_in, l_in_format, l_out, l_out_format, l_layout,
                      l_split_bytes, l_rowgroup_bytes, l_seq_variant, l_codec);
    }
    if (scan->parsed()) {
      return cmd_scan(s_data, s_format, s_columns, s_job, s_pred, s_pattern,
                      s_target, s_map_key, s_mode, s_metering, s_transfer,
                      s_workers);
    }
    if (bench->parsed()) {
      return cmd_bench(b_experiment, b_spec, b_report_dir);
    }
    if (sim->parsed()) {
      return cmd_simulate(m_nodes, m_slots, m_replication, m_block_bytes,
                          m_policy, m_seed, m_data, m_columns, m_config,
                          m_report_dir);
    }
  } catch (const CorruptionError& e) {
    std::cerr << "data corruption: " << e.what() << '\n';
    return 2;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
