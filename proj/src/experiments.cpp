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

#include "colstore/experiments.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "colstore/cluster.hpp"
#include "colstore/generators.hpp"
#include "colstore/jobs.hpp"

namespace colstore {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

/// Runs a job `reps` times, returning the run with the smallest wall time
/// (counters are deterministic across runs).
JobResult timed_job(const DatasetHandle& dataset, const JobSpec& job,
                    const ScanOptions& options, uint32_t reps) {
  JobResult best;
  for (uint32_t i = 0; i < std::max<uint32_t>(1, reps); ++i) {
    JobResult r = run_job(dataset, job, options);
    if (i == 0 || r.metrics.wall_time_s < best.metrics.wall_time_s) {
      best = std::move(r);
    }
  }
  return best;
}

ReportRow scan_row(const std::string& case_label, const std::string& format,
                   const std::string& layout, const Projection& projection,
                   const ScanOptions& options, const JobResult& result) {
  ReportRow row;
  row.case_label = case_label;
  row.format = format;
  row.layout = layout;
  row.projection = projection.to_string();
  row.mode = std::string(scan_mode_name(options.mode));
  row.metering =
      options.metering.mode == MeterMode::Exact ? "exact" : "transfer";
  row.records = result.records_scanned;
  row.metrics = result.metrics;
  return row;
}

JobSpec checksum_job(const Projection& projection) {
  JobSpec job;
  job.kind = JobKind::FullChecksum;
  job.projection = projection;
  return job;
}

struct CifVariant {
  std::string name;
  ColumnLayoutPlan plan;
  ScanMode mode;
};

std::vector<CifVariant> matrix_cif_variants() {
  std::vector<CifVariant> v;
  v.push_back({"cif", ColumnLayoutPlan::parse("plain"), ScanMode::Eager});
  v.push_back(
      {"cif-sl", ColumnLayoutPlan::parse("skiplist"), ScanMode::Eager});
  v.push_back({"cif-fast", ColumnLayoutPlan::parse("blocks:fast:262144"),
               ScanMode::Eager});
  v.push_back({"cif-high", ColumnLayoutPlan::parse("blocks:high:262144"),
               ScanMode::Eager});
  v.push_back({"cif-dcsl", ColumnLayoutPlan::parse("dcsl:10000"),
               ScanMode::Eager});
  return v;
}

// ---------------------------------------------------------------------------
// scan-matrix: {TXT, SEQ, PAX x rowgroup sizes, CIF x layouts} x
// {one int, one string, one map, all columns}, transfer metering.
// ---------------------------------------------------------------------------

void run_scan_matrix(const ExperimentSpec& spec, const fs::path& work,
                     ExperimentReport& report) {
  Dataset data = generate_synthetic(spec.synthetic_records, spec.seed);
  ScanOptions options;
  options.metering = {MeterMode::Transfer, spec.transfer_bytes};
  options.workers = spec.workers;

  std::vector<std::pair<std::string, Projection>> projections = {
      {"one-int", Projection{{"int0"}}},
      {"one-string", Projection{{"str0"}}},
      {"one-map", Projection{{"map0"}}},
      {"all", Projection{}},
  };

  auto scan_all = [&](const std::string& fmt_label, const fs::path& dir,
                      FileFormat format, const std::string& layout) {
    DatasetHandle handle = open_dataset(dir, format);
    for (const auto& [label, projection] : projections) {
      JobResult r = timed_job(handle, checksum_job(projection), options,
                              spec.repetitions);
      report.rows.push_back(
          scan_row(label, fmt_label, layout, projection, options, r));
    }
  };

  DatasetWriteOptions w;
  write_dataset(work / "txt", FileFormat::Txt, data.records, data.schema, w);
  scan_all("txt", work / "txt", FileFormat::Txt, "-");
  write_dataset(work / "seq", FileFormat::Seq, data.records, data.schema, w);
  scan_all("seq", work / "seq", FileFormat::Seq, "-");

  for (uint64_t group : spec.pax_rowgroup_bytes) {
    DatasetWriteOptions pw;
    pw.pax.rowgroup_target_bytes = group;
    fs::path dir = work / ("pax-" + std::to_string(group >> 20) + "m");
    write_dataset(dir, FileFormat::Pax, data.records, data.schema, pw);
    std::string label = "pax-" + std::to_string(group >> 20) + "m";
    DatasetHandle handle = open_dataset(dir, FileFormat::Pax);
    for (const auto& [plabel, projection] : projections) {
      JobResult r = timed_job(handle, checksum_job(projection), options,
                              spec.repetitions);
      ReportRow row =
          scan_row(plabel, "pax", label, projection, options, r);
      row.extra["rowgroup_bytes"] = std::to_string(group);
      report.rows.push_back(std::move(row));
    }
  }

  for (const CifVariant& variant : matrix_cif_variants()) {
    DatasetWriteOptions cw;
    cw.cif_plan = variant.plan;
    cw.split_target_bytes = spec.split_target_bytes;
    fs::path dir = work / variant.name;
    write_dataset(dir, FileFormat::Cif, data.records, data.schema, cw);
    scan_all(variant.name, dir, FileFormat::Cif, variant.plan.to_string());
  }
}

// ---------------------------------------------------------------------------
// selectivity: CIF (eager, plain) vs CIF-SL (lazy, skip lists), aggregating a
// map value under a key for records whose string column matches the planted
// token, at selectivities from 1% to 100%.
// ---------------------------------------------------------------------------

void run_selectivity(const ExperimentSpec& spec, const fs::path& work,
                     ExperimentReport& report) {
  for (uint32_t pct : spec.selectivities_pct) {
    Dataset data = generate_synthetic_with_matches(
        spec.synthetic_records, pct / 100.0, spec.seed);

    JobSpec job;
    job.kind = JobKind::MapAggregate;
    job.predicate_column = "str0";
    job.predicate_substring = std::string(kSyntheticMatchToken);
    job.target_column = "map0";
    job.target_map_key = "aaaa";  // access cost is the point, hits are not

    struct Variant {
      const char* name;
      const char* plan;
      ScanMode mode;
    };
    for (const Variant& v :
         {Variant{"cif", "plain", ScanMode::Eager},
          Variant{"cif-sl", "skiplist", ScanMode::Lazy}}) {
      DatasetWriteOptions w;
      w.cif_plan = ColumnLayoutPlan::parse(v.plan);
      w.split_target_bytes = spec.split_target_bytes;
      fs::path dir =
          work / (std::string(v.name) + "-s" + std::to_string(pct));
      write_dataset(dir, FileFormat::Cif, data.records, data.schema, w);
      DatasetHandle handle = open_dataset(dir, FileFormat::Cif);

      ScanOptions options;
      options.mode = v.mode;
      options.metering = {MeterMode::Exact, spec.transfer_bytes};
      options.workers = spec.workers;
      JobResult r = timed_job(handle, job, options, spec.repetitions);
      ReportRow row = scan_row("sel-" + std::to_string(pct), v.name,
                               v.plan, job.effective_projection(data.schema),
                               options, r);
      row.extra["selectivity_pct"] = std::to_string(pct);
      row.extra["matches"] = std::to_string(r.matches);
      report.rows.push_back(std::move(row));
    }
  }
}

// ---------------------------------------------------------------------------
// rowgroup: single-int-column bytes read vs PAX row-group size, with the CIF
// figure as reference.
// ---------------------------------------------------------------------------

void run_rowgroup(const ExperimentSpec& spec, const fs::path& work,
                  ExperimentReport& report) {
  Dataset data = generate_synthetic(spec.synthetic_records, spec.seed);
  Projection projection{{"int0"}};
  ScanOptions options;
  options.metering = {MeterMode::Transfer, spec.transfer_bytes};
  options.workers = spec.workers;

  for (uint64_t group : spec.pax_rowgroup_bytes) {
    DatasetWriteOptions w;
    w.pax.rowgroup_target_bytes = group;
    fs::path dir = work / ("pax-" + std::to_string(group >> 20) + "m");
    write_dataset(dir, FileFormat::Pax, data.records, data.schema, w);
    DatasetHandle handle = open_dataset(dir, FileFormat::Pax);
    JobResult r =
        timed_job(handle, checksum_job(projection), options,
                  spec.repetitions);
    ReportRow row = scan_row("rowgroup", "pax",
                             std::to_string(group >> 20) + "m", projection,
                             options, r);
    row.extra["rowgroup_bytes"] = std::to_string(group);
    report.rows.push_back(std::move(row));
  }

  DatasetWriteOptions w;
  w.split_target_bytes = spec.split_target_bytes;
  write_dataset(work / "cif", FileFormat::Cif, data.records, data.schema, w);
  DatasetHandle handle = open_dataset(work / "cif", FileFormat::Cif);
  JobResult r =
      timed_job(handle, checksum_job(projection), options, spec.repetitions);
  report.rows.push_back(
      scan_row("rowgroup", "cif", "plain", projection, options, r));
}

// ---------------------------------------------------------------------------
// width: 20/40/80 all-string columns at a fixed record count, projecting one
// column, 10% of columns, and all columns.
// ---------------------------------------------------------------------------

void run_width(const ExperimentSpec& spec, const fs::path& work,
               ExperimentReport& report) {
  for (uint32_t columns : spec.wide_columns) {
    uint64_t total = spec.wide_records * columns * 34ull;
    Dataset data = generate_wide(columns, total, spec.seed);

    std::vector<std::pair<std::string, Projection>> projections;
    projections.emplace_back("one-col", Projection{{"col0"}});
    Projection tenth;
    for (uint32_t i = 0; i < std::max<uint32_t>(1, columns / 10); ++i) {
      tenth.columns.push_back("col" + std::to_string(i));
    }
    projections.emplace_back("tenth", tenth);
    projections.emplace_back("all", Projection{});

    ScanOptions options;
    options.metering = {MeterMode::Transfer, spec.transfer_bytes};
    options.workers = spec.workers;

    DatasetWriteOptions cw;
    cw.split_target_bytes = spec.split_target_bytes;
    fs::path cif_dir = work / ("cif-" + std::to_string(columns));
    write_dataset(cif_dir, FileFormat::Cif, data.records, data.schema, cw);
    DatasetWriteOptions pw;
    pw.pax.rowgroup_target_bytes = 16ull << 20;
    fs::path pax_dir = work / ("pax-" + std::to_string(columns));
    write_dataset(pax_dir, FileFormat::Pax, data.records, data.schema, pw);

    for (const auto& [label, projection] : projections) {
      uint64_t useful =
          data.records.size() * 34ull *
          (projection.all() ? columns : projection.columns.size());
      for (auto [format, dir] :
           {std::pair<FileFormat, fs::path>{FileFormat::Cif, cif_dir},
            {FileFormat::Pax, pax_dir}}) {
        DatasetHandle handle = open_dataset(dir, format);
        JobResult r = timed_job(handle, checksum_job(projection), options,
                                spec.repetitions);
        ReportRow row = scan_row(
            label, std::string(format_name(format)),
            format == FileFormat::Cif ? "plain" : "16m", projection, options,
            r);
        row.extra["columns"] = std::to_string(columns);
        row.extra["useful_bytes"] = std::to_string(useful);
        row.extra["read_per_useful"] = fmt_double(
            static_cast<double>(r.metrics.bytes_read_total()) /
            static_cast<double>(useful));
        report.rows.push_back(std::move(row));
      }
    }
  }
}

// ---------------------------------------------------------------------------
// deser: scan bandwidth versus the fraction of each 1000-byte record holding
// typed data, for int64, double, and map payloads.
// ---------------------------------------------------------------------------

void run_deser(const ExperimentSpec& spec, const fs::path& work,
               ExperimentReport& report) {
  for (DeserKind kind : {DeserKind::Int, DeserKind::Double, DeserKind::Map}) {
    std::string kind_name = kind == DeserKind::Int      ? "int"
                            : kind == DeserKind::Double ? "double"
                                                        : "map";
    for (double f : spec.deser_fractions) {
      Dataset data =
          generate_deser_bench(spec.deser_records, f, kind, spec.seed);
      fs::path dir = work / ("deser-" + kind_name + "-" + fmt_double(f));
      write_dataset(dir, FileFormat::Seq, data.records, data.schema, {});
      DatasetHandle handle = open_dataset(dir, FileFormat::Seq);

      ScanOptions options;
      options.metering = {MeterMode::Exact, spec.transfer_bytes};
      options.workers = spec.workers;
      JobResult r = timed_job(handle, checksum_job(Projection{}), options,
                              spec.repetitions);
      double plain_bytes = static_cast<double>(spec.deser_records) * 1000.0;
      double bandwidth =
          plain_bytes / std::max(r.metrics.wall_time_s, 1e-9) / 1e6;
      ReportRow row = scan_row("deser", "seq", "-", Projection{}, options, r);
      row.case_label = kind_name + "-f" + fmt_double(f);
      row.extra["kind"] = kind_name;
      row.extra["typed_fraction"] = fmt_double(f);
      row.extra["bandwidth_mb_s"] = fmt_double(bandwidth);
      report.rows.push_back(std::move(row));
    }
  }
}

// ---------------------------------------------------------------------------
// placement: default vs column placement policy on a many-split dataset;
// static locality accounting plus a real scan with remote tagging.
// ---------------------------------------------------------------------------

double monte_carlo_colocated(const ClusterConfig& config,
                             uint32_t files_per_split, uint64_t trials) {
  uint64_t colocated = 0;
  for (uint64_t t = 0; t < trials; ++t) {
    ClusterConfig c = config;
    c.rng_seed = config.rng_seed + 1 + t;
    std::vector<SimFile> files;
    for (uint32_t i = 0; i < files_per_split; ++i) {
      files.push_back(SimFile{"trial/f" + std::to_string(i), 1});
    }
    BlockMap map = place(files, PlacementPolicy::Default, c);
    const std::vector<uint32_t>* common = nullptr;
    bool same = true;
    for (const auto& [_, blocks] : map.files) {
      for (const BlockPlacement& b : blocks) {
        if (!common) {
          common = &b.replicas;
        } else if (*common != b.replicas) {
          same = false;
        }
      }
    }
    if (same) ++colocated;
  }
  return static_cast<double>(colocated) / static_cast<double>(trials);
}

void run_placement(const ExperimentSpec& spec, const fs::path& work,
                   ExperimentReport& report) {
  Dataset data = generate_synthetic(spec.synthetic_records, spec.seed);
  DatasetWriteOptions w;
  w.split_target_bytes = spec.placement_split_bytes;
  fs::path dir = work / "cif";
  write_dataset(dir, FileFormat::Cif, data.records, data.schema, w);
  DatasetHandle handle = open_dataset(dir, FileFormat::Cif);

  ClusterConfig config;
  config.node_count = spec.nodes;
  config.map_slots_per_node = spec.slots;
  config.replication_factor = spec.replication;
  config.block_bytes = spec.block_bytes;
  config.rng_seed = spec.seed;

  Projection projection{{"str0", "map0"}};
  std::vector<SimFile> files = dataset_files(dir);

  for (PlacementPolicy policy :
       {PlacementPolicy::Default, PlacementPolicy::Cpp}) {
    BlockMap map = place(files, policy, config);
    auto assignment = schedule(handle.splits, projection, map, config);
    LocalityReport locality =
        simulate_scan(assignment, handle.splits, projection, map);

    // Real scan with per-block remote tagging.
    BlockLocalityMap merged;
    merged.block_bytes = config.block_bytes;
    for (const TaskAssignment& task : assignment) {
      BlockLocalityMap one = locality_for_task(
          task, handle.splits.at(task.split_index), projection, map);
      merged.per_file.insert(one.per_file.begin(), one.per_file.end());
    }
    ScanOptions options;
    options.metering = {MeterMode::Exact, spec.transfer_bytes};
    options.workers = spec.workers;
    options.locality = &merged;
    JobResult r = timed_job(handle, checksum_job(projection), options, 1);

    ReportRow row = scan_row(std::string(placement_name(policy)), "cif",
                             "plain", projection, options, r);
    row.extra["policy"] = std::string(placement_name(policy));
    row.extra["splits"] = std::to_string(handle.splits.size());
    row.extra["fraction_fully_colocated"] =
        fmt_double(locality.fraction_fully_colocated);
    row.extra["fraction_common_node"] =
        fmt_double(locality.fraction_common_node);
    row.extra["sim_local_bytes"] = std::to_string(locality.total_local_bytes);
    row.extra["sim_remote_bytes"] =
        std::to_string(locality.total_remote_bytes);
    if (policy == PlacementPolicy::Default) {
      uint32_t files_per_split = static_cast<uint32_t>(
          data.schema.field_count() + 1);  // columns + schema file
      row.extra["mc_colocated_fraction"] = fmt_double(monte_carlo_colocated(
          config, files_per_split, spec.monte_carlo_trials));
      row.extra["mc_trials"] = std::to_string(spec.monte_carlo_trials);
    }
    report.rows.push_back(std::move(row));
  }
}

// ---------------------------------------------------------------------------
// load-times: SEQ -> {CIF, CIF-SL, PAX} conversion times.
// ---------------------------------------------------------------------------

void run_load_times(const ExperimentSpec& spec, const fs::path& work,
                    ExperimentReport& report) {
  Dataset data = generate_synthetic(spec.synthetic_records, spec.seed);
  fs::path seq_dir = work / "seq";
  write_dataset(seq_dir, FileFormat::Seq, data.records, data.schema, {});

  struct Target {
    const char* label;
    FileFormat format;
    const char* plan;  // cif only
  };
  std::map<std::string, double> times;
  for (const Target& t : {Target{"cif", FileFormat::Cif, "plain"},
                          Target{"cif-sl", FileFormat::Cif, "skiplist"},
                          Target{"pax", FileFormat::Pax, nullptr}}) {
    DatasetWriteOptions w;
    w.split_target_bytes = spec.split_target_bytes;
    if (t.plan) w.cif_plan = ColumnLayoutPlan::parse(t.plan);
    double best = 0;
    uint64_t records = 0;
    for (uint32_t rep = 0; rep < std::max<uint32_t>(1, spec.repetitions);
         ++rep) {
      fs::path out = work / (std::string("load-") + t.label);
      fs::remove_all(out);
      LoadResult r = load_dataset(seq_dir, FileFormat::Seq, out, t.format, w);
      records = r.records;
      if (rep == 0 || r.load_time_s < best) best = r.load_time_s;
    }
    times[t.label] = best;

    ReportRow row;
    row.case_label = std::string("seq-to-") + t.label;
    row.format = format_name(t.format);
    row.layout = t.plan ? t.plan : "raw";
    row.projection = "*";
    row.mode = "-";
    row.metering = "-";
    row.records = records;
    row.metrics.load_time_s = best;
    report.rows.push_back(std::move(row));
  }
  for (ReportRow& row : report.rows) {
    if (times.count("cif") && times["cif"] > 0) {
      row.extra["ratio_vs_cif"] =
          fmt_double(row.metrics.load_time_s / times["cif"]);
    }
  }
}

}  // namespace

ExperimentSpec ExperimentSpec::from_json_file(const fs::path& file,
                                              const std::string& experiment) {
  ExperimentSpec spec;
  spec.experiment = experiment;
  if (file.empty()) return spec;
  std::ifstream in(file);
  if (!in) throw IoError("cannot open spec file: " + file.string());
  json j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  auto get = [&](const char* key, auto& field) {
    if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
  };
  get("seed", spec.seed);
  get("repetitions", spec.repetitions);
  get("workers", spec.workers);
  get("synthetic_records", spec.synthetic_records);
  get("crawl_records", spec.crawl_records);
  get("crawl_match_fraction", spec.crawl_match_fraction);
  get("crawl_content_bytes", spec.crawl_content_bytes);
  get("wide_records", spec.wide_records);
  get("deser_records", spec.deser_records);
  get("split_target_bytes", spec.split_target_bytes);
  get("transfer_bytes", spec.transfer_bytes);
  get("pax_rowgroup_bytes", spec.pax_rowgroup_bytes);
  get("selectivities_pct", spec.selectivities_pct);
  get("wide_columns", spec.wide_columns);
  get("deser_fractions", spec.deser_fractions);
  get("nodes", spec.nodes);
  get("slots", spec.slots);
  get("replication", spec.replication);
  get("block_bytes", spec.block_bytes);
  get("placement_split_bytes", spec.placement_split_bytes);
  get("monte_carlo_trials", spec.monte_carlo_trials);
  return spec;
}

std::string ExperimentSpec::to_json() const {
  json j;
  j["experiment"] = experiment;
  j["seed"] = seed;
  j["repetitions"] = repetitions;
  j["workers"] = workers;
  j["synthetic_records"] = synthetic_records;
  j["crawl_records"] = crawl_records;
  j["crawl_match_fraction"] = crawl_match_fraction;
  j["crawl_content_bytes"] = crawl_content_bytes;
  j["wide_records"] = wide_records;
  j["deser_records"] = deser_records;
  j["split_target_bytes"] = split_target_bytes;
  j["transfer_bytes"] = transfer_bytes;
  j["pax_rowgroup_bytes"] = pax_rowgroup_bytes;
  j["selectivities_pct"] = selectivities_pct;
  j["wide_columns"] = wide_columns;
  j["deser_fractions"] = deser_fractions;
  j["nodes"] = nodes;
  j["slots"] = slots;
  j["replication"] = replication;
  j["block_bytes"] = block_bytes;
  j["placement_split_bytes"] = placement_split_bytes;
  j["monte_carlo_trials"] = monte_carlo_trials;
  return j.dump(2);
}

std::string ExperimentReport::to_csv() const {
  std::ostringstream os;
  os << "experiment,case,format,layout,projection,mode,metering,records,"
        "bytes_read_local,bytes_read_remote,bytes_read_total,transfers,"
        "blocks_decompressed,values_deserialized_total,records_emitted,"
        "wall_time_s,load_time_s,extra\n";
  for (const ReportRow& r : rows) {
    os << spec.experiment << ',' << r.case_label << ',' << r.format << ','
       << r.layout << ',' << r.projection << ',' << r.mode << ','
       << r.metering << ',' << r.records << ',' << r.metrics.bytes_read_local
       << ',' << r.metrics.bytes_read_remote << ','
       << r.metrics.bytes_read_total() << ',' << r.metrics.transfers << ','
       << r.metrics.blocks_decompressed << ','
       << r.metrics.values_deserialized_total() << ','
       << r.metrics.records_emitted << ',' << fmt_double(r.metrics.wall_time_s)
       << ',' << fmt_double(r.metrics.load_time_s) << ',';
    bool first = true;
    for (const auto& [k, v] : r.extra) {
      if (!first) os << ';';
      first = false;
      os << k << '=' << v;
    }
    os << '\n';
  }
  return os.str();
}

std::string ExperimentReport::to_json() const {
  json j;
  j["spec"] = json::parse(spec.to_json());
  j["rows"] = json::array();
  for (const ReportRow& r : rows) {
    json row;
    row["case"] = r.case_label;
    row["format"] = r.format;
    row["layout"] = r.layout;
    row["projection"] = r.projection;
    row["mode"] = r.mode;
    row["metering"] = r.metering;
    row["records"] = r.records;
    row["bytes_read_local"] = r.metrics.bytes_read_local;
    row["bytes_read_remote"] = r.metrics.bytes_read_remote;
    row["bytes_read_total"] = r.metrics.bytes_read_total();
    row["transfers"] = r.metrics.transfers;
    row["blocks_decompressed"] = r.metrics.blocks_decompressed;
    row["values_deserialized"] = r.metrics.values_deserialized;
    row["records_emitted"] = r.metrics.records_emitted;
    row["wall_time_s"] = r.metrics.wall_time_s;
    row["load_time_s"] = r.metrics.load_time_s;
    row["extra"] = r.extra;
    j["rows"].push_back(std::move(row));
  }
  return j.dump(2);
}

ExperimentReport run_experiment(const ExperimentSpec& spec,
                                const fs::path& report_dir) {
  ExperimentReport report;
  report.spec = spec;
  fs::path work = report_dir / "work";
  fs::create_directories(work);

  if (spec.experiment == "scan-matrix") {
    run_scan_matrix(spec, work, report);
  } else if (spec.experiment == "selectivity") {
    run_selectivity(spec, work, report);
  } else if (spec.experiment == "rowgroup") {
    run_rowgroup(spec, work, report);
  } else if (spec.experiment == "width") {
    run_width(spec, work, report);
  } else if (spec.experiment == "deser") {
    run_deser(spec, work, report);
  } else if (spec.experiment == "placement") {
    run_placement(spec, work, report);
  } else if (spec.experiment == "load-times") {
    run_load_times(spec, work, report);
  } else {
    throw SchemaError("unknown experiment '" + spec.experiment + "'");
  }

  std::ofstream csv(report_dir / (spec.experiment + ".csv"),
                    std::ios::trunc);
  csv << report.to_csv();
  std::ofstream js(report_dir / (spec.experiment + ".json"), std::ios::trunc);
  js << report.to_json();
  return report;
}

}  // namespace colstore
