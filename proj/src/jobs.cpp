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

#include "colstore/jobs.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <mutex>
#include <set>
#include <thread>

#include "colstore/encoding.hpp"

namespace colstore {
namespace fs = std::filesystem;

namespace {

constexpr uint64_t kFnvOffset = 1469598103934665603ull;
constexpr uint64_t kFnvPrime = 1099511628211ull;

uint64_t fnv1a(std::span<const uint8_t> data, uint64_t h) {
  for (uint8_t b : data) {
    h ^= b;
    h *= kFnvPrime;
  }
  return h;
}

std::string render_scalar(const Value& v) {
  char buf[40];
  switch (v.kind()) {
    case FieldKind::String:
      return v.as_string();
    case FieldKind::Int64: {
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v.as_int64());
      return std::string(buf, p);
    }
    case FieldKind::Double: {
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v.as_double());
      return std::string(buf, p);
    }
    default:
      throw SchemaError("job target must be a scalar or a map entry, got " +
                        std::string(kind_name(v.kind())));
  }
}

// Per-split job state, merged in split order after workers finish.
struct Partial {
  std::set<std::string> distinct;
  int64_t sum = 0;
  uint64_t matches = 0;
  uint64_t records = 0;
  uint64_t checksum = kFnvOffset;
};

struct ResolvedJob {
  const JobSpec* spec = nullptr;
  Projection projection;
  std::vector<std::string> checksum_fields;  // FullChecksum access order
  std::vector<FieldType> checksum_types;
  FieldType target_type = FieldType::int64();
  bool has_predicate = false;
};

ResolvedJob resolve_job(const JobSpec& job, const Schema& schema) {
  ResolvedJob r;
  r.spec = &job;
  r.projection = job.effective_projection(schema);
  r.has_predicate = !job.predicate_column.empty();
  if (r.has_predicate) {
    auto idx = schema.index_of(job.predicate_column);
    if (!idx) {
      throw SchemaError("predicate column '" + job.predicate_column +
                        "' not in schema");
    }
    if (schema.field(*idx).type.kind() != FieldKind::String) {
      throw SchemaError("predicate column must be string-typed");
    }
  }
  if (job.kind != JobKind::FullChecksum) {
    auto idx = schema.index_of(job.target_column);
    if (!idx) {
      throw SchemaError("target column '" + job.target_column +
                        "' not in schema");
    }
    r.target_type = schema.field(*idx).type;
    if (r.target_type.kind() == FieldKind::Map && job.target_map_key.empty()) {
      throw SchemaError("map-typed target requires a map key");
    }
  } else {
    for (size_t ord : r.projection.resolve(schema)) {
      r.checksum_fields.push_back(schema.field(ord).name);
      r.checksum_types.push_back(schema.field(ord).type);
    }
  }
  return r;
}

void apply_job(const ResolvedJob& job, RecordView& view, Partial& p) {
  const JobSpec& spec = *job.spec;
  ++p.records;
  if (spec.kind == JobKind::FullChecksum) {
    std::vector<uint8_t> buf;
    for (size_t i = 0; i < job.checksum_fields.size(); ++i) {
      buf.clear();
      encode_value(view.get(job.checksum_fields[i]), job.checksum_types[i],
                   buf);
      p.checksum = fnv1a(buf, p.checksum);
    }
    return;
  }
  if (job.has_predicate) {
    const std::string& s = view.get(spec.predicate_column).as_string();
    if (s.find(spec.predicate_substring) == std::string::npos) return;
  }
  ++p.matches;
  const Value& target = view.get(spec.target_column);
  const Value* v = &target;
  if (job.target_type.kind() == FieldKind::Map) {
    v = target.as_map().find(spec.target_map_key);
    if (!v) return;  // records without the key contribute nothing
  }
  if (spec.kind == JobKind::DistinctValue) {
    p.distinct.insert(render_scalar(*v));
  } else {
    if (v->kind() != FieldKind::Int64) {
      throw SchemaError("aggregate target must be int64-valued");
    }
    p.sum += v->as_int64();
  }
}

}  // namespace

FileFormat format_from_name(std::string_view name) {
  if (name == "txt") return FileFormat::Txt;
  if (name == "seq") return FileFormat::Seq;
  if (name == "pax") return FileFormat::Pax;
  if (name == "cif") return FileFormat::Cif;
  throw SchemaError("unknown format '" + std::string(name) +
                    "' (expected txt|seq|pax|cif)");
}

std::string_view format_name(FileFormat format) {
  switch (format) {
    case FileFormat::Txt:
      return "txt";
    case FileFormat::Seq:
      return "seq";
    case FileFormat::Pax:
      return "pax";
    case FileFormat::Cif:
      return "cif";
  }
  return "?";
}

JobKind job_kind_from_name(std::string_view name) {
  if (name == "distinct") return JobKind::DistinctValue;
  if (name == "aggregate") return JobKind::MapAggregate;
  if (name == "checksum") return JobKind::FullChecksum;
  throw SchemaError("unknown job '" + std::string(name) +
                    "' (expected distinct|aggregate|checksum)");
}

Projection JobSpec::effective_projection(const Schema& schema) const {
  if (!projection.columns.empty()) return projection;
  if (kind == JobKind::FullChecksum) return Projection{};  // all columns
  Projection p;
  if (!predicate_column.empty()) p.columns.push_back(predicate_column);
  if (target_column != predicate_column) p.columns.push_back(target_column);
  p.resolve(schema);  // validation
  return p;
}

uint64_t write_dataset(const fs::path& dir, FileFormat format,
                       std::span<const Record> records, const Schema& schema,
                       const DatasetWriteOptions& options) {
  fs::create_directories(dir);
  if (format == FileFormat::Cif) {
    cof_write(records, schema, dir, options.split_target_bytes,
              options.cif_plan);
    return records.size();
  }
  write_schema_file(dir / "schema", schema);
  switch (format) {
    case FileFormat::Txt:
      return write_txt(records, schema, dir / "data");
    case FileFormat::Seq:
      return write_seq(records, schema, dir / "data", options.seq);
    case FileFormat::Pax:
      write_pax(records, schema, dir / "data", options.pax);
      return records.size();
    default:
      throw SchemaError("unreachable");
  }
}

DatasetHandle open_dataset(const fs::path& dir, FileFormat format) {
  DatasetHandle h;
  h.format = format;
  h.root = dir;
  if (format == FileFormat::Cif) {
    h.splits = cif_splits(dir);
    if (h.splits.empty()) {
      throw CorruptionError("CIF dataset has no splits: " + dir.string());
    }
    h.schema = h.splits.front().schema;
    return h;
  }
  h.data_file = dir / "data";
  if (!fs::is_regular_file(h.data_file)) {
    throw IoError("dataset data file not found: " + h.data_file.string());
  }
  h.schema = read_schema_file(dir / "schema");
  return h;
}

std::unique_ptr<RecordStream> open_split(const DatasetHandle& dataset,
                                         size_t split_index,
                                         const Projection& projection,
                                         ScanMode mode, ScanContext& ctx) {
  switch (dataset.format) {
    case FileFormat::Cif:
      return cif_open(dataset.splits.at(split_index), projection, mode, ctx);
    case FileFormat::Txt:
      return open_txt(dataset.data_file, dataset.schema, projection, ctx);
    case FileFormat::Seq:
      return open_seq(dataset.data_file, dataset.schema, projection, ctx);
    case FileFormat::Pax:
      return open_pax(dataset.data_file, dataset.schema, projection, ctx);
  }
  throw SchemaError("unreachable");
}

std::vector<Record> read_all(const DatasetHandle& dataset) {
  std::vector<std::string> fields;
  for (const Field& f : dataset.schema.fields()) fields.push_back(f.name);
  std::vector<Record> out;
  for (size_t i = 0; i < dataset.split_count(); ++i) {
    ScanContext ctx;
    auto stream = open_split(dataset, i, Projection{}, ScanMode::Eager, ctx);
    std::vector<Record> part = materialize_all(*stream, fields);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

JobResult run_job(const DatasetHandle& dataset, const JobSpec& job,
                  const ScanOptions& options) {
  ResolvedJob resolved = resolve_job(job, dataset.schema);
  const size_t n_splits = dataset.split_count();
  std::vector<Partial> partials(n_splits);

  uint32_t workers = std::max<uint32_t>(1, options.workers);
  workers = static_cast<uint32_t>(
      std::min<size_t>(workers, std::max<size_t>(n_splits, 1)));
  std::vector<ScanMetrics> worker_metrics(workers);

  auto started = std::chrono::steady_clock::now();
  std::atomic<size_t> next_split{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&](uint32_t worker_id) {
    try {
      while (!failed.load(std::memory_order_relaxed)) {
        size_t i = next_split.fetch_add(1);
        if (i >= n_splits) break;
        ScanContext ctx;
        ctx.metering = options.metering;
        ctx.ladder = options.ladder;
        ctx.metrics = &worker_metrics[worker_id];
        ctx.locality = options.locality;
        auto stream =
            open_split(dataset, i, resolved.projection, options.mode, ctx);
        while (stream->next()) {
          apply_job(resolved, stream->record(), partials[i]);
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      failed.store(true);
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (uint32_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (std::thread& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  JobResult result;
  for (const ScanMetrics& m : worker_metrics) result.metrics.merge(m);
  result.metrics.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();

  // Reduce in split order so output is independent of worker scheduling.
  std::set<std::string> distinct;
  int64_t sum = 0;
  uint64_t checksum = kFnvOffset;
  for (const Partial& p : partials) {
    distinct.insert(p.distinct.begin(), p.distinct.end());
    sum += p.sum;
    result.matches += p.matches;
    result.records_scanned += p.records;
    uint8_t buf[8];
    for (int i = 0; i < 8; ++i) {
      buf[i] = static_cast<uint8_t>(p.checksum >> (8 * i));
    }
    checksum = fnv1a(buf, checksum);
  }
  switch (job.kind) {
    case JobKind::DistinctValue:
      result.output.assign(distinct.begin(), distinct.end());
      break;
    case JobKind::MapAggregate:
      result.output.push_back("matches=" + std::to_string(result.matches));
      result.output.push_back("sum=" + std::to_string(sum));
      break;
    case JobKind::FullChecksum: {
      result.output.push_back("records=" +
                              std::to_string(result.records_scanned));
      char buf[19];
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, checksum, 16);
      result.output.push_back("checksum=0x" + std::string(buf, p));
      break;
    }
  }
  result.metrics.records_emitted = job.kind == JobKind::FullChecksum
                                       ? result.records_scanned
                                       : result.matches;
  return result;
}

LoadResult load_dataset(const fs::path& in, FileFormat in_format,
                        const fs::path& out, FileFormat out_format,
                        const DatasetWriteOptions& options) {
  auto started = std::chrono::steady_clock::now();
  DatasetHandle source = open_dataset(in, in_format);
  std::vector<std::string> fields;
  for (const Field& f : source.schema.fields()) fields.push_back(f.name);

  // All output formats share the same streaming pipeline: records flow
  // split by split from the reader into a buffering writer.
  std::unique_ptr<CofWriter> cof;
  std::unique_ptr<TxtWriter> txt;
  std::unique_ptr<SeqWriter> seq;
  std::unique_ptr<PaxWriter> pax;
  fs::create_directories(out);
  switch (out_format) {
    case FileFormat::Cif:
      cof = std::make_unique<CofWriter>(out, source.schema,
                                        options.split_target_bytes,
                                        options.cif_plan);
      break;
    case FileFormat::Txt:
      write_schema_file(out / "schema", source.schema);
      txt = std::make_unique<TxtWriter>(out / "data", source.schema);
      break;
    case FileFormat::Seq:
      write_schema_file(out / "schema", source.schema);
      seq = std::make_unique<SeqWriter>(out / "data", source.schema,
                                        options.seq);
      break;
    case FileFormat::Pax:
      write_schema_file(out / "schema", source.schema);
      pax = std::make_unique<PaxWriter>(out / "data", source.schema,
                                        options.pax);
      break;
  }

  LoadResult result;
  Record r;
  for (size_t i = 0; i < source.split_count(); ++i) {
    ScanContext ctx;
    auto stream = open_split(source, i, Projection{}, ScanMode::Eager, ctx);
    while (stream->next()) {
      r.fields.clear();
      for (const std::string& f : fields) {
        r.fields.emplace_back(f, stream->record().get(f));
      }
      if (cof) cof->append(r);
      if (txt) txt->append(r);
      if (seq) seq->append(r);
      if (pax) pax->append(r);
      ++result.records;
    }
  }
  if (cof) cof->finish();
  if (txt) txt->finish();
  if (seq) seq->finish();
  if (pax) pax->finish();

  result.load_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
          .count();
  return result;
}

}  // namespace colstore
