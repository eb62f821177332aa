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

#pragma once

#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "colstore/column_format.hpp"
#include "colstore/metrics.hpp"
#include "colstore/record_stream.hpp"
#include "colstore/row_formats.hpp"

namespace colstore {

enum class FileFormat { Txt, Seq, Pax, Cif };

FileFormat format_from_name(std::string_view name);
std::string_view format_name(FileFormat format);

// A dataset is always a directory. CIF datasets hold split-directories
// s0, s1, ...; row formats hold a `schema` file and a single `data` file.

struct DatasetWriteOptions {
  SeqOptions seq{};
  PaxConfig pax{};
  ColumnLayoutPlan cif_plan{};
  uint64_t split_target_bytes = 64ull << 20;
};

uint64_t write_dataset(const std::filesystem::path& dir, FileFormat format,
                       std::span<const Record> records, const Schema& schema,
                       const DatasetWriteOptions& options = {});

struct DatasetHandle {
  FileFormat format = FileFormat::Seq;
  std::filesystem::path root;
  Schema schema;
  std::vector<SplitInfo> splits;    // Cif only
  std::filesystem::path data_file;  // row formats only

  size_t split_count() const {
    return format == FileFormat::Cif ? splits.size() : 1;
  }
};

DatasetHandle open_dataset(const std::filesystem::path& dir,
                           FileFormat format);

/// Opens one split of the dataset for scanning (row formats are one split).
std::unique_ptr<RecordStream> open_split(const DatasetHandle& dataset,
                                         size_t split_index,
                                         const Projection& projection,
                                         ScanMode mode, ScanContext& ctx);

/// Reads the whole dataset back in schema order (round-trip helper).
std::vector<Record> read_all(const DatasetHandle& dataset);

// ---------------------------------------------------------------------------
// Built-in jobs
// ---------------------------------------------------------------------------

enum class JobKind {
  DistinctValue,  // distinct rendered target values over matching records
  MapAggregate,   // sum of int64 target (map key or int column) over matches
  FullChecksum,   // structural checksum of every projected field
};

JobKind job_kind_from_name(std::string_view name);

struct JobSpec {
  JobKind kind = JobKind::FullChecksum;
  std::string predicate_column;     // string-typed; empty => match all
  std::string predicate_substring;  // substring match
  std::string target_column;
  std::string target_map_key;  // required when the target is map-typed
  Projection projection;       // empty => derived from the job

  Projection effective_projection(const Schema& schema) const;
};

struct ScanOptions {
  ScanMode mode = ScanMode::Eager;
  MeterConfig metering{};
  SkipLadder ladder{};
  uint32_t workers = 1;
  const BlockLocalityMap* locality = nullptr;
};

struct JobResult {
  std::vector<std::string> output;  // deterministic; distinct values sorted
  uint64_t matches = 0;
  uint64_t records_scanned = 0;
  ScanMetrics metrics;
};

/// Runs a job over every split (optionally with a worker pool; each worker
/// owns private metrics, merged in split order afterwards). Output and
/// counters are independent of worker count.
JobResult run_job(const DatasetHandle& dataset, const JobSpec& job,
                  const ScanOptions& options = {});

struct LoadResult {
  uint64_t records = 0;
  double load_time_s = 0.0;
};

/// Converts a dataset between formats, losslessly; load_time covers read,
/// conversion, and write.
LoadResult load_dataset(const std::filesystem::path& in, FileFormat in_format,
                        const std::filesystem::path& out,
                        FileFormat out_format,
                        const DatasetWriteOptions& options = {});

}  // namespace colstore
