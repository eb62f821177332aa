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

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "colstore/column_file.hpp"
#include "colstore/schema.hpp"
#include "colstore/value.hpp"

namespace colstore {

/// An ordered subset of schema field names; empty means every column.
struct Projection {
  std::vector<std::string> columns;

  bool all() const { return columns.empty(); }

  /// Ordinals of the projected fields, in projection order (schema order
  /// when empty). Throws SchemaError on unknown or duplicate names.
  std::vector<size_t> resolve(const Schema& schema) const;

  static Projection parse_csv(std::string_view csv);  // "a,b,c"
  std::string to_string() const;                      // "*" when empty
};

/// Whether projected fields are deserialized up front on iteration (Eager) or
/// deferred until get() is called on them (Lazy).
enum class ScanMode { Eager, Lazy };

std::string_view scan_mode_name(ScanMode mode);

/// One record as seen by a job's map function. get(name) is the only access
/// path; lazily materialized implementations deserialize on first access.
class RecordView {
 public:
  virtual ~RecordView() = default;
  virtual const Value& get(std::string_view field) = 0;
};

/// Forward iteration over records of one split.
///
///   while (stream.next()) { use(stream.record()); }
///
/// The view returned by record() is valid until the next call to next().
class RecordStream {
 public:
  virtual ~RecordStream() = default;
  virtual bool next() = 0;
  virtual RecordView& record() = 0;
};

/// Drains a stream, materializing `fields` of every record in order.
std::vector<Record> materialize_all(RecordStream& stream,
                                    const std::vector<std::string>& fields);

/// RecordView over an already materialized Record. get() of a field the
/// record does not carry raises SchemaError, never a silent default.
class MaterializedView : public RecordView {
 public:
  Record& rec() { return record_; }
  const Value& get(std::string_view field) override {
    return record_.get(field);
  }

 private:
  Record record_;
};

// ---------------------------------------------------------------------------
// Scan context: metering configuration, metrics sink, and source opening.
// One context per worker; not shared across threads.
// ---------------------------------------------------------------------------

/// Per-file block locality, produced by the cluster simulator. Files absent
/// from the map are read as local.
struct BlockLocalityMap {
  uint64_t block_bytes = 0;
  std::map<std::string, std::vector<bool>> per_file;  // normalized path
};

struct ScanContext {
  MeterConfig metering{};
  SkipLadder ladder{};
  ScanMetrics* metrics = nullptr;
  const BlockLocalityMap* locality = nullptr;
  std::vector<std::string> opened_files;

  /// Opens a file as a metered source, records the open, and applies any
  /// locality tagging.
  std::shared_ptr<MeteredSource> open(const std::filesystem::path& path);

  /// Pointer into metrics->values_deserialized[column] (or a private sink
  /// when metrics is null).
  uint64_t* deser_counter(const std::string& column);
  uint64_t* blocks_counter();

 private:
  std::map<std::string, uint64_t> own_deser_;
  uint64_t own_blocks_ = 0;
};

}  // namespace colstore
