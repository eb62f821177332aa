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

#include "colstore/column_file.hpp"
#include "colstore/record_stream.hpp"
#include "colstore/schema.hpp"

namespace colstore {

// A dataset directory holds split-directories s0, s1, ... Each split holds a
// `schema` file plus one column file per field, named c<ordinal>_<name>.
// Splits are horizontal partitions in arrival order; row i of every column
// file of a split belongs to input record i of that split.

std::string column_file_name(size_t ordinal, const std::string& field);
std::filesystem::path split_dir_name(const std::filesystem::path& dataset,
                                     uint32_t index);

struct SplitInfo {
  std::filesystem::path dir;
  uint32_t index = 0;
  Schema schema;
  uint64_t record_count = 0;

  std::filesystem::path column_path(size_t ordinal) const {
    return dir / column_file_name(ordinal, schema.field(ordinal).name);
  }
};

/// Streams records into split-directories. A split closes once the sum of
/// its buffered plain-encoded column bytes reaches split_target_bytes
/// (so every split except possibly the last holds at least the target).
class CofWriter {
 public:
  static constexpr uint64_t kMinSplitTarget = 1 << 20;

  CofWriter(std::filesystem::path dataset_dir, Schema schema,
            uint64_t split_target_bytes, ColumnLayoutPlan plan);
  void append(const Record& record);
  std::vector<SplitInfo> finish();

 private:
  void flush_split(bool force_empty);

  std::filesystem::path dataset_;
  Schema schema_;
  uint64_t target_;
  ColumnLayoutPlan plan_;
  std::vector<std::vector<Value>> buffered_;  // per column
  uint64_t buffered_plain_ = 0;
  uint32_t next_index_ = 0;
  std::vector<SplitInfo> splits_;
  bool finished_ = false;
};

std::vector<SplitInfo> cof_write(std::span<const Record> records,
                                 const Schema& schema,
                                 const std::filesystem::path& dataset,
                                 uint64_t split_target_bytes,
                                 const ColumnLayoutPlan& plan = {});

/// Enumerates split-directories in ascending index order, validating the
/// structure: dense indices from 0, exactly one column file per schema field
/// plus the schema file, all column files agreeing on record_count. An empty
/// dataset directory yields an empty list. `bytes_read` (optional)
/// accumulates the bytes this validation read from existing column files
/// (header bytes only, by construction).
std::vector<SplitInfo> cif_splits(const std::filesystem::path& dataset,
                                  uint64_t* bytes_read = nullptr);

/// Opens one split for scanning. Only the projected columns' files are
/// opened; Eager mode deserializes every projected value as records are
/// iterated, Lazy mode defers each field to the first get() on it.
std::unique_ptr<RecordStream> cif_open(const SplitInfo& split,
                                       const Projection& projection,
                                       ScanMode mode, ScanContext& ctx);

struct AddColumnStats {
  uint64_t files_created = 0;
  uint64_t schema_files_rewritten = 0;
  uint64_t existing_bytes_read = 0;  // from existing column files
};

/// Adds a column to every split-directory by writing one new file per split
/// and rewriting the schema files; existing column files are neither read
/// (beyond their 14-byte headers, for record-count validation) nor
/// rewritten. Value counts are validated for every split before anything is
/// staged; files go to temporary names and are renamed at the end, so a
/// failed call leaves the dataset unchanged.
Schema add_column(const std::filesystem::path& dataset,
                  const std::string& name, const FieldType& type,
                  std::span<const std::vector<Value>> values_per_split,
                  const ColumnLayoutSpec& spec = {},
                  AddColumnStats* stats = nullptr);

}  // namespace colstore
