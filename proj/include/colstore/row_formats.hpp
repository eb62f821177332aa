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

#include "colstore/record_stream.hpp"
#include "colstore/schema.hpp"

namespace colstore {

// Baseline formats the column store is compared against. None embeds the
// schema; it travels as a sibling `schema` file (see dataset helpers in
// jobs.hpp). All integers little-endian.

// --------------------------------- TXT ------------------------------------
// One record per line, fields tab-separated in schema order. Maps render as
// key=value pairs joined by ';', arrays join elements with ','. Strings
// containing tab, newline, CR, backslash, ';' or '=' are rejected rather
// than escaped (plus ',' inside array elements); element types of arrays and
// maps must be primitive. Readers parse every field regardless of the
// projection: this baseline eliminates neither I/O nor CPU.

class TxtWriter {
 public:
  TxtWriter(const std::filesystem::path& file, const Schema& schema);
  void append(const Record& record);
  uint64_t finish();  // record count

 private:
  const Schema& schema_;
  std::ofstream out_;
  std::filesystem::path path_;
  std::string line_;
  uint64_t records_ = 0;
};

uint64_t write_txt(std::span<const Record> records, const Schema& schema,
                   const std::filesystem::path& file);

std::unique_ptr<RecordStream> open_txt(const std::filesystem::path& file,
                                       const Schema& schema,
                                       const Projection& projection,
                                       ScanContext& ctx);

// --------------------------------- SEQ ------------------------------------
// Magic "SEQ0": repeated [u32 record byte length + plain-encoded fields].
// Magic "SEQB": repeated blocks [u32 record_count + u32 compressed_size +
// u8 codec + compressed concatenation of record encodings]; a block closes
// once its uncompressed size reaches block_target_bytes. Readers deserialize
// every column of every record; the variant is auto-detected from the magic.

enum class SeqVariant : uint8_t { Uncompressed, Block };

struct SeqOptions {
  SeqVariant variant = SeqVariant::Uncompressed;
  uint64_t block_target_bytes = 1 << 20;  // Block only; >= 4 KiB
  CodecId codec = CodecId::HighRatio;     // Block only
};

class SeqWriter {
 public:
  SeqWriter(const std::filesystem::path& file, const Schema& schema,
            const SeqOptions& options = {});
  void append(const Record& record);
  uint64_t finish();  // record count

 private:
  void flush_block();

  const Schema& schema_;
  SeqOptions options_;
  FileSink sink_;
  std::vector<uint8_t> encoded_;
  std::vector<uint8_t> block_;
  uint32_t block_records_ = 0;
  uint64_t records_ = 0;
};

uint64_t write_seq(std::span<const Record> records, const Schema& schema,
                   const std::filesystem::path& file,
                   const SeqOptions& options = {});

std::unique_ptr<RecordStream> open_seq(const std::filesystem::path& file,
                                       const Schema& schema,
                                       const Projection& projection,
                                       ScanContext& ctx);

// --------------------------------- PAX ------------------------------------
// Magic "PAX0" + u8 codec, then row groups:
//   sync marker (16 bytes "COLGROVE-PAXSYNC")
//   u32 row_count, u32 column_count
//   u64 column_lengths[column_count]           (compressed lengths)
//   u64 uncompressed_lengths[column_count]     (only when codec != Raw)
//   column segments back to back, each row_count plain-encoded values
// A group closes when its buffered plain-encoded size reaches
// rowgroup_target_bytes. Readers seek past unprojected segments.

inline constexpr char kPaxSyncMarker[17] = "COLGROVE-PAXSYNC";

struct PaxConfig {
  uint64_t rowgroup_target_bytes = 4 << 20;  // >= 64 KiB
  CodecId codec = CodecId::Raw;              // Raw or a block codec
};

class PaxWriter {
 public:
  PaxWriter(const std::filesystem::path& file, const Schema& schema,
            const PaxConfig& config = {});
  void append(const Record& record);
  uint64_t finish();  // row-group count

 private:
  void flush_group();

  const Schema& schema_;
  PaxConfig config_;
  FileSink sink_;
  std::vector<std::vector<uint8_t>> segments_;
  uint64_t buffered_plain_ = 0;
  uint32_t buffered_rows_ = 0;
  uint64_t groups_ = 0;
};

/// Returns the number of row groups written.
uint64_t write_pax(std::span<const Record> records, const Schema& schema,
                   const std::filesystem::path& file,
                   const PaxConfig& config = {});

std::unique_ptr<RecordStream> open_pax(const std::filesystem::path& file,
                                       const Schema& schema,
                                       const Projection& projection,
                                       ScanContext& ctx);

/// Counts row groups by walking group metadata (no data reads).
uint64_t pax_rowgroup_count(const std::filesystem::path& file);

}  // namespace colstore
