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

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "colstore/byte_io.hpp"
#include "colstore/codec.hpp"
#include "colstore/value.hpp"

namespace colstore {

enum class ColumnLayout : uint8_t {
  Plain = 0,
  SkipList = 1,
  CompressedBlocks = 2,
  Dcsl = 3,  // dictionary compressed skip list; MAP columns only
};

std::string_view layout_name(ColumnLayout layout);

/// Deterministic skip levels: a block is written before every record whose
/// index is a multiple of base; the block holds one u64 forward distance per
/// level base^h (h = heights..1) that divides the index. Defaults follow the
/// 10/100/1000 ladder. The ladder is part of the dataset's layout plan, not
/// the file header.
struct SkipLadder {
  uint32_t base = 10;
  uint32_t heights = 3;

  uint64_t span(uint32_t level) const {  // records jumped by `level`
    uint64_t s = 1;
    for (uint32_t i = 0; i < level; ++i) s *= base;
    return s;
  }
  bool operator==(const SkipLadder&) const = default;
};

struct ColumnLayoutSpec {
  ColumnLayout layout = ColumnLayout::Plain;
  SkipLadder ladder{};
  CodecId codec = CodecId::HighRatio;        // CompressedBlocks only
  uint64_t block_target_bytes = 256 * 1024;  // CompressedBlocks only
  uint64_t dcsl_block_records = 10000;       // Dcsl only
};

/// Per-dataset choice of column layouts: a default, an optional override for
/// MAP-typed fields, and per-field overrides by name.
struct ColumnLayoutPlan {
  ColumnLayoutSpec default_spec{};
  std::optional<ColumnLayoutSpec> map_spec;  // applied to MAP fields
  std::map<std::string, ColumnLayoutSpec> per_field;

  /// Resolves the spec for a field; throws SchemaError if it lands Dcsl on a
  /// non-map field.
  const ColumnLayoutSpec& resolve(const std::string& field,
                                  const FieldType& type) const;

  /// Parses the CLI syntax:
  ///   plain | skiplist | blocks:<raw|fast|high>:<bytes> | dcsl:<records>
  /// "dcsl:N" lays MAP columns as Dcsl and everything else as SkipList.
  static ColumnLayoutPlan parse(std::string_view text);
  std::string to_string() const;
};

/// 14-byte column file header: magic "CIF1", layout u8, codec u8,
/// record_count u64.
struct ColumnFileHeader {
  ColumnLayout layout = ColumnLayout::Plain;
  CodecId codec = CodecId::Raw;
  uint64_t record_count = 0;

  static constexpr uint64_t kBytes = 14;
  static ColumnFileHeader read(ByteInput& in);  // reads (and charges) 14 bytes
  std::vector<uint8_t> to_bytes() const;
};

/// Writes one column file (header + layout body). Returns bytes written.
uint64_t write_column_file(const std::filesystem::path& path,
                           std::span<const Value> values,
                           const FieldType& type,
                           const ColumnLayoutSpec& spec);

/// Skip-list body over pre-encoded records; used by the SkipList layout and
/// by the Dcsl block body. Exposed for byte-level tests.
void append_skiplist_body(std::vector<uint8_t>& out,
                          std::span<const std::vector<uint8_t>> encoded,
                          const SkipLadder& ladder);

/// Counter hooks a reader updates. Null pointers are replaced by internal
/// sinks so callers may pass {}.
struct ColumnReadCounters {
  uint64_t* values_deserialized = nullptr;
  uint64_t* blocks_decompressed = nullptr;
};

/// Forward cursor over one column file. position() is the paper's lastPos:
/// the index of the next unconsumed record. skip() advances without
/// deserializing (and, where the layout allows, without reading value bytes);
/// read_value() decodes the record at position() and advances by one.
class ColumnReader {
 public:
  virtual ~ColumnReader() = default;
  virtual uint64_t record_count() const = 0;
  virtual uint64_t position() const = 0;
  virtual void skip(uint64_t n) = 0;
  virtual Value read_value() = 0;
};

/// Opens a reader for any layout; reads the header (charging 14 bytes) and
/// dispatches on it. `ladder` must match the ladder used at write time for
/// SkipList/Dcsl files (the header intentionally does not store it).
std::unique_ptr<ColumnReader> open_column_reader(
    std::shared_ptr<MeteredSource> source, const FieldType& type,
    const SkipLadder& ladder = {}, ColumnReadCounters counters = {});

}  // namespace colstore
