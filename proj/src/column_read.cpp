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

#include <algorithm>
#include <cassert>

#include "colstore/column_file.hpp"
#include "colstore/encoding.hpp"

namespace colstore {
namespace {

uint32_t levels_present(const SkipLadder& ladder, uint64_t index) {
  uint32_t n = 0;
  for (uint32_t h = ladder.heights; h >= 1; --h) {
    if (index % ladder.span(h) == 0) ++n;
  }
  return n;
}

class ReaderBase : public ColumnReader {
 public:
  ReaderBase(std::shared_ptr<MeteredSource> source, const FieldType& type,
             uint64_t record_count, ColumnReadCounters counters)
      : source_(std::move(source)),
        type_(type),
        count_(record_count),
        counters_(counters) {
    if (!counters_.values_deserialized) {
      counters_.values_deserialized = &own_deserialized_;
    }
    if (!counters_.blocks_decompressed) {
      counters_.blocks_decompressed = &own_decompressed_;
    }
  }

  uint64_t record_count() const override { return count_; }
  uint64_t position() const override { return pos_; }

 protected:
  void check_skip(uint64_t n) const {
    if (pos_ + n > count_) {
      throw InvariantError("skip past end of column (" + std::to_string(pos_) +
                           " + " + std::to_string(n) + " > " +
                           std::to_string(count_) + ")");
    }
  }
  void check_read() const {
    if (pos_ >= count_) {
      throw InvariantError("column cursor exhausted");
    }
  }

  std::shared_ptr<MeteredSource> source_;
  FieldType type_;
  uint64_t count_;
  uint64_t pos_ = 0;
  ColumnReadCounters counters_;

 private:
  uint64_t own_deserialized_ = 0;
  uint64_t own_decompressed_ = 0;
};

// ---------------------------------------------------------------------------
// Plain: back-to-back encodings. Skipping walks record lengths one by one.
// ---------------------------------------------------------------------------

class PlainColumnReader final : public ReaderBase {
 public:
  using ReaderBase::ReaderBase;

  void skip(uint64_t n) override {
    check_skip(n);
    for (uint64_t i = 0; i < n; ++i) {
      offset_ += skip_value(*source_, offset_, type_);
    }
    pos_ += n;
  }

  Value read_value() override {
    check_read();
    uint64_t consumed = 0;
    Value v = decode_value(*source_, offset_, type_, consumed);
    offset_ += consumed;
    ++pos_;
    ++*counters_.values_deserialized;
    return v;
  }

 private:
  uint64_t offset_ = ColumnFileHeader::kBytes;
};

// ---------------------------------------------------------------------------
// Skip-list navigation shared by the SkipList layout and Dcsl block bodies.
// Offset invariant: when pos is a multiple of base (and pos < count), offset
// points at the skip block preceding record pos; otherwise at the record.
// ---------------------------------------------------------------------------

struct SkipNav {
  ByteInput* in = nullptr;
  SkipLadder ladder{};
  uint64_t count = 0;
  uint64_t pos = 0;
  uint64_t offset = 0;

  bool at_block() const { return pos % ladder.base == 0 && pos < count; }

  // Largest ladder hop with span <= n available at the current position.
  // Returns the hop span, or 0 when only value-level skipping applies.
  uint64_t try_hop(uint64_t n) {
    if (!at_block() || n < ladder.base) return 0;
    uint32_t present_above = 0;
    for (uint32_t h = ladder.heights; h >= 1; --h) {
      uint64_t span = ladder.span(h);
      if (pos % span != 0) continue;
      if (span <= n) {
        uint64_t dist = in->read_u64(offset + 8ull * present_above);
        offset += 8ull * levels_present(ladder, pos) + dist;
        pos = std::min(pos + span, count);
        return span;
      }
      ++present_above;
    }
    return 0;
  }

  void step_past_block() {
    if (at_block()) offset += 8ull * levels_present(ladder, pos);
  }
};

class SkipListColumnReader final : public ReaderBase {
 public:
  SkipListColumnReader(std::shared_ptr<MeteredSource> source,
                       const FieldType& type, uint64_t record_count,
                       const SkipLadder& ladder, ColumnReadCounters counters)
      : ReaderBase(std::move(source), type, record_count, counters) {
    nav_.in = source_.get();
    nav_.ladder = ladder;
    nav_.count = record_count;
    nav_.offset = ColumnFileHeader::kBytes;
  }

  void skip(uint64_t n) override {
    check_skip(n);
    uint64_t target = pos_ + n;
    while (nav_.pos < target) {
      if (nav_.try_hop(target - nav_.pos) != 0) continue;
      nav_.step_past_block();
      nav_.offset += skip_value(*source_, nav_.offset, type_);
      ++nav_.pos;
    }
    pos_ = nav_.pos;
  }

  Value read_value() override {
    check_read();
    nav_.step_past_block();
    uint64_t consumed = 0;
    Value v = decode_value(*source_, nav_.offset, type_, consumed);
    nav_.offset += consumed;
    ++nav_.pos;
    pos_ = nav_.pos;
    ++*counters_.values_deserialized;
    return v;
  }

 private:
  SkipNav nav_;
};

// ---------------------------------------------------------------------------
// Compressed blocks: [u32 records, u32 uncompressed, u32 compressed, u8
// codec, payload]. Crossing a block costs a 13-byte header read; only blocks
// a value is actually read from get decompressed, each at most once.
// ---------------------------------------------------------------------------

class CompressedBlocksReader final : public ReaderBase {
 public:
  using ReaderBase::ReaderBase;

  void skip(uint64_t n) override {
    check_skip(n);
    uint64_t target = pos_ + n;
    while (pos_ < target) {
      enter_block();
      if (block_first_ + block_records_ <= target) {
        pos_ = block_first_ + block_records_;
        continue;  // whole remainder crossed; payload untouched
      }
      ensure_decompressed();
      SpanInput span(buffer_);
      while (pos_ < target) {
        buffer_off_ += skip_value(span, buffer_off_, type_);
        ++pos_;
      }
    }
  }

  Value read_value() override {
    check_read();
    enter_block();
    ensure_decompressed();
    SpanInput span(buffer_);
    uint64_t consumed = 0;
    Value v = decode_value(span, buffer_off_, type_, consumed);
    buffer_off_ += consumed;
    ++pos_;
    ++*counters_.values_deserialized;
    return v;
  }

 private:
  // Positions the block metadata so that pos_ falls inside the current block.
  void enter_block() {
    while (true) {
      if (!meta_valid_) {
        block_records_ = source_->read_u32(header_off_);
        uncompressed_size_ = source_->read_u32(header_off_ + 4);
        compressed_size_ = source_->read_u32(header_off_ + 8);
        codec_ = codec_from_u8(source_->read_u8(header_off_ + 12));
        block_first_ = next_first_;
        if (block_records_ == 0) {
          throw CorruptionError("compressed block with zero records");
        }
        meta_valid_ = true;
      }
      if (pos_ < block_first_ + block_records_) return;
      next_first_ = block_first_ + block_records_;
      header_off_ += kHeaderBytes + compressed_size_;
      meta_valid_ = false;
      decompressed_ = false;
      buffer_.clear();
    }
  }

  void ensure_decompressed() {
    if (decompressed_) return;
    assert(pos_ == block_first_);
    std::vector<uint8_t> payload =
        source_->read_bytes(header_off_ + kHeaderBytes, compressed_size_);
    buffer_ = codec_decompress(codec_, payload, uncompressed_size_);
    decompressed_ = true;
    buffer_off_ = 0;
    ++*counters_.blocks_decompressed;
  }

  static constexpr uint64_t kHeaderBytes = 13;
  uint64_t header_off_ = ColumnFileHeader::kBytes;
  uint64_t next_first_ = 0;
  bool meta_valid_ = false;
  uint64_t block_first_ = 0;
  uint32_t block_records_ = 0;
  uint32_t uncompressed_size_ = 0;
  uint32_t compressed_size_ = 0;
  CodecId codec_ = CodecId::Raw;
  bool decompressed_ = false;
  std::vector<uint8_t> buffer_;
  uint64_t buffer_off_ = 0;
};

// ---------------------------------------------------------------------------
// Dcsl: per block [u32 records, u32 dict entries, entries (u16 len + key),
// skip-list body of maps with u32 key indices]. Values are reachable without
// any block decompression; crossing a block walks its skip ladder.
// ---------------------------------------------------------------------------

class DcslColumnReader final : public ReaderBase {
 public:
  DcslColumnReader(std::shared_ptr<MeteredSource> source,
                   const FieldType& type, uint64_t record_count,
                   const SkipLadder& ladder, ColumnReadCounters counters)
      : ReaderBase(std::move(source), type, record_count, counters),
        ladder_(ladder),
        value_type_(type.element()) {
    if (type.kind() != FieldKind::Map) {
      throw CorruptionError("dcsl layout on non-map column");
    }
  }

  void skip(uint64_t n) override {
    check_skip(n);
    uint64_t target = pos_ + n;
    while (pos_ < target) {
      enter_block();
      uint64_t local_target = std::min(target, block_first_ + block_records_) -
                              block_first_;
      skip_within(local_target);
      pos_ = block_first_ + nav_.pos;
      maybe_close_block();
    }
  }

  Value read_value() override {
    check_read();
    enter_block();
    nav_.step_past_block();
    uint64_t consumed = 0;
    Value v = decode_map(nav_.offset, consumed);
    nav_.offset += consumed;
    ++nav_.pos;
    pos_ = block_first_ + nav_.pos;
    ++*counters_.values_deserialized;
    maybe_close_block();
    return v;
  }

 private:
  void enter_block() {
    while (true) {
      if (!meta_valid_) {
        block_records_ = source_->read_u32(header_off_);
        if (block_records_ == 0) {
          throw CorruptionError("dcsl block with zero records");
        }
        uint32_t dict_n = source_->read_u32(header_off_ + 4);
        uint64_t off = header_off_ + 8;
        dict_.clear();
        dict_.reserve(dict_n);
        for (uint32_t i = 0; i < dict_n; ++i) {
          uint16_t len = source_->read_u16(off);
          off += 2;
          std::vector<uint8_t> raw = source_->read_bytes(off, len);
          off += len;
          dict_.emplace_back(raw.begin(), raw.end());
        }
        block_first_ = next_first_;
        nav_ = SkipNav{source_.get(), ladder_, block_records_, 0, off};
        meta_valid_ = true;
      }
      if (pos_ < block_first_ + block_records_) return;
      // exhausted block (nav sits at its end == next header)
      next_first_ = block_first_ + block_records_;
      header_off_ = nav_.offset;
      meta_valid_ = false;
    }
  }

  void maybe_close_block() {
    if (meta_valid_ && nav_.pos == block_records_) {
      next_first_ = block_first_ + block_records_;
      header_off_ = nav_.offset;
      meta_valid_ = false;
    }
  }

  void skip_within(uint64_t local_target) {
    while (nav_.pos < local_target) {
      if (nav_.try_hop(local_target - nav_.pos) != 0) continue;
      nav_.step_past_block();
      nav_.offset += skip_map_body(nav_.offset);
      ++nav_.pos;
    }
  }

  uint64_t skip_map_body(uint64_t offset) {
    uint32_t entries = source_->read_u32(offset);
    uint64_t pos = offset + 4;
    for (uint32_t i = 0; i < entries; ++i) {
      pos += 4;  // key index
      pos += skip_value(*source_, pos, value_type_);
    }
    return pos - offset;
  }

  Value decode_map(uint64_t offset, uint64_t& consumed) {
    uint32_t entries = source_->read_u32(offset);
    uint64_t pos = offset + 4;
    MapValue m;
    m.entries.reserve(entries);
    for (uint32_t i = 0; i < entries; ++i) {
      uint32_t idx = source_->read_u32(pos);
      pos += 4;
      if (idx >= dict_.size()) {
        throw CorruptionError("dcsl key index " + std::to_string(idx) +
                              " out of dictionary range");
      }
      uint64_t used = 0;
      Value v = decode_value(*source_, pos, value_type_, used);
      pos += used;
      m.entries.push_back(MapEntry{dict_[idx], std::move(v)});
    }
    consumed = pos - offset;
    return Value(std::move(m));
  }

  SkipLadder ladder_;
  FieldType value_type_;
  uint64_t header_off_ = ColumnFileHeader::kBytes;
  uint64_t next_first_ = 0;
  bool meta_valid_ = false;
  uint64_t block_first_ = 0;
  uint32_t block_records_ = 0;
  std::vector<std::string> dict_;
  SkipNav nav_;
};

}  // namespace

std::unique_ptr<ColumnReader> open_column_reader(
    std::shared_ptr<MeteredSource> source, const FieldType& type,
    const SkipLadder& ladder, ColumnReadCounters counters) {
  ColumnFileHeader header = ColumnFileHeader::read(*source);
  switch (header.layout) {
    case ColumnLayout::Plain:
      return std::make_unique<PlainColumnReader>(std::move(source), type,
                                                 header.record_count,
                                                 counters);
    case ColumnLayout::SkipList:
      return std::make_unique<SkipListColumnReader>(
          std::move(source), type, header.record_count, ladder, counters);
    case ColumnLayout::CompressedBlocks:
      return std::make_unique<CompressedBlocksReader>(
          std::move(source), type, header.record_count, counters);
    case ColumnLayout::Dcsl:
      return std::make_unique<DcslColumnReader>(
          std::move(source), type, header.record_count, ladder, counters);
  }
  throw CorruptionError("unknown column layout");
}

}  // namespace colstore
