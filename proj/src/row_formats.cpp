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

#include "colstore/row_formats.hpp"

#include <charconv>
#include <cstring>

#include "colstore/encoding.hpp"

namespace colstore {
namespace {

constexpr char kSeqMagicUncomp[4] = {'S', 'E', 'Q', '0'};
constexpr char kSeqMagicBlock[4] = {'S', 'E', 'Q', 'B'};
constexpr char kPaxMagic[4] = {'P', 'A', 'X', '0'};

void check_record_shape(const Record& r, const Schema& schema) {
  if (r.fields.size() != schema.field_count()) {
    throw SchemaError("record has " + std::to_string(r.fields.size()) +
                      " fields, schema has " +
                      std::to_string(schema.field_count()));
  }
}

void require_nonempty_schema(const Schema& schema) {
  if (schema.field_count() == 0) {
    throw SchemaError("writers reject empty schemas");
  }
}

// ------------------------------- TXT --------------------------------------

bool txt_forbidden(char c) {
  return c == '\t' || c == '\n' || c == '\r' || c == '\\' || c == ';' ||
         c == '=';
}

void append_txt_string(std::string& out, const std::string& s,
                       bool array_element) {
  for (char c : s) {
    if (txt_forbidden(c) || (array_element && c == ',')) {
      throw SchemaError(
          "TXT writer: string contains a character that cannot be escaped");
    }
  }
  out += s;
}

void append_txt_primitive(std::string& out, const Value& v, const FieldType& t,
                          bool array_element) {
  char buf[40];
  switch (t.kind()) {
    case FieldKind::Int64: {
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v.as_int64());
      out.append(buf, p);
      return;
    }
    case FieldKind::Double: {
      auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v.as_double());
      out.append(buf, p);
      return;
    }
    case FieldKind::String:
      append_txt_string(out, v.as_string(), array_element);
      return;
    case FieldKind::Bytes: {
      static const char* hex = "0123456789abcdef";
      for (uint8_t b : v.as_bytes()) {
        out += hex[b >> 4];
        out += hex[b & 0xF];
      }
      return;
    }
    default:
      throw SchemaError("TXT cannot represent nested complex types");
  }
}

void append_txt_field(std::string& out, const Value& v, const FieldType& t) {
  switch (t.kind()) {
    case FieldKind::Array: {
      const FieldType& elem = t.element();
      bool first = true;
      for (const Value& item : v.as_array().items) {
        if (!first) out += ',';
        first = false;
        append_txt_primitive(out, item, elem, /*array_element=*/true);
      }
      return;
    }
    case FieldKind::Map: {
      const FieldType& elem = t.element();
      bool first = true;
      for (const MapEntry& e : v.as_map().entries) {
        if (!first) out += ';';
        first = false;
        append_txt_string(out, e.key, /*array_element=*/false);
        out += '=';
        append_txt_primitive(out, e.value, elem, /*array_element=*/false);
      }
      return;
    }
    default:
      append_txt_primitive(out, v, t, /*array_element=*/false);
  }
}

[[noreturn]] void txt_fail(uint64_t line_no, const std::string& what) {
  throw ParseError("txt line " + std::to_string(line_no) + ": " + what);
}

Value parse_txt_primitive(std::string_view s, const FieldType& t,
                          uint64_t line_no) {
  switch (t.kind()) {
    case FieldKind::Int64: {
      int64_t v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) {
        txt_fail(line_no, "bad int64 '" + std::string(s) + "'");
      }
      return Value(v);
    }
    case FieldKind::Double: {
      double v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size()) {
        txt_fail(line_no, "bad double '" + std::string(s) + "'");
      }
      return Value(v);
    }
    case FieldKind::String:
      return Value(std::string(s));
    case FieldKind::Bytes: {
      if (s.size() % 2 != 0) txt_fail(line_no, "odd hex length");
      Bytes b;
      b.reserve(s.size() / 2);
      auto nibble = [&](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        txt_fail(line_no, "bad hex digit");
      };
      for (size_t i = 0; i < s.size(); i += 2) {
        b.push_back(static_cast<uint8_t>(nibble(s[i]) << 4 | nibble(s[i + 1])));
      }
      return Value(std::move(b));
    }
    default:
      txt_fail(line_no, "nested complex type in TXT");
  }
}

Value parse_txt_field(std::string_view s, const FieldType& t,
                      uint64_t line_no) {
  switch (t.kind()) {
    case FieldKind::Array: {
      ArrayValue a;
      if (!s.empty()) {
        size_t start = 0;
        while (true) {
          size_t comma = s.find(',', start);
          std::string_view item = comma == std::string_view::npos
                                      ? s.substr(start)
                                      : s.substr(start, comma - start);
          a.items.push_back(parse_txt_primitive(item, t.element(), line_no));
          if (comma == std::string_view::npos) break;
          start = comma + 1;
        }
      }
      return Value(std::move(a));
    }
    case FieldKind::Map: {
      MapValue m;
      if (!s.empty()) {
        size_t start = 0;
        while (true) {
          size_t semi = s.find(';', start);
          std::string_view pair = semi == std::string_view::npos
                                      ? s.substr(start)
                                      : s.substr(start, semi - start);
          size_t eq = pair.find('=');
          if (eq == std::string_view::npos) {
            txt_fail(line_no, "map entry without '='");
          }
          m.entries.push_back(MapEntry{
              std::string(pair.substr(0, eq)),
              parse_txt_primitive(pair.substr(eq + 1), t.element(), line_no)});
          if (semi == std::string_view::npos) break;
          start = semi + 1;
        }
      }
      return Value(std::move(m));
    }
    default:
      return parse_txt_primitive(s, t, line_no);
  }
}

/// Sequential line reader over a metered source, buffered in large chunks so
/// exact metering charges each byte once.
class LineReader {
 public:
  explicit LineReader(MeteredSource& source) : source_(source) {}

  bool next_line(std::string& line) {
    line.clear();
    while (true) {
      if (buf_pos_ == buf_.size()) {
        if (!fill()) return !line.empty();
      }
      const char* data = reinterpret_cast<const char*>(buf_.data());
      std::string_view rest(data + buf_pos_, buf_.size() - buf_pos_);
      size_t nl = rest.find('\n');
      if (nl == std::string_view::npos) {
        line.append(rest);
        buf_pos_ = buf_.size();
        continue;
      }
      line.append(rest.substr(0, nl));
      buf_pos_ += nl + 1;
      return true;
    }
  }

 private:
  bool fill() {
    uint64_t remaining = source_.size() - file_pos_;
    if (remaining == 0) return false;
    uint64_t n = std::min<uint64_t>(remaining, 256 * 1024);
    buf_.resize(n);
    source_.read(file_pos_, buf_);
    file_pos_ += n;
    buf_pos_ = 0;
    return true;
  }

  MeteredSource& source_;
  std::vector<uint8_t> buf_;
  size_t buf_pos_ = 0;
  uint64_t file_pos_ = 0;
};

class TxtStream final : public RecordStream {
 public:
  TxtStream(std::shared_ptr<MeteredSource> source, const Schema& schema,
            ScanContext& ctx)
      : source_(std::move(source)), schema_(schema), lines_(*source_) {
    deser_.reserve(schema.field_count());
    for (const Field& f : schema.fields()) {
      deser_.push_back(ctx.deser_counter(f.name));
    }
  }

  bool next() override {
    std::string line;
    if (!lines_.next_line(line)) return false;
    ++line_no_;
    Record& r = view_.rec();
    r.fields.clear();
    std::string_view rest = line;
    for (size_t i = 0; i < schema_.field_count(); ++i) {
      size_t tab = rest.find('\t');
      bool last = i + 1 == schema_.field_count();
      if (last != (tab == std::string_view::npos)) {
        txt_fail(line_no_, "expected " +
                               std::to_string(schema_.field_count()) +
                               " fields");
      }
      std::string_view cell =
          last ? rest : rest.substr(0, tab);
      const Field& f = schema_.field(i);
      r.fields.emplace_back(f.name, parse_txt_field(cell, f.type, line_no_));
      ++*deser_[i];
      if (!last) rest = rest.substr(tab + 1);
    }
    return true;
  }

  RecordView& record() override { return view_; }

 private:
  std::shared_ptr<MeteredSource> source_;
  const Schema& schema_;
  LineReader lines_;
  MaterializedView view_;
  uint64_t line_no_ = 0;
  std::vector<uint64_t*> deser_;
};

// ------------------------------- SEQ --------------------------------------

class SeqStream final : public RecordStream {
 public:
  SeqStream(std::shared_ptr<MeteredSource> source, const Schema& schema,
            ScanContext& ctx)
      : source_(std::move(source)), schema_(schema) {
    for (const Field& f : schema.fields()) {
      deser_.push_back(ctx.deser_counter(f.name));
    }
    uint8_t magic[4];
    source_->read(0, magic);
    if (std::memcmp(magic, kSeqMagicUncomp, 4) == 0) {
      block_variant_ = false;
    } else if (std::memcmp(magic, kSeqMagicBlock, 4) == 0) {
      block_variant_ = true;
    } else {
      throw CorruptionError("bad SEQ magic");
    }
    pos_ = 4;
  }

  bool next() override {
    if (block_variant_) {
      if (block_pos_ == block_.size()) {
        if (block_records_left_ != 0) {
          throw CorruptionError("SEQ block ended with records outstanding");
        }
        if (!load_block()) return false;
      }
      SpanInput span(block_);
      uint32_t len = span.read_u32(block_pos_);
      if (block_pos_ + 4 + len > block_.size() || block_records_left_ == 0) {
        throw CorruptionError("SEQ block record overruns block");
      }
      decode_record(span, block_pos_ + 4);
      block_pos_ += 4 + len;
      --block_records_left_;
      return true;
    }
    if (pos_ >= source_->size()) return false;
    uint32_t len = source_->read_u32(pos_);
    std::vector<uint8_t> payload = source_->read_bytes(pos_ + 4, len);
    SpanInput span(payload);
    decode_record(span, 0);
    pos_ += 4 + len;
    return true;
  }

  RecordView& record() override { return view_; }

 private:
  bool load_block() {
    if (pos_ >= source_->size()) return false;
    uint32_t records = source_->read_u32(pos_);
    uint32_t compressed = source_->read_u32(pos_ + 4);
    CodecId codec = codec_from_u8(source_->read_u8(pos_ + 8));
    std::vector<uint8_t> payload = source_->read_bytes(pos_ + 9, compressed);
    block_ = codec_decompress(codec, payload);
    block_pos_ = 0;
    block_records_left_ = records;
    pos_ += 9 + compressed;
    return true;
  }

  void decode_record(ByteInput& in, uint64_t offset) {
    Record& r = view_.rec();
    r.fields.clear();
    uint64_t pos = offset;
    for (size_t i = 0; i < schema_.field_count(); ++i) {
      const Field& f = schema_.field(i);
      uint64_t used = 0;
      r.fields.emplace_back(f.name, decode_value(in, pos, f.type, used));
      pos += used;
      ++*deser_[i];
    }
  }

  std::shared_ptr<MeteredSource> source_;
  const Schema& schema_;
  MaterializedView view_;
  std::vector<uint64_t*> deser_;
  bool block_variant_ = false;
  uint64_t pos_ = 4;
  std::vector<uint8_t> block_;
  uint64_t block_pos_ = 0;
  uint32_t block_records_left_ = 0;
};

// ------------------------------- PAX --------------------------------------

struct PaxColumn {
  size_t ordinal = 0;
  std::vector<uint8_t> data;
  uint64_t offset = 0;
  uint64_t* deser = nullptr;
};

class PaxStream final : public RecordStream {
 public:
  PaxStream(std::shared_ptr<MeteredSource> source, const Schema& schema,
            const Projection& projection, ScanContext& ctx)
      : source_(std::move(source)), schema_(schema) {
    uint8_t head[5];
    source_->read(0, head);
    if (std::memcmp(head, kPaxMagic, 4) != 0) {
      throw CorruptionError("bad PAX magic");
    }
    codec_ = codec_from_u8(head[4]);
    pos_ = 5;
    std::vector<size_t> ordinals = projection.resolve(schema);
    for (size_t ord : ordinals) {
      PaxColumn col;
      col.ordinal = ord;
      col.deser = ctx.deser_counter(schema.field(ord).name);
      cols_.push_back(std::move(col));
    }
    // Segments are fetched in ascending ordinal order; fields are assembled
    // in projection order.
    fetch_order_.resize(cols_.size());
    for (size_t i = 0; i < cols_.size(); ++i) fetch_order_[i] = i;
    std::sort(fetch_order_.begin(), fetch_order_.end(),
              [&](size_t a, size_t b) {
                return cols_[a].ordinal < cols_[b].ordinal;
              });
  }

  bool next() override {
    if (row_in_group_ == group_rows_) {
      if (!load_group()) return false;
    }
    Record& r = view_.rec();
    r.fields.clear();
    for (PaxColumn& col : cols_) {
      SpanInput span(col.data);
      uint64_t used = 0;
      const Field& f = schema_.field(col.ordinal);
      r.fields.emplace_back(f.name,
                            decode_value(span, col.offset, f.type, used));
      col.offset += used;
      ++*col.deser;
    }
    ++row_in_group_;
    return true;
  }

  RecordView& record() override { return view_; }

 private:
  bool load_group() {
    if (pos_ >= source_->size()) return false;
    uint8_t sync[16];
    source_->read(pos_, sync);
    if (std::memcmp(sync, kPaxSyncMarker, 16) != 0) {
      throw CorruptionError("PAX sync marker mismatch at offset " +
                            std::to_string(pos_));
    }
    uint32_t rows = source_->read_u32(pos_ + 16);
    uint32_t col_count = source_->read_u32(pos_ + 20);
    if (col_count != schema_.field_count()) {
      throw CorruptionError("PAX metadata inconsistency: " +
                            std::to_string(col_count) + " columns vs schema " +
                            std::to_string(schema_.field_count()));
    }
    uint64_t meta = pos_ + 24;
    std::vector<uint64_t> lengths(col_count);
    for (uint32_t i = 0; i < col_count; ++i) {
      lengths[i] = source_->read_u64(meta + 8ull * i);
    }
    meta += 8ull * col_count;
    std::vector<uint64_t> uncompressed(col_count, 0);
    if (codec_ != CodecId::Raw) {
      for (uint32_t i = 0; i < col_count; ++i) {
        uncompressed[i] = source_->read_u64(meta + 8ull * i);
      }
      meta += 8ull * col_count;
    }
    uint64_t data_start = meta;
    std::vector<uint64_t> prefix(col_count + 1, 0);
    for (uint32_t i = 0; i < col_count; ++i) {
      prefix[i + 1] = prefix[i] + lengths[i];
    }
    for (size_t idx : fetch_order_) {
      PaxColumn& col = cols_[idx];
      std::vector<uint8_t> raw = source_->read_bytes(
          data_start + prefix[col.ordinal], lengths[col.ordinal]);
      col.data = codec_ == CodecId::Raw
                     ? std::move(raw)
                     : codec_decompress(codec_, raw,
                                        uncompressed[col.ordinal]);
      col.offset = 0;
    }
    pos_ = data_start + prefix[col_count];
    group_rows_ = rows;
    row_in_group_ = 0;
    return rows > 0 || next_group_if_empty();
  }

  bool next_group_if_empty() { return load_group(); }

  std::shared_ptr<MeteredSource> source_;
  const Schema& schema_;
  MaterializedView view_;
  CodecId codec_ = CodecId::Raw;
  uint64_t pos_ = 5;
  std::vector<PaxColumn> cols_;
  std::vector<size_t> fetch_order_;
  uint32_t group_rows_ = 0;
  uint32_t row_in_group_ = 0;
};

}  // namespace

// ------------------------------ writers -----------------------------------

TxtWriter::TxtWriter(const std::filesystem::path& file, const Schema& schema)
    : schema_(schema), path_(file) {
  require_nonempty_schema(schema);
  for (const Field& f : schema.fields()) {
    if (f.type.is_complex() && f.type.element().is_complex()) {
      throw SchemaError("TXT cannot represent nested complex types (field '" +
                        f.name + "')");
    }
  }
  out_.open(file, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot create file: " + file.string());
}

void TxtWriter::append(const Record& r) {
  check_record_shape(r, schema_);
  line_.clear();
  for (size_t i = 0; i < schema_.field_count(); ++i) {
    if (i) line_ += '\t';
    append_txt_field(line_, record_field(r, schema_, i),
                     schema_.field(i).type);
  }
  line_ += '\n';
  out_.write(line_.data(), static_cast<std::streamsize>(line_.size()));
  if (!out_) throw IoError("write failed: " + path_.string());
  ++records_;
}

uint64_t TxtWriter::finish() {
  out_.close();
  if (!out_) throw IoError("close failed: " + path_.string());
  return records_;
}

uint64_t write_txt(std::span<const Record> records, const Schema& schema,
                   const std::filesystem::path& file) {
  TxtWriter writer(file, schema);
  for (const Record& r : records) writer.append(r);
  return writer.finish();
}

std::unique_ptr<RecordStream> open_txt(const std::filesystem::path& file,
                                       const Schema& schema,
                                       const Projection& projection,
                                       ScanContext& ctx) {
  projection.resolve(schema);  // validate names; TXT always parses everything
  return std::make_unique<TxtStream>(ctx.open(file), schema, ctx);
}

SeqWriter::SeqWriter(const std::filesystem::path& file, const Schema& schema,
                     const SeqOptions& options)
    : schema_(schema), options_(options), sink_(file) {
  require_nonempty_schema(schema);
  const bool block = options_.variant == SeqVariant::Block;
  if (block && options_.block_target_bytes < 4 * 1024) {
    throw SchemaError("SEQ block target must be >= 4 KiB");
  }
  sink_.append(std::span<const uint8_t>(
      reinterpret_cast<const uint8_t*>(block ? kSeqMagicBlock
                                             : kSeqMagicUncomp),
      4));
}

void SeqWriter::flush_block() {
  if (block_records_ == 0) return;
  std::vector<uint8_t> payload = codec_compress(options_.codec, block_);
  sink_.write_u32(block_records_);
  sink_.write_u32(static_cast<uint32_t>(payload.size()));
  sink_.write_u8(static_cast<uint8_t>(options_.codec));
  sink_.append(payload);
  block_.clear();
  block_records_ = 0;
}

void SeqWriter::append(const Record& r) {
  check_record_shape(r, schema_);
  encoded_.clear();
  for (size_t i = 0; i < schema_.field_count(); ++i) {
    encode_value(record_field(r, schema_, i), schema_.field(i).type,
                 encoded_);
  }
  if (options_.variant == SeqVariant::Block) {
    put_u32(block_, static_cast<uint32_t>(encoded_.size()));
    block_.insert(block_.end(), encoded_.begin(), encoded_.end());
    ++block_records_;
    if (block_.size() >= options_.block_target_bytes) flush_block();
  } else {
    sink_.write_u32(static_cast<uint32_t>(encoded_.size()));
    sink_.append(encoded_);
  }
  ++records_;
}

uint64_t SeqWriter::finish() {
  flush_block();
  sink_.close();
  return records_;
}

uint64_t write_seq(std::span<const Record> records, const Schema& schema,
                   const std::filesystem::path& file,
                   const SeqOptions& options) {
  SeqWriter writer(file, schema, options);
  for (const Record& r : records) writer.append(r);
  return writer.finish();
}

std::unique_ptr<RecordStream> open_seq(const std::filesystem::path& file,
                                       const Schema& schema,
                                       const Projection& projection,
                                       ScanContext& ctx) {
  projection.resolve(schema);  // SEQ reads and deserializes everything
  return std::make_unique<SeqStream>(ctx.open(file), schema, ctx);
}

PaxWriter::PaxWriter(const std::filesystem::path& file, const Schema& schema,
                     const PaxConfig& config)
    : schema_(schema),
      config_(config),
      sink_(file),
      segments_(schema.field_count()) {
  require_nonempty_schema(schema);
  if (config_.rowgroup_target_bytes < 64 * 1024) {
    throw SchemaError("PAX row-group target must be >= 64 KiB");
  }
  sink_.append(std::span<const uint8_t>(
      reinterpret_cast<const uint8_t*>(kPaxMagic), 4));
  sink_.write_u8(static_cast<uint8_t>(config_.codec));
}

void PaxWriter::flush_group() {
  if (buffered_rows_ == 0) return;
  const size_t cols = schema_.field_count();
  sink_.append(std::span<const uint8_t>(
      reinterpret_cast<const uint8_t*>(kPaxSyncMarker), 16));
  sink_.write_u32(buffered_rows_);
  sink_.write_u32(static_cast<uint32_t>(cols));
  if (config_.codec == CodecId::Raw) {
    for (const auto& seg : segments_) sink_.write_u64(seg.size());
    for (const auto& seg : segments_) sink_.append(seg);
  } else {
    std::vector<std::vector<uint8_t>> compressed(cols);
    for (size_t i = 0; i < cols; ++i) {
      compressed[i] = codec_compress(config_.codec, segments_[i]);
    }
    for (const auto& seg : compressed) sink_.write_u64(seg.size());
    for (const auto& seg : segments_) sink_.write_u64(seg.size());
    for (const auto& seg : compressed) sink_.append(seg);
  }
  for (auto& seg : segments_) seg.clear();
  buffered_plain_ = 0;
  buffered_rows_ = 0;
  ++groups_;
}

void PaxWriter::append(const Record& r) {
  check_record_shape(r, schema_);
  for (size_t i = 0; i < schema_.field_count(); ++i) {
    size_t before = segments_[i].size();
    encode_value(record_field(r, schema_, i), schema_.field(i).type,
                 segments_[i]);
    buffered_plain_ += segments_[i].size() - before;
  }
  ++buffered_rows_;
  if (buffered_plain_ >= config_.rowgroup_target_bytes) flush_group();
}

uint64_t PaxWriter::finish() {
  flush_group();
  sink_.close();
  return groups_;
}

uint64_t write_pax(std::span<const Record> records, const Schema& schema,
                   const std::filesystem::path& file,
                   const PaxConfig& config) {
  PaxWriter writer(file, schema, config);
  for (const Record& r : records) writer.append(r);
  return writer.finish();
}

std::unique_ptr<RecordStream> open_pax(const std::filesystem::path& file,
                                       const Schema& schema,
                                       const Projection& projection,
                                       ScanContext& ctx) {
  return std::make_unique<PaxStream>(ctx.open(file), schema, projection, ctx);
}

uint64_t pax_rowgroup_count(const std::filesystem::path& file) {
  auto region = MappedFileRegion::open(file);
  MeteredSource source(region, MeterConfig{});
  uint8_t head[5];
  source.read(0, head);
  if (std::memcmp(head, kPaxMagic, 4) != 0) {
    throw CorruptionError("bad PAX magic");
  }
  CodecId codec = codec_from_u8(head[4]);
  uint64_t pos = 5;
  uint64_t groups = 0;
  while (pos < source.size()) {
    uint8_t sync[16];
    source.read(pos, sync);
    if (std::memcmp(sync, kPaxSyncMarker, 16) != 0) {
      throw CorruptionError("PAX sync marker mismatch");
    }
    uint32_t cols = source.read_u32(pos + 20);
    uint64_t meta = pos + 24;
    uint64_t data = 0;
    for (uint32_t i = 0; i < cols; ++i) {
      data += source.read_u64(meta + 8ull * i);
    }
    meta += 8ull * cols;
    if (codec != CodecId::Raw) meta += 8ull * cols;
    pos = meta + data;
    ++groups;
  }
  return groups;
}

}  // namespace colstore
