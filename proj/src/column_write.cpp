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
#include <charconv>
#include <limits>
#include <unordered_map>

#include "colstore/column_file.hpp"
#include "colstore/encoding.hpp"

namespace colstore {

namespace {

constexpr char kMagic[4] = {'C', 'I', 'F', '1'};

uint32_t levels_present(const SkipLadder& ladder, uint64_t index) {
  uint32_t n = 0;
  for (uint32_t h = ladder.heights; h >= 1; --h) {
    if (index % ladder.span(h) == 0) ++n;
  }
  return n;
}

uint64_t parse_u64(std::string_view s, const char* what) {
  uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw SchemaError(std::string("bad ") + what + " '" + std::string(s) +
                      "'");
  }
  return v;
}

void write_plain_body(std::vector<uint8_t>& out, std::span<const Value> values,
                      const FieldType& type) {
  for (const Value& v : values) encode_value(v, type, out);
}

void write_skiplist_column_body(std::vector<uint8_t>& out,
                                std::span<const Value> values,
                                const FieldType& type,
                                const SkipLadder& ladder) {
  std::vector<std::vector<uint8_t>> encoded(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    encode_value(values[i], type, encoded[i]);
  }
  append_skiplist_body(out, encoded, ladder);
}

void write_compressed_blocks_body(std::vector<uint8_t>& out,
                                  std::span<const Value> values,
                                  const FieldType& type,
                                  const ColumnLayoutSpec& spec) {
  if (spec.codec == CodecId::Raw) {
    throw SchemaError("compressed-blocks layout requires a non-raw codec");
  }
  std::vector<uint8_t> buffer;
  uint32_t buffered = 0;
  auto flush = [&] {
    if (buffered == 0) return;
    std::vector<uint8_t> payload = codec_compress(spec.codec, buffer);
    put_u32(out, buffered);
    put_u32(out, static_cast<uint32_t>(buffer.size()));
    put_u32(out, static_cast<uint32_t>(payload.size()));
    out.push_back(static_cast<uint8_t>(spec.codec));
    out.insert(out.end(), payload.begin(), payload.end());
    buffer.clear();
    buffered = 0;
  };
  for (const Value& v : values) {
    encode_value(v, type, buffer);
    ++buffered;
    if (buffer.size() >= spec.block_target_bytes) flush();
  }
  flush();
}

void write_dcsl_body(std::vector<uint8_t>& out, std::span<const Value> values,
                     const FieldType& type, const ColumnLayoutSpec& spec) {
  if (type.kind() != FieldKind::Map) {
    throw SchemaError("dcsl layout applies only to map columns");
  }
  if (spec.dcsl_block_records < 1) {
    throw SchemaError("dcsl block_records must be >= 1");
  }
  const FieldType& value_type = type.element();
  for (size_t begin = 0; begin < values.size();
       begin += spec.dcsl_block_records) {
    size_t end =
        std::min(values.size(), begin + static_cast<size_t>(
                                            spec.dcsl_block_records));
    std::span<const Value> chunk = values.subspan(begin, end - begin);

    // First-occurrence key dictionary for this block.
    std::vector<std::string> dict;
    std::unordered_map<std::string_view, uint32_t> index;
    for (const Value& v : chunk) {
      for (const MapEntry& e : v.as_map().entries) {
        if (index.find(e.key) == index.end()) {
          dict.push_back(e.key);
          index.emplace(dict.back(), static_cast<uint32_t>(dict.size() - 1));
        }
      }
    }

    // Map bodies with keys replaced by u32 dictionary indices.
    std::vector<std::vector<uint8_t>> encoded(chunk.size());
    for (size_t i = 0; i < chunk.size(); ++i) {
      const MapValue& m = chunk[i].as_map();
      put_u32(encoded[i], static_cast<uint32_t>(m.entries.size()));
      for (const MapEntry& e : m.entries) {
        put_u32(encoded[i], index.at(e.key));
        encode_value(e.value, value_type, encoded[i]);
      }
    }

    put_u32(out, static_cast<uint32_t>(chunk.size()));
    put_u32(out, static_cast<uint32_t>(dict.size()));
    for (const std::string& key : dict) {
      if (key.size() > std::numeric_limits<uint16_t>::max()) {
        throw SchemaError("map key exceeds u16 length limit");
      }
      put_u16(out, static_cast<uint16_t>(key.size()));
      out.insert(out.end(), key.begin(), key.end());
    }
    append_skiplist_body(out, encoded, spec.ladder);
  }
}

}  // namespace

std::string_view layout_name(ColumnLayout layout) {
  switch (layout) {
    case ColumnLayout::Plain:
      return "plain";
    case ColumnLayout::SkipList:
      return "skiplist";
    case ColumnLayout::CompressedBlocks:
      return "blocks";
    case ColumnLayout::Dcsl:
      return "dcsl";
  }
  return "?";
}

const ColumnLayoutSpec& ColumnLayoutPlan::resolve(const std::string& field,
                                                  const FieldType& type) const {
  const ColumnLayoutSpec* spec = &default_spec;
  if (map_spec && type.kind() == FieldKind::Map) spec = &*map_spec;
  auto it = per_field.find(field);
  if (it != per_field.end()) spec = &it->second;
  if (spec->layout == ColumnLayout::Dcsl && type.kind() != FieldKind::Map) {
    throw SchemaError("dcsl layout on non-map column '" + field + "'");
  }
  return *spec;
}

ColumnLayoutPlan ColumnLayoutPlan::parse(std::string_view text) {
  ColumnLayoutPlan plan;
  if (text == "plain") {
    return plan;
  }
  if (text == "skiplist") {
    plan.default_spec.layout = ColumnLayout::SkipList;
    return plan;
  }
  if (text.starts_with("blocks:")) {
    std::string_view rest = text.substr(7);
    size_t colon = rest.find(':');
    ColumnLayoutSpec spec;
    spec.layout = ColumnLayout::CompressedBlocks;
    if (colon == std::string_view::npos) {
      spec.codec = codec_from_name(rest);
    } else {
      spec.codec = codec_from_name(rest.substr(0, colon));
      spec.block_target_bytes =
          parse_u64(rest.substr(colon + 1), "block size");
    }
    plan.default_spec = spec;
    return plan;
  }
  if (text.starts_with("dcsl")) {
    ColumnLayoutSpec maps;
    maps.layout = ColumnLayout::Dcsl;
    if (text.size() > 4) {
      if (text[4] != ':') throw SchemaError("bad layout spec");
      maps.dcsl_block_records = parse_u64(text.substr(5), "dcsl block size");
    }
    plan.default_spec.layout = ColumnLayout::SkipList;
    plan.map_spec = maps;
    return plan;
  }
  throw SchemaError("unknown layout '" + std::string(text) +
                    "' (expected plain|skiplist|blocks:CODEC[:BYTES]|dcsl[:N])");
}

std::string ColumnLayoutPlan::to_string() const {
  const ColumnLayoutSpec& d = default_spec;
  if (map_spec && map_spec->layout == ColumnLayout::Dcsl) {
    return "dcsl:" + std::to_string(map_spec->dcsl_block_records);
  }
  switch (d.layout) {
    case ColumnLayout::Plain:
      return "plain";
    case ColumnLayout::SkipList:
      return "skiplist";
    case ColumnLayout::CompressedBlocks:
      return "blocks:" + std::string(codec_name(d.codec)) + ":" +
             std::to_string(d.block_target_bytes);
    case ColumnLayout::Dcsl:
      return "dcsl:" + std::to_string(d.dcsl_block_records);
  }
  return "?";
}

ColumnFileHeader ColumnFileHeader::read(ByteInput& in) {
  uint8_t buf[kBytes];
  if (in.size() < kBytes) {
    throw CorruptionError("column file shorter than its header");
  }
  in.read(0, buf);
  if (std::memcmp(buf, kMagic, 4) != 0) {
    throw CorruptionError("bad column file magic");
  }
  if (buf[4] > 3) {
    throw CorruptionError("unknown column layout " + std::to_string(buf[4]));
  }
  ColumnFileHeader h;
  h.layout = static_cast<ColumnLayout>(buf[4]);
  h.codec = codec_from_u8(buf[5]);
  h.record_count = get_u64(buf + 6);
  return h;
}

std::vector<uint8_t> ColumnFileHeader::to_bytes() const {
  std::vector<uint8_t> out;
  out.reserve(kBytes);
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(static_cast<uint8_t>(layout));
  out.push_back(static_cast<uint8_t>(codec));
  put_u64(out, record_count);
  return out;
}

void append_skiplist_body(std::vector<uint8_t>& out,
                          std::span<const std::vector<uint8_t>> encoded,
                          const SkipLadder& ladder) {
  const size_t n = encoded.size();
  // Offsets of each record's skip block (or the record itself when none).
  std::vector<uint64_t> offsets(n + 1);
  uint64_t off = 0;
  for (size_t i = 0; i < n; ++i) {
    offsets[i] = off;
    if (i % ladder.base == 0) off += 8ull * levels_present(ladder, i);
    off += encoded[i].size();
  }
  offsets[n] = off;  // end of body

  for (size_t i = 0; i < n; ++i) {
    if (i % ladder.base == 0) {
      uint64_t block_end = offsets[i] + 8ull * levels_present(ladder, i);
      for (uint32_t h = ladder.heights; h >= 1; --h) {
        uint64_t span = ladder.span(h);
        if (i % span != 0) continue;
        uint64_t target = i + span;
        uint64_t target_off = target >= n ? offsets[n] : offsets[target];
        put_u64(out, target_off - block_end);  // distances clamp to body end
      }
    }
    out.insert(out.end(), encoded[i].begin(), encoded[i].end());
  }
}

uint64_t write_column_file(const std::filesystem::path& path,
                           std::span<const Value> values,
                           const FieldType& type,
                           const ColumnLayoutSpec& spec) {
  ColumnFileHeader header;
  header.layout = spec.layout;
  header.codec = spec.layout == ColumnLayout::CompressedBlocks
                     ? spec.codec
                     : CodecId::Raw;
  header.record_count = values.size();

  std::vector<uint8_t> body;
  switch (spec.layout) {
    case ColumnLayout::Plain:
      write_plain_body(body, values, type);
      break;
    case ColumnLayout::SkipList:
      write_skiplist_column_body(body, values, type, spec.ladder);
      break;
    case ColumnLayout::CompressedBlocks:
      write_compressed_blocks_body(body, values, type, spec);
      break;
    case ColumnLayout::Dcsl:
      if (!values.empty()) {
        write_dcsl_body(body, values, type, spec);
      } else if (type.kind() != FieldKind::Map) {
        throw SchemaError("dcsl layout applies only to map columns");
      }
      break;
  }

  FileSink sink(path);
  sink.append(header.to_bytes());
  sink.append(body);
  sink.close();
  return ColumnFileHeader::kBytes + body.size();
}

}  // namespace colstore
