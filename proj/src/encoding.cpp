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

#include "colstore/encoding.hpp"

#include <bit>
#include <cstring>
#include <limits>

namespace colstore {
namespace {

void put_length(std::vector<uint8_t>& out, size_t n, const char* what) {
  if (n > std::numeric_limits<uint32_t>::max()) {
    throw SchemaError(std::string(what) + " exceeds u32 length limit");
  }
  put_u32(out, static_cast<uint32_t>(n));
}

void encode_string(std::vector<uint8_t>& out, const std::string& s) {
  put_length(out, s.size(), "string");
  out.insert(out.end(), s.begin(), s.end());
}

[[noreturn]] void mismatch(const Value& v, const FieldType& t) {
  throw SchemaError("cannot encode " + std::string(kind_name(v.kind())) +
                    " value as " + t.to_string());
}

std::string decode_string_at(ByteInput& in, uint64_t offset,
                             uint64_t& consumed) {
  uint32_t len = in.read_u32(offset);
  if (offset + 4 + len > in.size()) {
    throw CorruptionError("truncated string: declared " + std::to_string(len) +
                          " bytes, " + std::to_string(in.size() - offset - 4) +
                          " remain");
  }
  std::string s(len, '\0');
  if (len > 0) {
    in.read(offset + 4, {reinterpret_cast<uint8_t*>(s.data()), len});
  }
  if (!valid_utf8({reinterpret_cast<const uint8_t*>(s.data()), s.size()})) {
    throw CorruptionError("invalid UTF-8 in string value");
  }
  consumed = 4 + static_cast<uint64_t>(len);
  return s;
}

}  // namespace

bool valid_utf8(std::span<const uint8_t> data) {
  size_t i = 0;
  const size_t n = data.size();
  while (i < n) {
    uint8_t c = data[i];
    size_t extra;
    uint32_t cp;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= n) return false;
    for (size_t k = 1; k <= extra; ++k) {
      if ((data[i + k] & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (data[i + k] & 0x3F);
    }
    // overlongs, surrogates, out of range
    if (extra == 1 && cp < 0x80) return false;
    if (extra == 2 && (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF)))
      return false;
    if (extra == 3 && (cp < 0x10000 || cp > 0x10FFFF)) return false;
    i += extra + 1;
  }
  return true;
}

void encode_value(const Value& value, const FieldType& type,
                  std::vector<uint8_t>& out) {
  if (value.kind() != type.kind()) mismatch(value, type);
  switch (type.kind()) {
    case FieldKind::Int64:
      put_u64(out, static_cast<uint64_t>(value.as_int64()));
      return;
    case FieldKind::Double:
      put_u64(out, std::bit_cast<uint64_t>(value.as_double()));
      return;
    case FieldKind::String:
      encode_string(out, value.as_string());
      return;
    case FieldKind::Bytes: {
      const Bytes& b = value.as_bytes();
      put_length(out, b.size(), "bytes");
      out.insert(out.end(), b.begin(), b.end());
      return;
    }
    case FieldKind::Array: {
      const ArrayValue& a = value.as_array();
      put_length(out, a.items.size(), "array");
      for (const Value& v : a.items) encode_value(v, type.element(), out);
      return;
    }
    case FieldKind::Map: {
      const MapValue& m = value.as_map();
      put_length(out, m.entries.size(), "map");
      for (const MapEntry& e : m.entries) {
        encode_string(out, e.key);
        encode_value(e.value, type.element(), out);
      }
      return;
    }
  }
}

uint64_t encoded_size(const Value& value, const FieldType& type) {
  if (value.kind() != type.kind()) mismatch(value, type);
  switch (type.kind()) {
    case FieldKind::Int64:
    case FieldKind::Double:
      return 8;
    case FieldKind::String:
      return 4 + value.as_string().size();
    case FieldKind::Bytes:
      return 4 + value.as_bytes().size();
    case FieldKind::Array: {
      uint64_t n = 4;
      for (const Value& v : value.as_array().items)
        n += encoded_size(v, type.element());
      return n;
    }
    case FieldKind::Map: {
      uint64_t n = 4;
      for (const MapEntry& e : value.as_map().entries) {
        n += 4 + e.key.size() + encoded_size(e.value, type.element());
      }
      return n;
    }
  }
  return 0;
}

Value decode_value(ByteInput& in, uint64_t offset, const FieldType& type,
                   uint64_t& consumed) {
  switch (type.kind()) {
    case FieldKind::Int64: {
      consumed = 8;
      return Value(static_cast<int64_t>(in.read_u64(offset)));
    }
    case FieldKind::Double: {
      consumed = 8;
      return Value(std::bit_cast<double>(in.read_u64(offset)));
    }
    case FieldKind::String:
      return Value(decode_string_at(in, offset, consumed));
    case FieldKind::Bytes: {
      uint32_t len = in.read_u32(offset);
      if (offset + 4 + len > in.size()) {
        throw CorruptionError("truncated bytes value");
      }
      consumed = 4 + static_cast<uint64_t>(len);
      return Value(in.read_bytes(offset + 4, len));
    }
    case FieldKind::Array: {
      uint32_t count = in.read_u32(offset);
      uint64_t pos = offset + 4;
      ArrayValue a;
      a.items.reserve(count);
      for (uint32_t i = 0; i < count; ++i) {
        uint64_t used = 0;
        a.items.push_back(decode_value(in, pos, type.element(), used));
        pos += used;
      }
      consumed = pos - offset;
      return Value(std::move(a));
    }
    case FieldKind::Map: {
      uint32_t count = in.read_u32(offset);
      uint64_t pos = offset + 4;
      MapValue m;
      m.entries.reserve(count);
      for (uint32_t i = 0; i < count; ++i) {
        uint64_t used = 0;
        std::string key = decode_string_at(in, pos, used);
        pos += used;
        Value v = decode_value(in, pos, type.element(), used);
        pos += used;
        m.entries.push_back(MapEntry{std::move(key), std::move(v)});
      }
      consumed = pos - offset;
      return Value(std::move(m));
    }
  }
  throw SchemaError("unknown field kind");
}

uint64_t skip_value(ByteInput& in, uint64_t offset, const FieldType& type) {
  switch (type.kind()) {
    case FieldKind::Int64:
    case FieldKind::Double:
      if (offset + 8 > in.size()) throw CorruptionError("truncated value");
      return 8;
    case FieldKind::String:
    case FieldKind::Bytes: {
      uint32_t len = in.read_u32(offset);
      if (offset + 4 + len > in.size()) {
        throw CorruptionError("truncated value");
      }
      return 4 + static_cast<uint64_t>(len);
    }
    case FieldKind::Array: {
      uint32_t count = in.read_u32(offset);
      const FieldType& elem = type.element();
      if (elem.is_fixed_width()) {
        uint64_t len = 4 + static_cast<uint64_t>(count) * elem.fixed_width();
        if (offset + len > in.size()) throw CorruptionError("truncated array");
        return len;
      }
      uint64_t pos = offset + 4;
      for (uint32_t i = 0; i < count; ++i) {
        pos += skip_value(in, pos, elem);
      }
      return pos - offset;
    }
    case FieldKind::Map: {
      uint32_t count = in.read_u32(offset);
      const FieldType& elem = type.element();
      uint64_t pos = offset + 4;
      for (uint32_t i = 0; i < count; ++i) {
        uint32_t klen = in.read_u32(pos);
        pos += 4 + klen;
        if (pos > in.size()) throw CorruptionError("truncated map key");
        pos += skip_value(in, pos, elem);
      }
      return pos - offset;
    }
  }
  throw SchemaError("unknown field kind");
}

}  // namespace colstore
