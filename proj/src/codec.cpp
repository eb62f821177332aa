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

#include "colstore/codec.hpp"

#include <zlib.h>

#include <cstring>
#include <string>

#include "colstore/errors.hpp"

namespace colstore {
namespace {

// ---------------------------------------------------------------------------
// FastLz: a small LZ77 byte codec. Stream = sequence of tokens:
//   control < 0x80 : literal run of control+1 bytes follows (1..128)
//   control >= 0x80: match of length (control & 0x7f) + 4 (4..131),
//                    followed by u16 little-endian distance (1..65535)
// Greedy matcher with a 64K-entry hash of 4-byte prefixes. Decompression is
// a single pass of byte copies; overlapping matches are legal.
// ---------------------------------------------------------------------------

constexpr size_t kMinMatch = 4;
constexpr size_t kMaxMatch = 131;  // (0x7f) + 4
constexpr size_t kMaxLiteralRun = 128;
constexpr size_t kMaxDistance = 65535;
constexpr size_t kHashBits = 16;

inline uint32_t hash4(const uint8_t* p) {
  uint32_t v;
  std::memcpy(&v, p, 4);
  return (v * 2654435761u) >> (32 - kHashBits);
}

void emit_literals(std::vector<uint8_t>& out, const uint8_t* data,
                   size_t begin, size_t end) {
  while (begin < end) {
    size_t run = std::min(end - begin, kMaxLiteralRun);
    out.push_back(static_cast<uint8_t>(run - 1));
    out.insert(out.end(), data + begin, data + begin + run);
    begin += run;
  }
}

std::vector<uint8_t> fastlz_compress(std::span<const uint8_t> in) {
  std::vector<uint8_t> out;
  out.reserve(in.size() / 2 + 16);
  const uint8_t* data = in.data();
  const size_t n = in.size();

  std::vector<uint32_t> table(size_t{1} << kHashBits, 0xFFFFFFFFu);
  size_t literal_start = 0;
  size_t pos = 0;
  while (n >= kMinMatch && pos + kMinMatch <= n) {
    uint32_t h = hash4(data + pos);
    uint32_t cand = table[h];
    table[h] = static_cast<uint32_t>(pos);
    if (cand != 0xFFFFFFFFu && pos - cand <= kMaxDistance &&
        std::memcmp(data + cand, data + pos, kMinMatch) == 0) {
      size_t len = kMinMatch;
      size_t limit = std::min(kMaxMatch, n - pos);
      while (len < limit && data[cand + len] == data[pos + len]) ++len;
      emit_literals(out, data, literal_start, pos);
      out.push_back(static_cast<uint8_t>(0x80 | (len - kMinMatch)));
      uint16_t dist = static_cast<uint16_t>(pos - cand);
      out.push_back(static_cast<uint8_t>(dist));
      out.push_back(static_cast<uint8_t>(dist >> 8));
      // seed the table inside the match so runs keep finding themselves
      size_t step = len >= 32 ? 7 : 1;
      for (size_t k = 1; k < len && pos + k + kMinMatch <= n; k += step) {
        table[hash4(data + pos + k)] = static_cast<uint32_t>(pos + k);
      }
      pos += len;
      literal_start = pos;
    } else {
      ++pos;
    }
  }
  emit_literals(out, data, literal_start, n);
  return out;
}

void fastlz_decompress(std::span<const uint8_t> in, std::vector<uint8_t>& out) {
  size_t pos = 0;
  const size_t n = in.size();
  while (pos < n) {
    uint8_t control = in[pos++];
    if (control < 0x80) {
      size_t run = static_cast<size_t>(control) + 1;
      if (pos + run > n) {
        throw CorruptionError("FastLz: truncated literal run");
      }
      out.insert(out.end(), in.begin() + pos, in.begin() + pos + run);
      pos += run;
    } else {
      if (pos + 2 > n) {
        throw CorruptionError("FastLz: truncated match token");
      }
      size_t len = static_cast<size_t>(control & 0x7F) + kMinMatch;
      size_t dist = static_cast<size_t>(in[pos]) |
                    (static_cast<size_t>(in[pos + 1]) << 8);
      pos += 2;
      if (dist == 0 || dist > out.size()) {
        throw CorruptionError("FastLz: match distance out of range");
      }
      size_t from = out.size() - dist;
      for (size_t i = 0; i < len; ++i) {
        out.push_back(out[from + i]);  // overlapping copies rely on this
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Deflate (zlib) wrappers.
// ---------------------------------------------------------------------------

std::vector<uint8_t> zlib_compress(std::span<const uint8_t> in) {
  uLong bound = compressBound(static_cast<uLong>(in.size()));
  std::vector<uint8_t> out(bound);
  uLongf out_len = bound;
  int rc = compress2(out.data(), &out_len, in.data(),
                     static_cast<uLong>(in.size()), Z_DEFAULT_COMPRESSION);
  if (rc != Z_OK) {
    throw CorruptionError("zlib compress failed: rc=" + std::to_string(rc));
  }
  out.resize(out_len);
  return out;
}

std::vector<uint8_t> zlib_decompress(std::span<const uint8_t> in,
                                     std::optional<uint64_t> expected) {
  if (expected) {
    std::vector<uint8_t> out(*expected);
    uLongf out_len = static_cast<uLongf>(*expected);
    int rc = uncompress(out.data(), &out_len, in.data(),
                        static_cast<uLong>(in.size()));
    if (rc != Z_OK || out_len != *expected) {
      throw CorruptionError("zlib decompress failed");
    }
    return out;
  }
  // Unknown output size: streaming inflate with a growing buffer.
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) {
    throw CorruptionError("zlib inflateInit failed");
  }
  std::vector<uint8_t> out;
  out.resize(std::max<size_t>(in.size() * 3, 4096));
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  size_t written = 0;
  int rc = Z_OK;
  do {
    if (written == out.size()) out.resize(out.size() * 2);
    zs.next_out = out.data() + written;
    zs.avail_out = static_cast<uInt>(out.size() - written);
    rc = inflate(&zs, Z_NO_FLUSH);
    written = out.size() - zs.avail_out;
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw CorruptionError("zlib inflate failed: rc=" + std::to_string(rc));
    }
  } while (rc != Z_STREAM_END);
  inflateEnd(&zs);
  out.resize(written);
  return out;
}

}  // namespace

std::string_view codec_name(CodecId id) {
  switch (id) {
    case CodecId::Raw:
      return "raw";
    case CodecId::FastLz:
      return "fast";
    case CodecId::HighRatio:
      return "high";
  }
  return "?";
}

CodecId codec_from_u8(uint8_t v) {
  if (v > 2) {
    throw CorruptionError("unknown codec id " + std::to_string(v));
  }
  return static_cast<CodecId>(v);
}

CodecId codec_from_name(std::string_view name) {
  if (name == "raw") return CodecId::Raw;
  if (name == "fast") return CodecId::FastLz;
  if (name == "high") return CodecId::HighRatio;
  throw SchemaError("unknown codec '" + std::string(name) +
                    "' (expected raw|fast|high)");
}

std::vector<uint8_t> codec_compress(CodecId codec,
                                    std::span<const uint8_t> data) {
  switch (codec) {
    case CodecId::Raw:
      return {data.begin(), data.end()};
    case CodecId::FastLz:
      return fastlz_compress(data);
    case CodecId::HighRatio:
      return zlib_compress(data);
  }
  throw SchemaError("unknown codec");
}

std::vector<uint8_t> codec_decompress(CodecId codec,
                                      std::span<const uint8_t> data,
                                      std::optional<uint64_t> expected_size) {
  switch (codec) {
    case CodecId::Raw: {
      if (expected_size && *expected_size != data.size()) {
        throw CorruptionError("raw block size mismatch");
      }
      return {data.begin(), data.end()};
    }
    case CodecId::FastLz: {
      std::vector<uint8_t> out;
      if (expected_size) out.reserve(*expected_size);
      fastlz_decompress(data, out);
      if (expected_size && out.size() != *expected_size) {
        throw CorruptionError("FastLz decompressed size mismatch: got " +
                              std::to_string(out.size()) + ", expected " +
                              std::to_string(*expected_size));
      }
      return out;
    }
    case CodecId::HighRatio:
      return zlib_decompress(data, expected_size);
  }
  throw SchemaError("unknown codec");
}

}  // namespace colstore
