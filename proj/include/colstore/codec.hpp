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
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace colstore {

/// General-purpose block codecs. FastLz is an LZ77-family byte codec tuned
/// for cheap decompression; HighRatio is deflate-class (zlib). Both lossless.
enum class CodecId : uint8_t {
  Raw = 0,
  FastLz = 1,
  HighRatio = 2,
};

std::string_view codec_name(CodecId id);
CodecId codec_from_u8(uint8_t v);  // throws CorruptionError on unknown ids
CodecId codec_from_name(std::string_view name);

std::vector<uint8_t> codec_compress(CodecId codec,
                                    std::span<const uint8_t> data);

/// Inverts codec_compress. When `expected_size` is known the output buffer is
/// sized up front and a size mismatch raises CorruptionError; otherwise the
/// output grows as needed.
std::vector<uint8_t> codec_decompress(
    CodecId codec, std::span<const uint8_t> data,
    std::optional<uint64_t> expected_size = std::nullopt);

}  // namespace colstore
