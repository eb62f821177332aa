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
#include <vector>

#include "colstore/byte_io.hpp"
#include "colstore/value.hpp"

namespace colstore {

// Plain binary layout (all integers little-endian):
//   int64  -> 8 bytes
//   double -> 8 bytes (IEEE-754 bit pattern)
//   string -> u32 byte length + UTF-8 bytes
//   bytes  -> u32 length + raw bytes
//   array  -> u32 count + encoded elements
//   map    -> u32 count + repeated (key encoded as string, then value)

/// Appends the plain encoding of `value` to `out`.
/// Throws SchemaError if the value does not match `type`.
void encode_value(const Value& value, const FieldType& type,
                  std::vector<uint8_t>& out);

/// Byte length encode_value would produce, without producing it.
uint64_t encoded_size(const Value& value, const FieldType& type);

/// Decodes one value at `offset`. `consumed` receives the encoded length.
/// Does not touch any deserialization counter; callers count column values.
Value decode_value(ByteInput& in, uint64_t offset, const FieldType& type,
                   uint64_t& consumed);

/// Length of the encoded value at `offset`, reading only length headers:
/// fixed-width types read nothing, variable-width types read their u32
/// prefixes (recursively where element sizes are not fixed).
uint64_t skip_value(ByteInput& in, uint64_t offset, const FieldType& type);

/// True iff `data` is well-formed UTF-8.
bool valid_utf8(std::span<const uint8_t> data);

}  // namespace colstore
