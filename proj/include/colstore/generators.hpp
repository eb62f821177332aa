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
#include <string>
#include <vector>

#include "colstore/schema.hpp"
#include "colstore/value.hpp"

namespace colstore {

struct Dataset {
  Schema schema;
  std::vector<Record> records;
};

// All generators are deterministic per seed.

/// 13-column benchmark records: 6 strings (str0..str5, lengths 20-40,
/// readable ASCII without tab/';'/'='/backslash), 6 int64s (int0..int5,
/// uniform in [1,10000]), and map0 with exactly 10 entries (random 4-char
/// keys, int64 values in [1,10000]).
Dataset generate_synthetic(uint64_t record_count, uint64_t seed);

/// Synthetic records with a 7-char marker token planted into str0 of exactly
/// round(match_fraction*record_count) records (scattered by seeded shuffle).
/// Predicates match on kSyntheticMatchToken. Used by the selectivity sweep.
Dataset generate_synthetic_with_matches(uint64_t record_count,
                                        double match_fraction, uint64_t seed);
inline constexpr std::string_view kSyntheticMatchToken = "XMATCHX";

/// Crawl-shaped records (url, srcUrl, fetchTime, inlink, metadata,
/// annotations, content). Exactly round(match_fraction*record_count) urls
/// contain "ibm.com/jp"; metadata always carries a "content-type" key drawn
/// from a small set plus 5-15 other entries from a limited key universe;
/// content is a content_bytes blob and dominates the record.
Dataset generate_crawl(uint64_t record_count, double match_fraction,
                       uint64_t content_bytes, uint64_t seed);
inline constexpr std::string_view kCrawlMatchPattern = "ibm.com/jp";

/// column_count all-string columns (col0..colN), each value exactly 30
/// random safe-ASCII chars; record count chosen so plain-encoded size is
/// about total_bytes.
Dataset generate_wide(uint32_t column_count, uint64_t total_bytes,
                      uint64_t seed);

enum class DeserKind { Int, Double, Map };
DeserKind deser_kind_from_name(std::string_view name);

/// Records of exactly 1000 plain-encoded bytes: a typed region holding about
/// typed_fraction*1000 bytes of packed int64s, doubles, or 4-entry maps
/// (field "typed"), and a bytes filler for the remainder (field "filler").
Dataset generate_deser_bench(uint64_t record_count, double typed_fraction,
                             DeserKind kind, uint64_t seed);

Schema synthetic_schema();
Schema crawl_schema();
Schema wide_schema(uint32_t column_count);
Schema deser_schema(DeserKind kind);

}  // namespace colstore
