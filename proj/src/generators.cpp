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

#include "colstore/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

#include "colstore/encoding.hpp"

namespace colstore {
namespace {

using Rng = std::mt19937_64;

uint64_t range(Rng& rng, uint64_t lo, uint64_t hi) {  // inclusive bounds
  return lo + rng() % (hi - lo + 1);
}

// Readable ASCII, excluding tab/';'/'='/backslash (TXT-hostile characters).
std::string safe_chars() {
  std::string chars;
  for (char c = 0x21; c <= 0x7E; ++c) {
    if (c == ';' || c == '=' || c == '\\') continue;
    chars += c;
  }
  return chars;
}

std::string random_string(Rng& rng, size_t len, const std::string& alphabet) {
  std::string s(len, ' ');
  for (char& c : s) c = alphabet[rng() % alphabet.size()];
  return s;
}

// Lowercase alnum plus url punctuation; safe inside TXT arrays (no commas).
const std::string kUrlChars = "abcdefghijklmnopqrstuvwxyz0123456789";

std::string random_url(Rng& rng) {
  std::string s = "http://www.";
  s += random_string(rng, range(rng, 4, 10), kUrlChars);
  s += ".com/";
  s += random_string(rng, range(rng, 3, 20), kUrlChars);
  return s;
}

std::string matching_url(Rng& rng) {
  return "http://www.ibm.com/jp/" +
         random_string(rng, range(rng, 3, 20), kUrlChars);
}

/// Indices of the exactly round(fraction*n) records selected as matches,
/// scattered uniformly (seeded partial shuffle).
std::vector<bool> match_flags(Rng& rng, uint64_t n, double fraction) {
  uint64_t k = static_cast<uint64_t>(std::llround(fraction * n));
  k = std::min(k, n);
  std::vector<uint32_t> idx(n);
  for (uint64_t i = 0; i < n; ++i) idx[i] = static_cast<uint32_t>(i);
  for (uint64_t i = 0; i < k; ++i) {
    uint64_t j = i + rng() % (n - i);
    std::swap(idx[i], idx[j]);
  }
  std::vector<bool> flags(n, false);
  for (uint64_t i = 0; i < k; ++i) flags[idx[i]] = true;
  return flags;
}

MapValue random_synthetic_map(Rng& rng, const std::string& alphabet) {
  MapValue m;
  std::unordered_set<std::string> seen;
  while (m.entries.size() < 10) {
    std::string key = random_string(rng, 4, alphabet);
    if (!seen.insert(key).second) continue;
    m.entries.push_back(MapEntry{
        std::move(key), Value(static_cast<int64_t>(range(rng, 1, 10000)))});
  }
  return m;
}

Dataset generate_synthetic_impl(uint64_t n, uint64_t seed,
                                const std::vector<bool>* matches) {
  Rng rng(seed);
  const std::string alphabet = safe_chars();
  Dataset out;
  out.schema = synthetic_schema();
  out.records.reserve(n);
  for (uint64_t r = 0; r < n; ++r) {
    Record rec;
    rec.fields.reserve(13);
    for (int i = 0; i < 6; ++i) {
      std::string s = random_string(rng, range(rng, 20, 40), alphabet);
      if (i == 0 && matches && (*matches)[r]) {
        size_t at = rng() % (s.size() - kSyntheticMatchToken.size() + 1);
        s.replace(at, kSyntheticMatchToken.size(), kSyntheticMatchToken);
      }
      rec.fields.emplace_back("str" + std::to_string(i), Value(std::move(s)));
    }
    for (int i = 0; i < 6; ++i) {
      rec.fields.emplace_back("int" + std::to_string(i),
                              Value(static_cast<int64_t>(range(rng, 1, 10000))));
    }
    rec.fields.emplace_back("map0", Value(random_synthetic_map(rng, alphabet)));
    out.records.push_back(std::move(rec));
  }
  return out;
}

const std::vector<std::string>& content_types() {
  static const std::vector<std::string> kTypes = {
      "text/html",       "text/plain",  "application/pdf",
      "application/xml", "image/png",   "text/css",
      "application/json", "application/xhtml+xml"};
  return kTypes;
}

const std::vector<std::string>& metadata_keys() {
  static const std::vector<std::string> kKeys = {
      "server",         "language",   "encoding",     "charset",
      "location",       "etag",       "expires",      "cache-control",
      "last-modified",  "content-length", "via",      "x-powered-by",
      "set-cookie",     "vary",       "age",          "pragma",
      "status",         "connection", "host",         "referer"};
  return kKeys;
}

const std::vector<std::string>& annotation_keys() {
  static const std::vector<std::string> kKeys = {
      "topic",    "lang-detect", "mime-detect", "pagerank",
      "spam-score", "category",  "entity",      "summary"};
  return kKeys;
}

}  // namespace

Schema synthetic_schema() {
  std::vector<Field> fields;
  for (int i = 0; i < 6; ++i) {
    fields.push_back(Field{"str" + std::to_string(i), FieldType::string()});
  }
  for (int i = 0; i < 6; ++i) {
    fields.push_back(Field{"int" + std::to_string(i), FieldType::int64()});
  }
  fields.push_back(Field{"map0", FieldType::map(FieldType::int64())});
  return Schema(std::move(fields));
}

Schema crawl_schema() {
  return Schema({
      Field{"url", FieldType::string()},
      Field{"srcUrl", FieldType::string()},
      Field{"fetchTime", FieldType::int64()},
      Field{"inlink", FieldType::array(FieldType::string())},
      Field{"metadata", FieldType::map(FieldType::string())},
      Field{"annotations", FieldType::map(FieldType::string())},
      Field{"content", FieldType::bytes()},
  });
}

Schema wide_schema(uint32_t column_count) {
  std::vector<Field> fields;
  fields.reserve(column_count);
  for (uint32_t i = 0; i < column_count; ++i) {
    fields.push_back(Field{"col" + std::to_string(i), FieldType::string()});
  }
  return Schema(std::move(fields));
}

Schema deser_schema(DeserKind kind) {
  FieldType element = kind == DeserKind::Int      ? FieldType::int64()
                      : kind == DeserKind::Double ? FieldType::float64()
                      : FieldType::map(FieldType::int64());
  return Schema({Field{"typed", FieldType::array(std::move(element))},
                 Field{"filler", FieldType::bytes()}});
}

Dataset generate_synthetic(uint64_t record_count, uint64_t seed) {
  return generate_synthetic_impl(record_count, seed, nullptr);
}

Dataset generate_synthetic_with_matches(uint64_t record_count,
                                        double match_fraction, uint64_t seed) {
  Rng flag_rng(seed ^ 0x9E3779B97F4A7C15ull);
  std::vector<bool> flags = match_flags(flag_rng, record_count, match_fraction);
  return generate_synthetic_impl(record_count, seed, &flags);
}

Dataset generate_crawl(uint64_t record_count, double match_fraction,
                       uint64_t content_bytes, uint64_t seed) {
  Rng rng(seed);
  Rng flag_rng(seed ^ 0xD1B54A32D192ED03ull);
  std::vector<bool> matches =
      match_flags(flag_rng, record_count, match_fraction);
  const std::string alphabet = safe_chars();

  Dataset out;
  out.schema = crawl_schema();
  out.records.reserve(record_count);
  for (uint64_t r = 0; r < record_count; ++r) {
    Record rec;
    rec.fields.reserve(7);
    rec.fields.emplace_back(
        "url", Value(matches[r] ? matching_url(rng) : random_url(rng)));
    rec.fields.emplace_back("srcUrl", Value(random_url(rng)));
    rec.fields.emplace_back(
        "fetchTime",
        Value(static_cast<int64_t>(range(rng, 1293840000000ull,
                                         1301616000000ull))));  // epoch ms
    ArrayValue inlinks;
    uint64_t n_links = range(rng, 0, 20);
    for (uint64_t i = 0; i < n_links; ++i) {
      inlinks.items.emplace_back(random_url(rng));
    }
    rec.fields.emplace_back("inlink", Value(std::move(inlinks)));

    MapValue metadata;
    metadata.entries.push_back(MapEntry{
        "content-type",
        Value(content_types()[rng() % content_types().size()])});
    uint64_t extra = range(rng, 5, 15);
    std::vector<uint32_t> key_order(metadata_keys().size());
    for (uint32_t i = 0; i < key_order.size(); ++i) key_order[i] = i;
    for (uint64_t i = 0; i < extra; ++i) {
      uint64_t j = i + rng() % (key_order.size() - i);
      std::swap(key_order[i], key_order[j]);
      metadata.entries.push_back(
          MapEntry{metadata_keys()[key_order[i]],
                   Value(random_string(rng, range(rng, 5, 15), alphabet))});
    }
    rec.fields.emplace_back("metadata", Value(std::move(metadata)));

    MapValue annotations;
    uint64_t n_ann = range(rng, 1, 5);
    std::vector<uint32_t> ann_order(annotation_keys().size());
    for (uint32_t i = 0; i < ann_order.size(); ++i) ann_order[i] = i;
    for (uint64_t i = 0; i < n_ann; ++i) {
      uint64_t j = i + rng() % (ann_order.size() - i);
      std::swap(ann_order[i], ann_order[j]);
      annotations.entries.push_back(
          MapEntry{annotation_keys()[ann_order[i]],
                   Value(random_string(rng, range(rng, 4, 12), alphabet))});
    }
    rec.fields.emplace_back("annotations", Value(std::move(annotations)));

    // Content drawn from a 64-symbol alphabet: bulky but mildly compressible,
    // like markup.
    Bytes content(content_bytes);
    for (uint8_t& b : content) b = static_cast<uint8_t>(0x20 + rng() % 64);
    rec.fields.emplace_back("content", Value(std::move(content)));
    out.records.push_back(std::move(rec));
  }
  return out;
}

Dataset generate_wide(uint32_t column_count, uint64_t total_bytes,
                      uint64_t seed) {
  if (column_count < 1) throw SchemaError("column_count must be >= 1");
  Rng rng(seed);
  const std::string alphabet = safe_chars();
  Dataset out;
  out.schema = wide_schema(column_count);
  uint64_t record_bytes = static_cast<uint64_t>(column_count) * 34;  // 4+30
  uint64_t records = std::max<uint64_t>(1, total_bytes / record_bytes);
  out.records.reserve(records);
  for (uint64_t r = 0; r < records; ++r) {
    Record rec;
    rec.fields.reserve(column_count);
    for (uint32_t c = 0; c < column_count; ++c) {
      rec.fields.emplace_back("col" + std::to_string(c),
                              Value(random_string(rng, 30, alphabet)));
    }
    out.records.push_back(std::move(rec));
  }
  return out;
}

DeserKind deser_kind_from_name(std::string_view name) {
  if (name == "int") return DeserKind::Int;
  if (name == "double") return DeserKind::Double;
  if (name == "map") return DeserKind::Map;
  throw SchemaError("unknown deser kind '" + std::string(name) +
                    "' (expected int|double|map)");
}

Dataset generate_deser_bench(uint64_t record_count, double typed_fraction,
                             DeserKind kind, uint64_t seed) {
  if (typed_fraction < 0 || typed_fraction > 1) {
    throw SchemaError("typed_fraction must be in [0,1]");
  }
  Rng rng(seed);
  const std::string alphabet = safe_chars();
  Dataset out;
  out.schema = deser_schema(kind);

  // Records are exactly 1000 plain-encoded bytes:
  //   int/double: typed = 4 + 8k, filler = 4 + (992 - 8k), k = round(f*124)
  //   map: one 4-entry map of 4-char keys costs 68 bytes; m = round(f*14)
  uint64_t units;
  uint64_t unit_bytes;
  if (kind == DeserKind::Map) {
    units = static_cast<uint64_t>(std::llround(typed_fraction * 14));
    unit_bytes = 68;
  } else {
    units = static_cast<uint64_t>(std::llround(typed_fraction * 124));
    unit_bytes = 8;
  }
  uint64_t filler_len = 992 - units * unit_bytes;

  out.records.reserve(record_count);
  for (uint64_t r = 0; r < record_count; ++r) {
    ArrayValue typed;
    typed.items.reserve(units);
    for (uint64_t i = 0; i < units; ++i) {
      switch (kind) {
        case DeserKind::Int:
          typed.items.emplace_back(static_cast<int64_t>(rng()));
          break;
        case DeserKind::Double:
          typed.items.emplace_back(
              std::generate_canonical<double, 53>(rng));
          break;
        case DeserKind::Map: {
          MapValue m;
          std::unordered_set<std::string> seen;
          while (m.entries.size() < 4) {
            std::string key = random_string(rng, 4, alphabet);
            if (!seen.insert(key).second) continue;
            m.entries.push_back(
                MapEntry{std::move(key), Value(static_cast<int64_t>(rng()))});
          }
          typed.items.emplace_back(std::move(m));
          break;
        }
      }
    }
    Bytes filler(filler_len);
    for (uint8_t& b : filler) b = static_cast<uint8_t>(rng());
    Record rec;
    rec.fields.emplace_back("typed", Value(std::move(typed)));
    rec.fields.emplace_back("filler", Value(std::move(filler)));
    out.records.push_back(std::move(rec));
  }
  return out;
}

}  // namespace colstore
