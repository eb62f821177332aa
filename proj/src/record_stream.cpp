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

#include "colstore/record_stream.hpp"

#include <unordered_set>

namespace colstore {

std::string_view scan_mode_name(ScanMode mode) {
  return mode == ScanMode::Eager ? "eager" : "lazy";
}

std::vector<size_t> Projection::resolve(const Schema& schema) const {
  std::vector<size_t> ordinals;
  if (columns.empty()) {
    ordinals.resize(schema.field_count());
    for (size_t i = 0; i < ordinals.size(); ++i) ordinals[i] = i;
    return ordinals;
  }
  std::unordered_set<std::string_view> seen;
  ordinals.reserve(columns.size());
  for (const std::string& name : columns) {
    if (!seen.insert(name).second) {
      throw SchemaError("duplicate column '" + name + "' in projection");
    }
    auto idx = schema.index_of(name);
    if (!idx) {
      throw SchemaError("projected column '" + name + "' not in schema");
    }
    ordinals.push_back(*idx);
  }
  return ordinals;
}

Projection Projection::parse_csv(std::string_view csv) {
  Projection p;
  size_t start = 0;
  while (start <= csv.size() && !csv.empty()) {
    size_t comma = csv.find(',', start);
    std::string_view item = comma == std::string_view::npos
                                ? csv.substr(start)
                                : csv.substr(start, comma - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) p.columns.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return p;
}

std::string Projection::to_string() const {
  if (columns.empty()) return "*";
  std::string out;
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  return out;
}

std::vector<Record> materialize_all(RecordStream& stream,
                                    const std::vector<std::string>& fields) {
  std::vector<Record> out;
  while (stream.next()) {
    RecordView& view = stream.record();
    Record r;
    r.fields.reserve(fields.size());
    for (const std::string& f : fields) {
      r.fields.emplace_back(f, view.get(f));
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::shared_ptr<MeteredSource> ScanContext::open(
    const std::filesystem::path& path) {
  auto region = MappedFileRegion::open(path);
  auto source = std::make_shared<MeteredSource>(region, metering, metrics);
  std::string key = normalize_path(path);
  if (locality) {
    auto it = locality->per_file.find(key);
    if (it != locality->per_file.end()) {
      source->set_locality(locality->block_bytes, it->second);
    }
  }
  opened_files.push_back(std::move(key));
  return source;
}

uint64_t* ScanContext::deser_counter(const std::string& column) {
  if (metrics) return &metrics->values_deserialized[column];
  return &own_deser_[column];
}

uint64_t* ScanContext::blocks_counter() {
  if (metrics) return &metrics->blocks_decompressed;
  return &own_blocks_;
}

}  // namespace colstore
