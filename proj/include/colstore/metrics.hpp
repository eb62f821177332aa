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
#include <map>
#include <string>

namespace colstore {

/// Counters collected during a scan or load. Each worker owns a private
/// instance; merge is component-wise addition after workers finish.
struct ScanMetrics {
  uint64_t bytes_read_local = 0;
  uint64_t bytes_read_remote = 0;
  uint64_t transfers = 0;
  uint64_t blocks_decompressed = 0;
  uint64_t records_emitted = 0;
  std::map<std::string, uint64_t> values_deserialized;  // per column name
  double wall_time_s = 0.0;
  double load_time_s = 0.0;

  uint64_t bytes_read_total() const {
    return bytes_read_local + bytes_read_remote;
  }
  uint64_t values_deserialized_total() const {
    uint64_t n = 0;
    for (const auto& [_, c] : values_deserialized) n += c;
    return n;
  }
  uint64_t deserialized(const std::string& column) const {
    auto it = values_deserialized.find(column);
    return it == values_deserialized.end() ? 0 : it->second;
  }

  void merge(const ScanMetrics& other) {
    bytes_read_local += other.bytes_read_local;
    bytes_read_remote += other.bytes_read_remote;
    transfers += other.transfers;
    blocks_decompressed += other.blocks_decompressed;
    records_emitted += other.records_emitted;
    for (const auto& [col, n] : other.values_deserialized) {
      values_deserialized[col] += n;
    }
    wall_time_s += other.wall_time_s;
    load_time_s += other.load_time_s;
  }
};

}  // namespace colstore
