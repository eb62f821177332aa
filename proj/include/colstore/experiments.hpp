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

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "colstore/metrics.hpp"

namespace colstore {

/// Knobs for the built-in experiments. Every field has a desk-scale default;
/// a JSON spec file overrides the keys it names. The spec (with defaults
/// applied) is embedded in every report for reproducibility.
struct ExperimentSpec {
  std::string experiment;  // scan-matrix|selectivity|rowgroup|width|deser|
                           // placement|load-times
  uint64_t seed = 42;
  uint32_t repetitions = 3;
  uint32_t workers = 1;

  // dataset sizing
  uint64_t synthetic_records = 250000;  // ~100 MiB plain-encoded
  uint64_t crawl_records = 48000;       // ~200 MiB at 4 KiB content
  double crawl_match_fraction = 0.06;
  uint64_t crawl_content_bytes = 4096;
  uint64_t wide_records = 25000;  // fixed per width; totals grow with columns
  uint64_t deser_records = 50000;  // 50 MB at 1000 B/record

  // format parameters
  uint64_t split_target_bytes = 16ull << 20;
  uint64_t transfer_bytes = 128 * 1024;
  std::vector<uint64_t> pax_rowgroup_bytes = {1ull << 20, 4ull << 20,
                                              16ull << 20};
  std::vector<uint32_t> selectivities_pct = {1, 5, 10, 25, 50, 75, 100};
  std::vector<uint32_t> wide_columns = {20, 40, 80};
  std::vector<double> deser_fractions = {0.0, 0.25, 0.5, 0.75, 1.0};

  // placement experiment
  uint32_t nodes = 20;
  uint32_t slots = 6;
  uint32_t replication = 3;
  uint64_t block_bytes = 1ull << 20;
  uint64_t placement_split_bytes = 1ull << 20;
  uint64_t monte_carlo_trials = 20000;

  static ExperimentSpec from_json_file(const std::filesystem::path& file,
                                       const std::string& experiment);
  std::string to_json() const;
};

/// One measured run. extra carries experiment-specific parameters
/// (selectivity, rowgroup_bytes, columns, f, ...).
struct ReportRow {
  std::string case_label;
  std::string format;
  std::string layout;
  std::string projection;
  std::string mode;
  std::string metering;
  uint64_t records = 0;
  ScanMetrics metrics;
  std::map<std::string, std::string> extra;
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<ReportRow> rows;

  std::string to_csv() const;
  std::string to_json() const;
};

/// Runs the named experiment, staging datasets under report_dir/work and
/// writing <experiment>.csv and <experiment>.json into report_dir.
ExperimentReport run_experiment(const ExperimentSpec& spec,
                                const std::filesystem::path& report_dir);

}  // namespace colstore
