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
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "colstore/column_format.hpp"
#include "colstore/record_stream.hpp"

namespace colstore {

// Simulated replicated block store. Files are chopped into fixed-size blocks
// replicated onto `replication_factor` distinct nodes. The column placement
// policy (Cpp) keys off the split-directory naming convention: the first
// block of a split-directory is placed like the default policy, and every
// other block of every file in that directory receives the identical replica
// set. Files outside the convention always use the default policy.

struct ClusterConfig {
  uint32_t node_count = 0;
  uint32_t map_slots_per_node = 6;
  uint32_t replication_factor = 3;
  uint64_t block_bytes = 64ull << 20;
  uint64_t rng_seed = 0;
};

/// Parses key=value lines (node_count, map_slots_per_node,
/// replication_factor, block_bytes, rng_seed); '#' starts a comment.
ClusterConfig parse_cluster_config(const std::filesystem::path& file);

enum class PlacementPolicy { Default, Cpp };

PlacementPolicy placement_from_name(std::string_view name);
std::string_view placement_name(PlacementPolicy policy);

struct BlockPlacement {
  uint64_t length = 0;
  std::vector<uint32_t> replicas;  // distinct node ids
};

struct SimFile {
  std::string path;  // normalized
  uint64_t length = 0;
};

struct BlockMap {
  ClusterConfig config;
  std::map<std::string, std::vector<BlockPlacement>> files;

  const std::vector<BlockPlacement>& blocks_of(const std::string& path) const;
};

/// Lists every regular file under `dataset` (any format) with its length.
std::vector<SimFile> dataset_files(const std::filesystem::path& dataset);

/// If `path` sits directly inside a split-directory (parent named s<k>),
/// returns that directory's normalized path.
std::optional<std::string> split_dir_of(const std::string& path);

BlockMap place(const std::vector<SimFile>& files, PlacementPolicy policy,
               const ClusterConfig& config);

/// True iff all blocks of all files in the split-directory share one
/// identical replica set.
bool split_fully_colocated(const BlockMap& map, const SplitInfo& split);

struct TaskAssignment {
  uint32_t split_index = 0;
  uint32_t node = 0;
  uint32_t wave = 0;
  bool fully_local = false;  // node hosts every block the projection needs
};

/// Greedy locality-first scheduling in waves of node_count*map_slots_per_node
/// tasks: each split goes to the least-loaded free node hosting all blocks of
/// its projected column files, falling back to the least-loaded free node.
std::vector<TaskAssignment> schedule(const std::vector<SplitInfo>& splits,
                                     const Projection& projection,
                                     const BlockMap& map,
                                     const ClusterConfig& config);

struct TaskLocality {
  uint32_t split_index = 0;
  uint32_t node = 0;
  uint64_t local_bytes = 0;
  uint64_t remote_bytes = 0;
};

struct LocalityReport {
  std::vector<TaskLocality> tasks;
  uint64_t total_local_bytes = 0;
  uint64_t total_remote_bytes = 0;
  double fraction_fully_colocated = 0.0;  // identical replica sets
  double fraction_common_node = 0.0;      // some node holds every block

  std::string to_csv() const;
  std::string to_json() const;
};

/// Byte-locality accounting for an assignment: block bytes whose replicas
/// include the assigned node count as local, the rest as remote.
LocalityReport simulate_scan(const std::vector<TaskAssignment>& assignment,
                             const std::vector<SplitInfo>& splits,
                             const Projection& projection,
                             const BlockMap& map);

/// Locality map for one task, to tag real reads local/remote during a scan.
BlockLocalityMap locality_for_task(const TaskAssignment& task,
                                   const SplitInfo& split,
                                   const Projection& projection,
                                   const BlockMap& map);

struct ParallelismBound {
  uint64_t max_useful_tasks = 0;
  uint64_t total_slots = 0;
  bool full_parallelism = false;
  uint64_t dataset_bytes = 0;
  /// Dataset size at which full parallelism is reached: slots x columns x
  /// block for the split-directory format, slots x rowgroup bytes for PAX.
  uint64_t bytes_needed_for_full = 0;
};

ParallelismBound cif_parallelism_bound(const std::filesystem::path& dataset,
                                       const ClusterConfig& config);
ParallelismBound pax_parallelism_bound(const std::filesystem::path& data_file,
                                       uint64_t rowgroup_bytes,
                                       const ClusterConfig& config);

}  // namespace colstore
