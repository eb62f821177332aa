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

#include "colstore/cluster.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"

#include "colstore/row_formats.hpp"

namespace colstore {
namespace fs = std::filesystem;

namespace {

bool is_split_dir_name(const std::string& name) {
  if (name.size() < 2 || name[0] != 's') return false;
  return std::all_of(name.begin() + 1, name.end(),
                     [](char c) { return c >= '0' && c <= '9'; });
}

/// replication_factor distinct nodes, uniform, deterministic per rng state.
std::vector<uint32_t> draw_replicas(std::mt19937_64& rng,
                                    const ClusterConfig& cfg) {
  std::vector<uint32_t> nodes(cfg.node_count);
  for (uint32_t i = 0; i < cfg.node_count; ++i) nodes[i] = i;
  std::vector<uint32_t> out;
  out.reserve(cfg.replication_factor);
  for (uint32_t i = 0; i < cfg.replication_factor; ++i) {
    uint64_t j = i + rng() % (cfg.node_count - i);
    std::swap(nodes[i], nodes[j]);
    out.push_back(nodes[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

uint64_t block_count(uint64_t length, uint64_t block_bytes) {
  return length == 0 ? 0 : (length + block_bytes - 1) / block_bytes;
}

std::vector<BlockPlacement> chop(uint64_t length, uint64_t block_bytes) {
  std::vector<BlockPlacement> blocks;
  uint64_t n = block_count(length, block_bytes);
  blocks.reserve(n);
  for (uint64_t i = 0; i < n; ++i) {
    BlockPlacement b;
    b.length = std::min(block_bytes, length - i * block_bytes);
    blocks.push_back(std::move(b));
  }
  return blocks;
}

bool contains(const std::vector<uint32_t>& replicas, uint32_t node) {
  return std::find(replicas.begin(), replicas.end(), node) != replicas.end();
}

/// Column file paths a projection touches in one split.
std::vector<std::string> projected_paths(const SplitInfo& split,
                                         const Projection& projection) {
  std::vector<std::string> out;
  for (size_t ord : projection.resolve(split.schema)) {
    out.push_back(normalize_path(split.column_path(ord)));
  }
  return out;
}

/// Nodes hosting replicas of every block of every projected file.
std::set<uint32_t> eligible_nodes(const SplitInfo& split,
                                  const Projection& projection,
                                  const BlockMap& map) {
  std::set<uint32_t> eligible;
  bool first = true;
  for (const std::string& path : projected_paths(split, projection)) {
    for (const BlockPlacement& b : map.blocks_of(path)) {
      if (first) {
        eligible.insert(b.replicas.begin(), b.replicas.end());
        first = false;
      } else {
        std::set<uint32_t> keep;
        for (uint32_t n : b.replicas) {
          if (eligible.count(n)) keep.insert(n);
        }
        eligible.swap(keep);
      }
    }
  }
  return eligible;
}

}  // namespace

ClusterConfig parse_cluster_config(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open cluster config: " + file.string());
  ClusterConfig cfg;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    size_t eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        throw ParseError("cluster config line " + std::to_string(line_no) +
                         ": expected key=value");
      }
      continue;
    }
    auto trim = [](std::string s) {
      size_t a = s.find_first_not_of(" \t\r");
      size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    uint64_t v = 0;
    auto [p, ec] =
        std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || p != value.data() + value.size()) {
      throw ParseError("cluster config line " + std::to_string(line_no) +
                       ": bad number '" + value + "'");
    }
    if (key == "node_count" || key == "nodes") {
      cfg.node_count = static_cast<uint32_t>(v);
    } else if (key == "map_slots_per_node" || key == "slots") {
      cfg.map_slots_per_node = static_cast<uint32_t>(v);
    } else if (key == "replication_factor" || key == "replication") {
      cfg.replication_factor = static_cast<uint32_t>(v);
    } else if (key == "block_bytes") {
      cfg.block_bytes = v;
    } else if (key == "rng_seed" || key == "seed") {
      cfg.rng_seed = v;
    } else {
      throw ParseError("cluster config line " + std::to_string(line_no) +
                       ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

PlacementPolicy placement_from_name(std::string_view name) {
  if (name == "default") return PlacementPolicy::Default;
  if (name == "cpp") return PlacementPolicy::Cpp;
  throw SchemaError("unknown placement policy '" + std::string(name) + "'");
}

std::string_view placement_name(PlacementPolicy policy) {
  return policy == PlacementPolicy::Default ? "default" : "cpp";
}

const std::vector<BlockPlacement>& BlockMap::blocks_of(
    const std::string& path) const {
  auto it = files.find(path);
  if (it == files.end()) {
    throw InvariantError("block map does not cover file: " + path);
  }
  return it->second;
}

std::vector<SimFile> dataset_files(const fs::path& dataset) {
  std::vector<SimFile> out;
  for (const auto& entry : fs::recursive_directory_iterator(dataset)) {
    if (!entry.is_regular_file()) continue;
    out.push_back(SimFile{normalize_path(entry.path()),
                          static_cast<uint64_t>(entry.file_size())});
  }
  std::sort(out.begin(), out.end(),
            [](const SimFile& a, const SimFile& b) { return a.path < b.path; });
  return out;
}

std::optional<std::string> split_dir_of(const std::string& path) {
  fs::path p(path);
  fs::path parent = p.parent_path();
  if (parent.empty()) return std::nullopt;
  if (!is_split_dir_name(parent.filename().string())) return std::nullopt;
  return parent.generic_string();
}

BlockMap place(const std::vector<SimFile>& files, PlacementPolicy policy,
               const ClusterConfig& config) {
  if (config.node_count == 0) {
    throw SchemaError("empty cluster");
  }
  if (config.replication_factor > config.node_count) {
    throw SchemaError("replication_factor exceeds node_count");
  }
  std::vector<SimFile> sorted = files;
  std::sort(sorted.begin(), sorted.end(),
            [](const SimFile& a, const SimFile& b) { return a.path < b.path; });

  std::mt19937_64 rng(config.rng_seed);
  BlockMap map;
  map.config = config;
  // Replica set shared by a split-directory under Cpp, keyed by directory.
  std::map<std::string, std::vector<uint32_t>> dir_replicas;

  for (const SimFile& f : sorted) {
    std::vector<BlockPlacement> blocks = chop(f.length, config.block_bytes);
    std::optional<std::string> dir =
        policy == PlacementPolicy::Cpp ? split_dir_of(f.path) : std::nullopt;
    for (BlockPlacement& b : blocks) {
      if (dir) {
        auto it = dir_replicas.find(*dir);
        if (it == dir_replicas.end()) {
          // First block of the split-directory: default placement; the rest
          // of the directory inherits the set.
          it = dir_replicas.emplace(*dir, draw_replicas(rng, config)).first;
        }
        b.replicas = it->second;
      } else {
        b.replicas = draw_replicas(rng, config);
      }
    }
    map.files.emplace(f.path, std::move(blocks));
  }
  return map;
}

bool split_fully_colocated(const BlockMap& map, const SplitInfo& split) {
  std::optional<std::vector<uint32_t>> common;
  std::string prefix = normalize_path(split.dir);
  for (const auto& [path, blocks] : map.files) {
    if (path.size() <= prefix.size() ||
        path.compare(0, prefix.size(), prefix) != 0 ||
        path[prefix.size()] != '/') {
      continue;
    }
    for (const BlockPlacement& b : blocks) {
      if (!common) {
        common = b.replicas;
      } else if (*common != b.replicas) {
        return false;
      }
    }
  }
  return common.has_value();
}

std::vector<TaskAssignment> schedule(const std::vector<SplitInfo>& splits,
                                     const Projection& projection,
                                     const BlockMap& map,
                                     const ClusterConfig& config) {
  if (splits.empty()) throw SchemaError("no splits to schedule");
  if (config.node_count == 0) throw SchemaError("empty cluster");

  std::vector<TaskAssignment> out;
  out.reserve(splits.size());
  std::vector<uint32_t> load(config.node_count, 0);
  uint32_t wave = 0;
  uint64_t wave_capacity =
      static_cast<uint64_t>(config.node_count) * config.map_slots_per_node;
  uint64_t wave_used = 0;

  for (const SplitInfo& split : splits) {
    if (wave_used == wave_capacity) {
      ++wave;
      wave_used = 0;
      std::fill(load.begin(), load.end(), 0);
    }
    std::set<uint32_t> eligible = eligible_nodes(split, projection, map);

    auto pick_least_loaded = [&](auto&& allowed) -> std::optional<uint32_t> {
      std::optional<uint32_t> best;
      for (uint32_t n = 0; n < config.node_count; ++n) {
        if (load[n] >= config.map_slots_per_node) continue;
        if (!allowed(n)) continue;
        if (!best || load[n] < load[*best]) best = n;
      }
      return best;
    };

    std::optional<uint32_t> node =
        pick_least_loaded([&](uint32_t n) { return eligible.count(n) > 0; });
    if (!node) {
      node = pick_least_loaded([](uint32_t) { return true; });
    }
    // wave_used < capacity guarantees a free slot exists
    TaskAssignment task;
    task.split_index = split.index;
    task.node = *node;
    task.wave = wave;
    task.fully_local = eligible.count(*node) > 0;
    ++load[*node];
    ++wave_used;
    out.push_back(task);
  }
  return out;
}

LocalityReport simulate_scan(const std::vector<TaskAssignment>& assignment,
                             const std::vector<SplitInfo>& splits,
                             const Projection& projection,
                             const BlockMap& map) {
  LocalityReport report;
  std::map<uint32_t, const SplitInfo*> by_index;
  for (const SplitInfo& s : splits) by_index[s.index] = &s;

  for (const TaskAssignment& task : assignment) {
    const SplitInfo& split = *by_index.at(task.split_index);
    TaskLocality loc;
    loc.split_index = task.split_index;
    loc.node = task.node;
    for (const std::string& path : projected_paths(split, projection)) {
      for (const BlockPlacement& b : map.blocks_of(path)) {
        if (contains(b.replicas, task.node)) {
          loc.local_bytes += b.length;
        } else {
          loc.remote_bytes += b.length;
        }
      }
    }
    report.total_local_bytes += loc.local_bytes;
    report.total_remote_bytes += loc.remote_bytes;
    report.tasks.push_back(loc);
  }

  uint64_t colocated = 0;
  uint64_t common_node = 0;
  for (const SplitInfo& split : splits) {
    if (split_fully_colocated(map, split)) ++colocated;
    if (!eligible_nodes(split, projection, map).empty()) ++common_node;
  }
  if (!splits.empty()) {
    report.fraction_fully_colocated =
        static_cast<double>(colocated) / static_cast<double>(splits.size());
    report.fraction_common_node =
        static_cast<double>(common_node) / static_cast<double>(splits.size());
  }
  return report;
}

BlockLocalityMap locality_for_task(const TaskAssignment& task,
                                   const SplitInfo& split,
                                   const Projection& projection,
                                   const BlockMap& map) {
  BlockLocalityMap out;
  out.block_bytes = map.config.block_bytes;
  for (const std::string& path : projected_paths(split, projection)) {
    std::vector<bool> local;
    for (const BlockPlacement& b : map.blocks_of(path)) {
      local.push_back(contains(b.replicas, task.node));
    }
    out.per_file.emplace(path, std::move(local));
  }
  return out;
}

std::string LocalityReport::to_csv() const {
  std::ostringstream os;
  os << "split_index,node,local_bytes,remote_bytes\n";
  for (const TaskLocality& t : tasks) {
    os << t.split_index << ',' << t.node << ',' << t.local_bytes << ','
       << t.remote_bytes << '\n';
  }
  return os.str();
}

std::string LocalityReport::to_json() const {
  nlohmann::json j;
  j["total_local_bytes"] = total_local_bytes;
  j["total_remote_bytes"] = total_remote_bytes;
  j["fraction_fully_colocated"] = fraction_fully_colocated;
  j["fraction_common_node"] = fraction_common_node;
  j["tasks"] = nlohmann::json::array();
  for (const TaskLocality& t : tasks) {
    j["tasks"].push_back({{"split_index", t.split_index},
                          {"node", t.node},
                          {"local_bytes", t.local_bytes},
                          {"remote_bytes", t.remote_bytes}});
  }
  return j.dump(2);
}

ParallelismBound cif_parallelism_bound(const fs::path& dataset,
                                       const ClusterConfig& config) {
  std::vector<SplitInfo> splits = cif_splits(dataset);
  ParallelismBound b;
  b.max_useful_tasks = splits.size();
  b.total_slots =
      static_cast<uint64_t>(config.node_count) * config.map_slots_per_node;
  b.full_parallelism = b.max_useful_tasks >= b.total_slots;
  uint64_t columns = splits.empty() ? 0 : splits.front().schema.field_count();
  for (const SimFile& f : dataset_files(dataset)) b.dataset_bytes += f.length;
  b.bytes_needed_for_full = b.total_slots * columns * config.block_bytes;
  return b;
}

ParallelismBound pax_parallelism_bound(const fs::path& data_file,
                                       uint64_t rowgroup_bytes,
                                       const ClusterConfig& config) {
  ParallelismBound b;
  b.max_useful_tasks = pax_rowgroup_count(data_file);
  b.total_slots =
      static_cast<uint64_t>(config.node_count) * config.map_slots_per_node;
  b.full_parallelism = b.max_useful_tasks >= b.total_slots;
  b.dataset_bytes = fs::file_size(data_file);
  b.bytes_needed_for_full = b.total_slots * rowgroup_bytes;
  return b;
}

}  // namespace colstore
