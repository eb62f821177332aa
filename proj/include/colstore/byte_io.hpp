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
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "colstore/errors.hpp"
#include "colstore/metrics.hpp"

namespace colstore {

// ---------------------------------------------------------------------------
// Little-endian scalar helpers. All on-disk integers are little-endian.
// ---------------------------------------------------------------------------

inline void put_u16(std::vector<uint8_t>& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v));
  out.push_back(static_cast<uint8_t>(v >> 8));
}
inline void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}
inline void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}
inline uint16_t get_u16(const uint8_t* p) {
  return static_cast<uint16_t>(p[0]) | static_cast<uint16_t>(p[1]) << 8;
}
inline uint32_t get_u32(const uint8_t* p) {
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(p[i]) << (8 * i);
  return v;
}
inline uint64_t get_u64(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
  return v;
}

// ---------------------------------------------------------------------------
// Byte regions: random-access, immutable byte ranges (file or memory).
// ---------------------------------------------------------------------------

class ByteRegion {
 public:
  virtual ~ByteRegion() = default;
  virtual uint64_t size() const = 0;
  virtual void read_at(uint64_t offset, std::span<uint8_t> out) const = 0;
};

class MemoryRegion : public ByteRegion {
 public:
  explicit MemoryRegion(std::vector<uint8_t> data) : data_(std::move(data)) {}
  uint64_t size() const override { return data_.size(); }
  void read_at(uint64_t offset, std::span<uint8_t> out) const override {
    std::memcpy(out.data(), data_.data() + offset, out.size());
  }

 private:
  std::vector<uint8_t> data_;
};

/// Read-only memory-mapped file.
class MappedFileRegion : public ByteRegion {
 public:
  static std::shared_ptr<MappedFileRegion> open(
      const std::filesystem::path& path);
  ~MappedFileRegion() override;
  MappedFileRegion(const MappedFileRegion&) = delete;
  MappedFileRegion& operator=(const MappedFileRegion&) = delete;

  uint64_t size() const override { return size_; }
  void read_at(uint64_t offset, std::span<uint8_t> out) const override {
    std::memcpy(out.data(), data_ + offset, out.size());
  }

 private:
  MappedFileRegion(const uint8_t* data, uint64_t size)
      : data_(data), size_(size) {}
  const uint8_t* data_;
  uint64_t size_;
};

// ---------------------------------------------------------------------------
// ByteInput: the minimal read interface decode/skip operate on. Metered for
// real scans, unmetered for decompressed in-memory buffers.
// ---------------------------------------------------------------------------

class ByteInput {
 public:
  virtual ~ByteInput() = default;
  virtual uint64_t size() const = 0;
  virtual void read(uint64_t offset, std::span<uint8_t> out) = 0;

  uint8_t read_u8(uint64_t offset) {
    uint8_t b;
    read(offset, {&b, 1});
    return b;
  }
  uint16_t read_u16(uint64_t offset) {
    uint8_t b[2];
    read(offset, b);
    return get_u16(b);
  }
  uint32_t read_u32(uint64_t offset) {
    uint8_t b[4];
    read(offset, b);
    return get_u32(b);
  }
  uint64_t read_u64(uint64_t offset) {
    uint8_t b[8];
    read(offset, b);
    return get_u64(b);
  }
  std::vector<uint8_t> read_bytes(uint64_t offset, uint64_t len) {
    std::vector<uint8_t> buf(len);
    read(offset, buf);
    return buf;
  }
};

/// Unmetered view over an in-memory buffer (decompressed block contents).
class SpanInput : public ByteInput {
 public:
  explicit SpanInput(std::span<const uint8_t> data) : data_(data) {}
  uint64_t size() const override { return data_.size(); }
  void read(uint64_t offset, std::span<uint8_t> out) override {
    if (offset + out.size() > data_.size()) {
      throw CorruptionError("truncated read in decompressed block");
    }
    std::memcpy(out.data(), data_.data() + offset, out.size());
  }

 private:
  std::span<const uint8_t> data_;
};

// ---------------------------------------------------------------------------
// Metering
// ---------------------------------------------------------------------------

enum class MeterMode : uint8_t {
  Exact,     // counts bytes actually requested
  Transfer,  // rounds to transfer-size windows, each window charged once
};

struct MeterConfig {
  MeterMode mode = MeterMode::Exact;
  uint64_t transfer_bytes = 128 * 1024;
};

/// Counts I/O against a ByteRegion. Owned by exactly one cursor at a time.
/// In Transfer mode every touched transfer-aligned window is charged one full
/// transfer_bytes unit, once per scan pass. Reads may be split between local
/// and remote byte counters by an optional per-block locality vector (set by
/// the cluster simulator).
class MeteredSource : public ByteInput {
 public:
  MeteredSource(std::shared_ptr<const ByteRegion> region, MeterConfig config,
                ScanMetrics* metrics = nullptr)
      : region_(std::move(region)), config_(config), metrics_(metrics) {}
  ~MeteredSource() override { flush(); }
  MeteredSource(const MeteredSource&) = delete;
  MeteredSource& operator=(const MeteredSource&) = delete;

  uint64_t size() const override { return region_->size(); }

  void read(uint64_t offset, std::span<uint8_t> out) override {
    if (out.empty()) return;
    if (offset + out.size() > region_->size()) {
      throw CorruptionError("read past end of source (offset " +
                            std::to_string(offset) + " + " +
                            std::to_string(out.size()) + " > " +
                            std::to_string(region_->size()) + ")");
    }
    charge(offset, out.size());
    region_->read_at(offset, out);
  }

  void set_locality(uint64_t block_bytes, std::vector<bool> block_is_local) {
    block_bytes_ = block_bytes;
    block_local_ = std::move(block_is_local);
  }

  uint64_t bytes_read() const { return bytes_local_ + bytes_remote_; }
  uint64_t bytes_read_local() const { return bytes_local_; }
  uint64_t bytes_read_remote() const { return bytes_remote_; }
  uint64_t transfers() const { return transfers_; }

  /// Adds this source's counters to the attached metrics; called once
  /// (automatically at destruction).
  void flush() {
    if (metrics_) {
      metrics_->bytes_read_local += bytes_local_;
      metrics_->bytes_read_remote += bytes_remote_;
      metrics_->transfers += transfers_;
      metrics_ = nullptr;
    }
  }

 private:
  void charge(uint64_t offset, uint64_t len);
  void apportion(uint64_t offset, uint64_t len);

  std::shared_ptr<const ByteRegion> region_;
  MeterConfig config_;
  ScanMetrics* metrics_;
  uint64_t bytes_local_ = 0;
  uint64_t bytes_remote_ = 0;
  uint64_t transfers_ = 0;
  std::unordered_set<uint64_t> touched_windows_;
  uint64_t block_bytes_ = 0;          // 0 => everything local
  std::vector<bool> block_local_;
};

// ---------------------------------------------------------------------------
// Sinks
// ---------------------------------------------------------------------------

/// Buffered append-only file writer with a byte counter.
class FileSink {
 public:
  explicit FileSink(const std::filesystem::path& path);
  ~FileSink();
  FileSink(const FileSink&) = delete;
  FileSink& operator=(const FileSink&) = delete;

  void append(std::span<const uint8_t> data);
  void append(const std::vector<uint8_t>& data) {
    append(std::span<const uint8_t>(data.data(), data.size()));
  }
  void write_u8(uint8_t v) { append({&v, 1}); }
  void write_u32(uint32_t v);
  void write_u64(uint64_t v);

  uint64_t bytes_written() const { return bytes_written_; }
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  uint64_t bytes_written_ = 0;
};

/// Reads `path` fully into memory (small control files only).
std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path);

/// Normalized absolute path string; the key used by block maps and locality
/// lookups.
std::string normalize_path(const std::filesystem::path& p);

}  // namespace colstore
