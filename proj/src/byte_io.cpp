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

#include "colstore/byte_io.hpp"

#include <fcntl.h>
#include <sys/mman.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>

namespace colstore {

std::shared_ptr<MappedFileRegion> MappedFileRegion::open(
    const std::filesystem::path& path) {
  int fd = ::open(path.c_str(), O_RDONLY);
  if (fd < 0) {
    throw IoError("cannot open file: " + path.string());
  }
  struct stat st{};
  if (::fstat(fd, &st) != 0) {
    ::close(fd);
    throw IoError("cannot stat file: " + path.string());
  }
  uint64_t size = static_cast<uint64_t>(st.st_size);
  const uint8_t* data = nullptr;
  if (size > 0) {
    void* map = ::mmap(nullptr, size, PROT_READ, MAP_PRIVATE, fd, 0);
    if (map == MAP_FAILED) {
      ::close(fd);
      throw IoError("mmap failed: " + path.string());
    }
    data = static_cast<const uint8_t*>(map);
  }
  ::close(fd);
  return std::shared_ptr<MappedFileRegion>(new MappedFileRegion(data, size));
}

MappedFileRegion::~MappedFileRegion() {
  if (data_ != nullptr && size_ > 0) {
    ::munmap(const_cast<uint8_t*>(data_), size_);
  }
}

void MeteredSource::charge(uint64_t offset, uint64_t len) {
  if (config_.mode == MeterMode::Exact) {
    apportion(offset, len);
    ++transfers_;
    return;
  }
  const uint64_t t = config_.transfer_bytes;
  uint64_t first = offset / t;
  uint64_t last = (offset + len - 1) / t;
  for (uint64_t w = first; w <= last; ++w) {
    if (touched_windows_.insert(w).second) {
      // Ceil semantics: a touched window always costs a full transfer unit,
      // even past end of file.
      apportion(w * t, t);
      ++transfers_;
    }
  }
}

void MeteredSource::apportion(uint64_t offset, uint64_t len) {
  if (block_bytes_ == 0 || block_local_.empty()) {
    bytes_local_ += len;
    return;
  }
  uint64_t pos = offset;
  uint64_t end = offset + len;
  while (pos < end) {
    uint64_t block = pos / block_bytes_;
    uint64_t block_end = (block + 1) * block_bytes_;
    uint64_t chunk = std::min(end, block_end) - pos;
    bool local =
        block < block_local_.size() ? block_local_[block] : block_local_.back();
    (local ? bytes_local_ : bytes_remote_) += chunk;
    pos += chunk;
  }
}

FileSink::FileSink(const std::filesystem::path& path) : path_(path) {
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) {
    throw IoError("cannot create file: " + path.string());
  }
}

FileSink::~FileSink() {
  if (out_.is_open()) {
    out_.close();
  }
}

void FileSink::append(std::span<const uint8_t> data) {
  out_.write(reinterpret_cast<const char*>(data.data()),
             static_cast<std::streamsize>(data.size()));
  if (!out_) {
    throw IoError("write failed: " + path_.string());
  }
  bytes_written_ += data.size();
}

void FileSink::write_u32(uint32_t v) {
  uint8_t b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<uint8_t>(v >> (8 * i));
  append({b, 4});
}

void FileSink::write_u64(uint64_t v) {
  uint8_t b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<uint8_t>(v >> (8 * i));
  append({b, 8});
}

void FileSink::close() {
  if (out_.is_open()) {
    out_.close();
    if (!out_) {
      throw IoError("close failed: " + path_.string());
    }
  }
}

std::vector<uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::streamsize n = in.tellg();
  in.seekg(0);
  std::vector<uint8_t> buf(static_cast<size_t>(n));
  if (n > 0) {
    in.read(reinterpret_cast<char*>(buf.data()), n);
    if (!in) throw IoError("read failed: " + path.string());
  }
  return buf;
}

std::string normalize_path(const std::filesystem::path& p) {
  return std::filesystem::absolute(p).lexically_normal().generic_string();
}

}  // namespace colstore
