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

#include "colstore/column_format.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <set>

#include "colstore/encoding.hpp"

namespace colstore {
namespace fs = std::filesystem;

namespace {

std::optional<uint32_t> parse_split_index(const std::string& name) {
  if (name.size() < 2 || name[0] != 's') return std::nullopt;
  uint32_t v = 0;
  auto [p, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), v);
  if (ec != std::errc() || p != name.data() + name.size()) return std::nullopt;
  return v;
}

// Reads just the header of a column file, counting bytes actually read.
ColumnFileHeader read_column_header(const fs::path& path,
                                    uint64_t* bytes_read) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorruptionError("cannot open column file: " + path.string());
  uint8_t buf[ColumnFileHeader::kBytes];
  in.read(reinterpret_cast<char*>(buf), sizeof buf);
  if (in.gcount() != static_cast<std::streamsize>(sizeof buf)) {
    throw CorruptionError("column file shorter than its header: " +
                          path.string());
  }
  if (bytes_read) *bytes_read += sizeof buf;
  std::vector<uint8_t> v(buf, buf + sizeof buf);
  SpanInput span(v);
  return ColumnFileHeader::read(span);
}

// ---------------------------------------------------------------------------
// Streams
// ---------------------------------------------------------------------------

struct OpenColumn {
  std::string name;
  std::unique_ptr<ColumnReader> reader;
};

std::vector<OpenColumn> open_columns(const SplitInfo& split,
                                     const Projection& projection,
                                     ScanContext& ctx) {
  std::vector<size_t> ordinals = projection.resolve(split.schema);
  std::vector<OpenColumn> cols;
  cols.reserve(ordinals.size());
  for (size_t ord : ordinals) {
    const Field& field = split.schema.field(ord);
    auto source = ctx.open(split.column_path(ord));
    ColumnReadCounters counters{ctx.deser_counter(field.name),
                                ctx.blocks_counter()};
    auto reader =
        open_column_reader(std::move(source), field.type, ctx.ladder,
                           counters);
    if (reader->record_count() != split.record_count) {
      throw CorruptionError(
          "record_count mismatch in " + split.column_path(ord).string() +
          ": " + std::to_string(reader->record_count()) + " vs split " +
          std::to_string(split.record_count));
    }
    cols.push_back(OpenColumn{field.name, std::move(reader)});
  }
  return cols;
}

class EagerRecordView final : public RecordView {
 public:
  EagerRecordView(const std::vector<OpenColumn>* cols,
                  const std::vector<Value>* values)
      : cols_(cols), values_(values) {}

  const Value& get(std::string_view field) override {
    for (size_t i = 0; i < cols_->size(); ++i) {
      if ((*cols_)[i].name == field) return (*values_)[i];
    }
    throw SchemaError("column '" + std::string(field) + "' is not projected");
  }

 private:
  const std::vector<OpenColumn>* cols_;
  const std::vector<Value>* values_;
};

class CifEagerStream final : public RecordStream {
 public:
  CifEagerStream(const SplitInfo& split, const Projection& projection,
                 ScanContext& ctx)
      : count_(split.record_count),
        cols_(open_columns(split, projection, ctx)),
        values_(cols_.size()),
        view_(&cols_, &values_) {}

  bool next() override {
    if (pos_ >= count_) return false;
    for (size_t i = 0; i < cols_.size(); ++i) {
      values_[i] = cols_[i].reader->read_value();
    }
    ++pos_;
    return true;
  }

  RecordView& record() override { return view_; }

 private:
  uint64_t count_;
  std::vector<OpenColumn> cols_;
  std::vector<Value> values_;
  EagerRecordView view_;
  uint64_t pos_ = 0;
};

// Lazy record construction: curPos names the record the map function is on;
// each column's reader position is its lastPos. advance() moves curPos only;
// the first get() on a field skips that column forward by curPos - lastPos
// and deserializes exactly one value, cached until the next advance.
class CifLazyStream final : public RecordStream {
 public:
  CifLazyStream(const SplitInfo& split, const Projection& projection,
                ScanContext& ctx)
      : count_(split.record_count),
        cols_(open_columns(split, projection, ctx)),
        values_(cols_.size()),
        cached_(cols_.size(), false),
        view_(this) {}

  bool next() override {
    if (cur_ >= static_cast<int64_t>(count_)) return false;  // idempotent
    ++cur_;
    if (cur_ >= static_cast<int64_t>(count_)) return false;
    std::fill(cached_.begin(), cached_.end(), false);
    return true;
  }

  RecordView& record() override { return view_; }

  const Value& lazy_get(std::string_view field) {
    if (cur_ < 0) throw InvariantError("get() before first next()");
    if (cur_ >= static_cast<int64_t>(count_)) {
      throw InvariantError("get() on exhausted cursor");
    }
    for (size_t i = 0; i < cols_.size(); ++i) {
      if (cols_[i].name != field) continue;
      if (!cached_[i]) {
        ColumnReader& reader = *cols_[i].reader;
        uint64_t cur = static_cast<uint64_t>(cur_);
        reader.skip(cur - reader.position());
        values_[i] = reader.read_value();
        cached_[i] = true;
      }
      return values_[i];
    }
    throw SchemaError("column '" + std::string(field) + "' is not projected");
  }

 private:
  class LazyRecordView final : public RecordView {
   public:
    explicit LazyRecordView(CifLazyStream* owner) : owner_(owner) {}
    const Value& get(std::string_view field) override {
      return owner_->lazy_get(field);
    }

   private:
    CifLazyStream* owner_;
  };

  uint64_t count_;
  std::vector<OpenColumn> cols_;
  std::vector<Value> values_;
  std::vector<bool> cached_;
  LazyRecordView view_;
  int64_t cur_ = -1;
};

}  // namespace

std::string column_file_name(size_t ordinal, const std::string& field) {
  return "c" + std::to_string(ordinal) + "_" + field;
}

fs::path split_dir_name(const fs::path& dataset, uint32_t index) {
  return dataset / ("s" + std::to_string(index));
}

// ---------------------------------------------------------------------------
// CofWriter
// ---------------------------------------------------------------------------

CofWriter::CofWriter(fs::path dataset_dir, Schema schema,
                     uint64_t split_target_bytes, ColumnLayoutPlan plan)
    : dataset_(std::move(dataset_dir)),
      schema_(std::move(schema)),
      target_(split_target_bytes),
      plan_(std::move(plan)),
      buffered_(schema_.field_count()) {
  if (schema_.field_count() == 0) {
    throw SchemaError("writers reject empty schemas");
  }
  if (target_ < kMinSplitTarget) {
    throw SchemaError("split_target_bytes must be >= 1 MiB");
  }
  // Validate the plan against the schema up front (dcsl on non-map, etc).
  for (const Field& f : schema_.fields()) {
    plan_.resolve(f.name, f.type);
  }
  fs::create_directories(dataset_);
}

void CofWriter::append(const Record& record) {
  if (finished_) throw InvariantError("append after finish");
  if (record.fields.size() != schema_.field_count()) {
    throw SchemaError("record has " + std::to_string(record.fields.size()) +
                      " fields, schema has " +
                      std::to_string(schema_.field_count()));
  }
  for (size_t i = 0; i < schema_.field_count(); ++i) {
    const Value& v = record_field(record, schema_, i);
    buffered_plain_ += encoded_size(v, schema_.field(i).type);
    buffered_[i].push_back(v);
  }
  if (buffered_plain_ >= target_) flush_split(false);
}

void CofWriter::flush_split(bool force_empty) {
  if (buffered_[0].empty() && !force_empty) return;
  fs::path dir = split_dir_name(dataset_, next_index_);
  fs::create_directories(dir);
  write_schema_file(dir / "schema", schema_);
  SplitInfo info;
  info.dir = dir;
  info.index = next_index_;
  info.schema = schema_;
  info.record_count = buffered_[0].size();
  for (size_t i = 0; i < schema_.field_count(); ++i) {
    const Field& f = schema_.field(i);
    write_column_file(dir / column_file_name(i, f.name), buffered_[i], f.type,
                      plan_.resolve(f.name, f.type));
    buffered_[i].clear();
  }
  buffered_plain_ = 0;
  splits_.push_back(std::move(info));
  ++next_index_;
}

std::vector<SplitInfo> CofWriter::finish() {
  if (finished_) throw InvariantError("finish called twice");
  // An empty dataset still gets an s0 so the schema lives somewhere.
  flush_split(splits_.empty());
  finished_ = true;
  return std::move(splits_);
}

std::vector<SplitInfo> cof_write(std::span<const Record> records,
                                 const Schema& schema,
                                 const fs::path& dataset,
                                 uint64_t split_target_bytes,
                                 const ColumnLayoutPlan& plan) {
  CofWriter writer(dataset, schema, split_target_bytes, plan);
  for (const Record& r : records) writer.append(r);
  return writer.finish();
}

// ---------------------------------------------------------------------------
// cif_splits
// ---------------------------------------------------------------------------

std::vector<SplitInfo> cif_splits(const fs::path& dataset,
                                  uint64_t* bytes_read) {
  if (!fs::is_directory(dataset)) {
    throw IoError("dataset directory not found: " + dataset.string());
  }
  std::vector<std::pair<uint32_t, fs::path>> dirs;
  for (const auto& entry : fs::directory_iterator(dataset)) {
    if (!entry.is_directory()) continue;
    if (auto idx = parse_split_index(entry.path().filename().string())) {
      dirs.emplace_back(*idx, entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  std::vector<SplitInfo> splits;
  splits.reserve(dirs.size());
  for (size_t i = 0; i < dirs.size(); ++i) {
    const auto& [index, dir] = dirs[i];
    if (index != i) {
      throw CorruptionError("split indices not dense: expected s" +
                            std::to_string(i) + ", found s" +
                            std::to_string(index));
    }
    fs::path schema_path = dir / "schema";
    if (!fs::is_regular_file(schema_path)) {
      throw CorruptionError("missing schema file: " + schema_path.string());
    }
    SplitInfo info;
    info.dir = dir;
    info.index = index;
    info.schema = read_schema_file(schema_path);
    if (!splits.empty() && !(info.schema == splits.front().schema)) {
      throw CorruptionError("schema mismatch between splits s0 and s" +
                            std::to_string(index));
    }

    std::set<std::string> expected;
    for (size_t ord = 0; ord < info.schema.field_count(); ++ord) {
      expected.insert(column_file_name(ord, info.schema.field(ord).name));
    }
    std::set<std::string> present;
    for (const auto& f : fs::directory_iterator(dir)) {
      std::string name = f.path().filename().string();
      if (name == "schema") continue;
      present.insert(name);
    }
    for (const std::string& name : expected) {
      if (!present.count(name)) {
        throw CorruptionError("missing column file: " +
                              (dir / name).string());
      }
    }
    for (const std::string& name : present) {
      if (!expected.count(name)) {
        throw CorruptionError("unexpected file in split-directory: " +
                              (dir / name).string());
      }
    }

    std::optional<uint64_t> count;
    for (size_t ord = 0; ord < info.schema.field_count(); ++ord) {
      fs::path col = info.column_path(ord);
      ColumnFileHeader header = read_column_header(col, bytes_read);
      if (!count) {
        count = header.record_count;
      } else if (*count != header.record_count) {
        throw CorruptionError(
            "record_count disagreement in " + col.string() + ": " +
            std::to_string(header.record_count) + " vs " +
            std::to_string(*count));
      }
    }
    info.record_count = count.value_or(0);
    splits.push_back(std::move(info));
  }
  return splits;
}

std::unique_ptr<RecordStream> cif_open(const SplitInfo& split,
                                       const Projection& projection,
                                       ScanMode mode, ScanContext& ctx) {
  if (mode == ScanMode::Eager) {
    return std::make_unique<CifEagerStream>(split, projection, ctx);
  }
  return std::make_unique<CifLazyStream>(split, projection, ctx);
}

// ---------------------------------------------------------------------------
// add_column
// ---------------------------------------------------------------------------

Schema add_column(const fs::path& dataset, const std::string& name,
                  const FieldType& type,
                  std::span<const std::vector<Value>> values_per_split,
                  const ColumnLayoutSpec& spec, AddColumnStats* stats) {
  AddColumnStats local;
  AddColumnStats& st = stats ? *stats : local;
  std::vector<SplitInfo> splits = cif_splits(dataset, &st.existing_bytes_read);
  if (splits.empty()) {
    throw SchemaError("dataset has no splits");
  }
  const Schema& old_schema = splits.front().schema;
  if (old_schema.index_of(name)) {
    throw SchemaError("column '" + name + "' already exists");
  }
  if (values_per_split.size() != splits.size()) {
    throw SchemaError("values supplied for " +
                      std::to_string(values_per_split.size()) +
                      " splits, dataset has " + std::to_string(splits.size()));
  }
  for (size_t i = 0; i < splits.size(); ++i) {
    if (values_per_split[i].size() != splits[i].record_count) {
      throw SchemaError("split s" + std::to_string(i) + " holds " +
                        std::to_string(splits[i].record_count) +
                        " records but " +
                        std::to_string(values_per_split[i].size()) +
                        " values were supplied");
    }
  }

  std::vector<Field> fields = old_schema.fields();
  fields.push_back(Field{name, type});
  Schema new_schema(std::move(fields));
  size_t ordinal = old_schema.field_count();

  // Stage everything under temporary names, then rename.
  std::vector<std::pair<fs::path, fs::path>> renames;
  try {
    for (size_t i = 0; i < splits.size(); ++i) {
      fs::path final_path =
          splits[i].dir / column_file_name(ordinal, name);
      fs::path tmp_path = final_path;
      tmp_path += ".tmp";
      write_column_file(tmp_path, values_per_split[i], type, spec);
      renames.emplace_back(tmp_path, final_path);
      ++st.files_created;
    }
    for (const SplitInfo& split : splits) {
      fs::path tmp_path = split.dir / "schema.tmp";
      write_schema_file(tmp_path, new_schema);
      renames.emplace_back(tmp_path, split.dir / "schema");
      ++st.schema_files_rewritten;
    }
  } catch (...) {
    for (const auto& [tmp, _] : renames) {
      std::error_code ec;
      fs::remove(tmp, ec);
    }
    throw;
  }
  for (const auto& [tmp, final_path] : renames) {
    fs::rename(tmp, final_path);
  }
  return new_schema;
}

}  // namespace colstore
