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

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "colstore/value.hpp"

namespace colstore {

struct Field {
  std::string name;
  FieldType type;
  bool operator==(const Field&) const = default;
};

/// An ordered list of uniquely named fields. Order is significant: it fixes
/// serialization order and column-file naming.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<Field> fields);  // throws SchemaError on dups

  const std::vector<Field>& fields() const { return fields_; }
  size_t field_count() const { return fields_.size(); }
  const Field& field(size_t i) const { return fields_.at(i); }
  std::optional<size_t> index_of(std::string_view name) const;

  bool operator==(const Schema&) const = default;

 private:
  std::vector<Field> fields_;
};

/// Parses schema text: one `name:type` per line, `#` comments, LF endings.
/// type := int64 | double | string | bytes | array<type> | map<type>
/// Throws ParseError with line:column on syntax errors, SchemaError on
/// duplicate names.
Schema parse_schema(std::string_view text);

/// Canonical rendering; parse_schema(schema_to_text(s)) == s.
std::string schema_to_text(const Schema& schema);

Schema read_schema_file(const std::filesystem::path& path);
void write_schema_file(const std::filesystem::path& path,
                       const Schema& schema);

struct ValidationResult {
  bool ok = true;
  std::string message;  // first mismatch, human-readable
};

/// Accepts iff every schema field is present with a type-matching value and
/// the record carries no extra fields. Field order in the record is free.
ValidationResult validate(const Record& record, const Schema& schema);

/// Value of schema field `i` in `record`; fast path when record fields are
/// already in schema order. Throws SchemaError when the field is absent.
const Value& record_field(const Record& record, const Schema& schema,
                          size_t i);

}  // namespace colstore
