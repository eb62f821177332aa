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

#include "colstore/schema.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace colstore {
namespace {

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Recursive-descent type parser over one line's type text.
// `pos` is a 0-based offset within `s`; errors report 1-based columns.
struct TypeParser {
  std::string_view s;
  size_t pos = 0;
  size_t line;
  size_t col_base;  // offset of s within the full line, for error columns

  [[noreturn]] void fail(const std::string& what) const {
    std::ostringstream os;
    os << "schema line " << line << ", column " << (col_base + pos + 1)
       << ": " << what;
    throw ParseError(os.str());
  }

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }

  std::string_view keyword() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && ident_char(s[pos])) ++pos;
    if (pos == start) fail("expected a type keyword");
    return s.substr(start, pos - start);
  }

  void expect(char c) {
    skip_ws();
    if (pos >= s.size() || s[pos] != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos;
  }

  FieldType parse() {
    std::string_view kw = keyword();
    if (kw == "int64") return FieldType::int64();
    if (kw == "double") return FieldType::float64();
    if (kw == "string") return FieldType::string();
    if (kw == "bytes") return FieldType::bytes();
    if (kw == "array") {
      expect('<');
      FieldType inner = parse();
      expect('>');
      return FieldType::array(std::move(inner));
    }
    if (kw == "map") {
      expect('<');
      FieldType inner = parse();
      expect('>');
      return FieldType::map(std::move(inner));
    }
    pos -= kw.size();
    fail("unknown type keyword '" + std::string(kw) + "'");
  }

  void expect_end() {
    skip_ws();
    if (pos != s.size()) fail("trailing characters after type");
  }
};

bool valid_field_name(std::string_view name) {
  if (name.empty() || !ident_start(name[0])) return false;
  for (char c : name) {
    if (!ident_char(c)) return false;
  }
  return true;
}

}  // namespace

Schema::Schema(std::vector<Field> fields) : fields_(std::move(fields)) {
  std::unordered_set<std::string_view> seen;
  for (const Field& f : fields_) {
    if (!valid_field_name(f.name)) {
      throw SchemaError("invalid field name '" + f.name + "'");
    }
    if (!seen.insert(f.name).second) {
      throw SchemaError("duplicate field name '" + f.name + "'");
    }
  }
}

std::optional<size_t> Schema::index_of(std::string_view name) const {
  for (size_t i = 0; i < fields_.size(); ++i) {
    if (fields_[i].name == name) return i;
  }
  return std::nullopt;
}

Schema parse_schema(std::string_view text) {
  std::vector<Field> fields;
  size_t line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    std::string_view line = (end == std::string_view::npos)
                                ? text.substr(start)
                                : text.substr(start, end - start);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);

    size_t first = line.find_first_not_of(" \t");
    if (first != std::string_view::npos) {
      size_t colon = line.find(':');
      if (colon == std::string_view::npos) {
        std::ostringstream os;
        os << "schema line " << line_no << ", column " << line.size() + 1
           << ": expected ':' after field name";
        throw ParseError(os.str());
      }
      std::string_view name = line.substr(first, colon - first);
      while (!name.empty() && (name.back() == ' ' || name.back() == '\t')) {
        name.remove_suffix(1);
      }
      if (!valid_field_name(name)) {
        std::ostringstream os;
        os << "schema line " << line_no << ", column " << first + 1
           << ": invalid field name '" << name << "'";
        throw ParseError(os.str());
      }
      TypeParser tp{line.substr(colon + 1), 0, line_no, colon + 1};
      FieldType type = tp.parse();
      tp.expect_end();
      fields.push_back(Field{std::string(name), std::move(type)});
    }

    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  return Schema(std::move(fields));  // Schema ctor reports duplicates
}

std::string schema_to_text(const Schema& schema) {
  std::string out;
  for (const Field& f : schema.fields()) {
    out += f.name;
    out += ':';
    out += f.type.to_string();
    out += '\n';
  }
  return out;
}

Schema read_schema_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open schema file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_schema(buf.str());
}

void write_schema_file(const std::filesystem::path& path,
                       const Schema& schema) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write schema file: " + path.string());
  out << schema_to_text(schema);
  if (!out) throw IoError("write failed: " + path.string());
}

const Value& record_field(const Record& record, const Schema& schema,
                          size_t i) {
  const Field& f = schema.field(i);
  if (i < record.fields.size() && record.fields[i].first == f.name) {
    return record.fields[i].second;
  }
  return record.get(f.name);
}

ValidationResult validate(const Record& record, const Schema& schema) {
  for (const Field& f : schema.fields()) {
    const Value* v = record.find(f.name);
    if (!v) {
      return {false, "missing field '" + f.name + "'"};
    }
    if (!v->matches(f.type)) {
      return {false, "field '" + f.name + "': expected " +
                         f.type.to_string() + ", got " +
                         std::string(kind_name(v->kind()))};
    }
  }
  if (record.fields.size() != schema.field_count()) {
    for (const auto& [name, v] : record.fields) {
      if (!schema.index_of(name)) {
        return {false, "unknown field '" + name + "'"};
      }
    }
    return {false, "duplicate fields in record"};
  }
  return {true, {}};
}

}  // namespace colstore
