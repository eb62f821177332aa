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

#include "colstore/value.hpp"

#include <algorithm>
#include <unordered_set>

namespace colstore {

std::string_view kind_name(FieldKind k) {
  switch (k) {
    case FieldKind::Int64:
      return "int64";
    case FieldKind::Double:
      return "double";
    case FieldKind::String:
      return "string";
    case FieldKind::Bytes:
      return "bytes";
    case FieldKind::Array:
      return "array";
    case FieldKind::Map:
      return "map";
  }
  return "?";
}

const FieldType& FieldType::element() const {
  if (!element_) {
    throw SchemaError(std::string(kind_name(kind_)) +
                      " has no element type");
  }
  return *element_;
}

std::string FieldType::to_string() const {
  switch (kind_) {
    case FieldKind::Array:
      return "array<" + element().to_string() + ">";
    case FieldKind::Map:
      return "map<" + element().to_string() + ">";
    default:
      return std::string(kind_name(kind_));
  }
}

bool FieldType::operator==(const FieldType& other) const {
  if (kind_ != other.kind_) return false;
  if (!element_) return !other.element_;
  return other.element_ && *element_ == *other.element_;
}

bool ArrayValue::operator==(const ArrayValue& other) const {
  return items == other.items;
}

bool MapValue::operator==(const MapValue& other) const {
  return entries == other.entries;
}

const Value* MapValue::find(std::string_view key) const {
  for (const auto& e : entries) {
    if (e.key == key) return &e.value;
  }
  return nullptr;
}

bool Value::matches(const FieldType& type) const {
  if (kind() != type.kind()) return false;
  switch (kind()) {
    case FieldKind::Array:
      return std::all_of(
          as_array().items.begin(), as_array().items.end(),
          [&](const Value& v) { return v.matches(type.element()); });
    case FieldKind::Map: {
      std::unordered_set<std::string_view> seen;
      for (const auto& e : as_map().entries) {
        if (!seen.insert(e.key).second) return false;
        if (!e.value.matches(type.element())) return false;
      }
      return true;
    }
    default:
      return true;
  }
}

ArrayValue make_array(std::vector<Value> items) {
  return ArrayValue{std::move(items)};
}

MapValue make_map(std::vector<std::pair<std::string, Value>> entries) {
  MapValue m;
  m.entries.reserve(entries.size());
  for (auto& [k, v] : entries) {
    m.entries.push_back(MapEntry{std::move(k), std::move(v)});
  }
  return m;
}

const Value* Record::find(std::string_view name) const {
  for (const auto& [n, v] : fields) {
    if (n == name) return &v;
  }
  return nullptr;
}

const Value& Record::get(std::string_view name) const {
  if (const Value* v = find(name)) return *v;
  throw SchemaError("record has no field named '" + std::string(name) + "'");
}

}  // namespace colstore
