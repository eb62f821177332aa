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
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "colstore/errors.hpp"

namespace colstore {

enum class FieldKind : uint8_t { Int64, Double, String, Bytes, Array, Map };

std::string_view kind_name(FieldKind k);

/// A field's type. Array and Map carry an element type; schemas are finite
/// trees. Map keys are always strings, so only the value type is stored.
class FieldType {
 public:
  static FieldType int64() { return FieldType(FieldKind::Int64); }
  static FieldType float64() { return FieldType(FieldKind::Double); }
  static FieldType string() { return FieldType(FieldKind::String); }
  static FieldType bytes() { return FieldType(FieldKind::Bytes); }
  static FieldType array(FieldType element) {
    return FieldType(FieldKind::Array, std::move(element));
  }
  static FieldType map(FieldType value_type) {
    return FieldType(FieldKind::Map, std::move(value_type));
  }

  FieldKind kind() const { return kind_; }
  bool is_complex() const {
    return kind_ == FieldKind::Array || kind_ == FieldKind::Map;
  }
  const FieldType& element() const;

  /// True for types whose plain encoding has a compile-time byte width.
  bool is_fixed_width() const {
    return kind_ == FieldKind::Int64 || kind_ == FieldKind::Double;
  }
  uint64_t fixed_width() const { return 8; }

  /// Renders in schema-file syntax, e.g. "array<int64>".
  std::string to_string() const;

  bool operator==(const FieldType& other) const;
  bool operator!=(const FieldType& other) const { return !(*this == other); }

 private:
  explicit FieldType(FieldKind kind) : kind_(kind) {}
  FieldType(FieldKind kind, FieldType element)
      : kind_(kind),
        element_(std::make_shared<const FieldType>(std::move(element))) {}

  FieldKind kind_;
  std::shared_ptr<const FieldType> element_;  // set iff Array/Map
};

class Value;
struct MapEntry;

struct ArrayValue {
  std::vector<Value> items;
  bool operator==(const ArrayValue&) const;
};

struct MapValue {
  std::vector<MapEntry> entries;  // insertion order preserved; keys unique
  bool operator==(const MapValue&) const;
  const Value* find(std::string_view key) const;
};

using Bytes = std::vector<uint8_t>;

/// A typed runtime value. Immutable by convention once constructed; shapes
/// match exactly one FieldType.
class Value {
 public:
  Value() : data_(int64_t{0}) {}
  Value(int64_t v) : data_(v) {}
  Value(double v) : data_(v) {}
  Value(std::string v) : data_(std::move(v)) {}
  Value(const char* v) : data_(std::string(v)) {}
  Value(Bytes v) : data_(std::move(v)) {}
  Value(ArrayValue v) : data_(std::move(v)) {}
  Value(MapValue v) : data_(std::move(v)) {}

  FieldKind kind() const { return static_cast<FieldKind>(data_.index()); }

  int64_t as_int64() const { return checked<int64_t>(FieldKind::Int64); }
  double as_double() const { return checked<double>(FieldKind::Double); }
  const std::string& as_string() const {
    return checked<std::string>(FieldKind::String);
  }
  const Bytes& as_bytes() const { return checked<Bytes>(FieldKind::Bytes); }
  const ArrayValue& as_array() const {
    return checked<ArrayValue>(FieldKind::Array);
  }
  const MapValue& as_map() const { return checked<MapValue>(FieldKind::Map); }

  /// Deep shape check against a type.
  bool matches(const FieldType& type) const;

  bool operator==(const Value& other) const { return data_ == other.data_; }
  bool operator!=(const Value& other) const { return !(*this == other); }

 private:
  template <typename T>
  const T& checked(FieldKind want) const {
    if (kind() != want) {
      throw SchemaError(std::string("value is ") +
                        std::string(kind_name(kind())) + ", not " +
                        std::string(kind_name(want)));
    }
    return std::get<T>(data_);
  }

  std::variant<int64_t, double, std::string, Bytes, ArrayValue, MapValue>
      data_;
};

struct MapEntry {
  std::string key;
  Value value;
  bool operator==(const MapEntry&) const = default;
};

/// Convenience builders used heavily by generators and tests.
ArrayValue make_array(std::vector<Value> items);
MapValue make_map(std::vector<std::pair<std::string, Value>> entries);

/// A fully materialized record: named fields in a definite order.
struct Record {
  std::vector<std::pair<std::string, Value>> fields;

  const Value& get(std::string_view name) const;
  const Value* find(std::string_view name) const;
  bool operator==(const Record&) const = default;
};

}  // namespace colstore
