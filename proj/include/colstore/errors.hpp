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

#include <stdexcept>
#include <string>

namespace colstore {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Schema/type mismatches and misuse of typed APIs.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Text inputs that fail to parse (schema files, TXT data lines).
/// Messages carry line (and column where available) positions.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Filesystem-level failures: missing files, unwritable sinks.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Structurally damaged data: bad magic, truncated regions, sync-marker
/// mismatches, out-of-range dictionary indices.
class CorruptionError : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed during a scan or simulation.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace colstore
