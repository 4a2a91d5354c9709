// Copyright 2026 The kanon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace kanon {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input does not match the declared schema (missing column, bad QID list).
class SchemaError : public Error {
 public:
  using Error::Error;
};

// A cell or a config value could not be parsed.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A caller-supplied argument is outside its valid range.
class ArgumentError : public Error {
 public:
  using Error::Error;
};

// A hierarchy file describes something that is not a tree.
class StructureError : public Error {
 public:
  using Error::Error;
};

// Lookup of an unknown label, node, or column.
class LookupError : public Error {
 public:
  using Error::Error;
};

// A numeric range falls outside the domain it is measured against.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A file could not be opened, read, or written.
class FileError : public Error {
 public:
  using Error::Error;
};

// An internal precondition was violated by the caller.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace kanon
