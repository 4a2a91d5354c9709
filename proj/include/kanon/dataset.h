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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kanon {

enum class ColumnKind { kNumeric, kCategorical };

std::string_view to_string(ColumnKind kind);

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::kCategorical;
  bool is_qid = false;
};

// Column typing and QID selection for one run. Column order is the order in
// which columns appear in the input; it is also the tie-break order used
// throughout the engine.
struct Schema {
  std::vector<ColumnSpec> columns;
  int k = 2;
  std::vector<std::string> sensitive_columns;

  // Throws SchemaError unless there is at least one QID, names are unique and
  // k >= 2.
  void validate() const;

  std::optional<std::size_t> find(std::string_view name) const;
  std::vector<std::size_t> qid_columns() const;
};

// Positional record identity: row index into the dataset.
using RecordId = std::uint32_t;

// A typed column. Numeric cells hold NaN when missing; categorical cells hold
// a dictionary code, or kMissingCode.
class Column {
 public:
  static constexpr std::int32_t kMissingCode = -1;

  explicit Column(ColumnKind kind) : kind_(kind) {}

  ColumnKind kind() const { return kind_; }
  std::size_t size() const;

  bool is_missing(RecordId r) const;
  double number(RecordId r) const { return numbers_[r]; }
  std::int32_t code(RecordId r) const { return codes_[r]; }

  const std::vector<double>& numbers() const { return numbers_; }
  const std::vector<std::int32_t>& codes() const { return codes_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::int32_t code) const { return labels_[code]; }

  // Interns `label` in the dictionary and returns its code.
  std::int32_t intern(std::string_view label);

  void push_number(double v) { numbers_.push_back(v); }
  void push_code(std::int32_t c) { codes_.push_back(c); }
  void push_missing();
  void reserve(std::size_t n);

  // Canonical text of one cell; missing cells render as "?".
  std::string text(RecordId r) const;

 private:
  ColumnKind kind_;
  std::vector<double> numbers_;
  std::vector<std::int32_t> codes_;
  std::vector<std::string> labels_;
  std::map<std::string, std::int32_t, std::less<>> index_;
};

// Immutable column-typed table. Safe for concurrent reads.
class Dataset {
 public:
  Dataset(Schema schema, std::vector<Column> columns);

  const Schema& schema() const { return schema_; }
  std::size_t size() const { return n_; }
  std::size_t column_count() const { return columns_.size(); }
  const Column& column(std::size_t i) const { return columns_[i]; }
  const ColumnSpec& spec(std::size_t i) const { return schema_.columns[i]; }

  bool operator==(const Dataset& other) const;

 private:
  Schema schema_;
  std::vector<Column> columns_;
  std::size_t n_ = 0;
};

// True for the tokens treated as a missing cell: "?", "", "NaN", "nan".
bool is_missing_token(std::string_view cell);

// Splits one CSV line into cells. Handles double-quoted cells; trims
// surrounding whitespace from unquoted cells.
std::vector<std::string> split_csv_line(std::string_view line);
std::string quote_csv_cell(std::string_view cell);

// Reads a CSV with a header row. Every schema column must appear in the
// header (SchemaError otherwise). Header columns the schema does not declare
// are carried through as categorical non-QID columns. The resulting schema
// lists columns in header order.
Dataset load_dataset(const std::filesystem::path& csv_path, const Schema& schema);
Dataset read_dataset(std::istream& in, const Schema& schema);

void write_dataset(std::ostream& out, const Dataset& dataset);
void write_dataset(const std::filesystem::path& csv_path, const Dataset& dataset);

// Repeats every record `factor` times, in order: rows [r0..rn, r0..rn, ...].
Dataset replicate(const Dataset& dataset, std::size_t factor);

// Same records with exactly `qids` marked as quasi-identifiers. Throws
// SchemaError for unknown names.
Dataset with_qids(const Dataset& dataset, std::span<const std::string> qids);

// Shortest round-trip decimal form of a finite double ("40", "25.75").
std::string format_number(double v);

}  // namespace kanon
