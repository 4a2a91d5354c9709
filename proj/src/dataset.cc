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

#include "kanon/dataset.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <system_error>

#include "kanon/errors.h"

namespace kanon {

std::string_view to_string(ColumnKind kind) {
  return kind == ColumnKind::kNumeric ? "numeric" : "categorical";
}

void Schema::validate() const {
  std::set<std::string, std::less<>> names;
  std::size_t qids = 0;
  for (const auto& c : columns) {
    if (c.name.empty()) throw SchemaError("column with empty name");
    if (!names.insert(c.name).second) {
      throw SchemaError("duplicate column name '" + c.name + "'");
    }
    if (c.is_qid) ++qids;
  }
  if (qids == 0) throw SchemaError("schema declares no quasi-identifier");
  if (qids > 64) throw SchemaError("at most 64 quasi-identifiers are supported");
  if (k < 2) throw SchemaError("k must be at least 2, got " + std::to_string(k));
  for (const auto& s : sensitive_columns) {
    if (!find(s)) throw SchemaError("sensitive column '" + s + "' is not in the schema");
  }
}

std::optional<std::size_t> Schema::find(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::size_t> Schema::qid_columns() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i].is_qid) out.push_back(i);
  }
  return out;
}

std::size_t Column::size() const {
  return kind_ == ColumnKind::kNumeric ? numbers_.size() : codes_.size();
}

bool Column::is_missing(RecordId r) const {
  return kind_ == ColumnKind::kNumeric ? std::isnan(numbers_[r])
                                       : codes_[r] == kMissingCode;
}

std::int32_t Column::intern(std::string_view label) {
  if (auto it = index_.find(label); it != index_.end()) return it->second;
  const auto code = static_cast<std::int32_t>(labels_.size());
  labels_.emplace_back(label);
  index_.emplace(std::string(label), code);
  return code;
}

void Column::push_missing() {
  if (kind_ == ColumnKind::kNumeric) {
    numbers_.push_back(std::nan(""));
  } else {
    codes_.push_back(kMissingCode);
  }
}

void Column::reserve(std::size_t n) {
  if (kind_ == ColumnKind::kNumeric) {
    numbers_.reserve(n);
  } else {
    codes_.reserve(n);
  }
}

std::string Column::text(RecordId r) const {
  if (is_missing(r)) return "?";
  return kind_ == ColumnKind::kNumeric ? format_number(numbers_[r]) : labels_[codes_[r]];
}

Dataset::Dataset(Schema schema, std::vector<Column> columns)
    : schema_(std::move(schema)), columns_(std::move(columns)) {
  if (columns_.size() != schema_.columns.size()) {
    throw SchemaError("column count does not match schema");
  }
  n_ = columns_.empty() ? 0 : columns_.front().size();
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].size() != n_) throw SchemaError("ragged columns");
    if (columns_[i].kind() != schema_.columns[i].kind) {
      throw SchemaError("column '" + schema_.columns[i].name + "' kind mismatch");
    }
  }
}

bool Dataset::operator==(const Dataset& other) const {
  if (n_ != other.n_ || columns_.size() != other.columns_.size()) return false;
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    const auto& a = schema_.columns[c];
    const auto& b = other.schema_.columns[c];
    if (a.name != b.name || a.kind != b.kind || a.is_qid != b.is_qid) return false;
    const Column& x = columns_[c];
    const Column& y = other.columns_[c];
    for (RecordId r = 0; r < n_; ++r) {
      if (x.is_missing(r) != y.is_missing(r)) return false;
      if (x.is_missing(r)) continue;
      if (x.kind() == ColumnKind::kNumeric) {
        if (x.number(r) != y.number(r)) return false;
      } else if (x.label(x.code(r)) != y.label(y.code(r))) {
        return false;
      }
    }
  }
  return true;
}

bool is_missing_token(std::string_view cell) {
  return cell.empty() || cell == "?" || cell == "NaN" || cell == "nan";
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(ch);
      }
    } else if (ch == '"') {
      quoted = true;
      was_quoted = true;
    } else if (ch == ',') {
      cells.push_back(was_quoted ? cell : std::string(trim(cell)));
      cell.clear();
      was_quoted = false;
    } else {
      cell.push_back(ch);
    }
  }
  if (quoted) throw ParseError("unterminated quoted cell");
  cells.push_back(was_quoted ? cell : std::string(trim(cell)));
  return cells;
}

std::string quote_csv_cell(std::string_view cell) {
  if (cell.find_first_of(",\"\n") == std::string_view::npos &&
      trim(cell).size() == cell.size()) {
    return std::string(cell);
  }
  std::string out = "\"";
  for (char ch : cell) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Dataset read_dataset(std::istream& in, const Schema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("input has no header row");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);
  const auto header = split_csv_line(line);

  Schema effective;
  effective.k = schema.k;
  effective.sensitive_columns = schema.sensitive_columns;
  for (const auto& name : header) {
    if (auto i = schema.find(name)) {
      effective.columns.push_back(schema.columns[*i]);
    } else {
      effective.columns.push_back({name, ColumnKind::kCategorical, false});
    }
  }
  for (const auto& c : schema.columns) {
    if (!effective.find(c.name)) {
      throw SchemaError("column '" + c.name + "' not found in input header");
    }
  }
  effective.validate();

  std::vector<Column> columns;
  columns.reserve(effective.columns.size());
  for (const auto& c : effective.columns) columns.emplace_back(c.kind);

  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != columns.size()) {
      throw ParseError("row " + std::to_string(row) + ": expected " +
                       std::to_string(columns.size()) + " cells, got " +
                       std::to_string(cells.size()));
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string& cell = cells[c];
      Column& col = columns[c];
      if (is_missing_token(cell)) {
        col.push_missing();
      } else if (col.kind() == ColumnKind::kNumeric) {
        double v = 0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || !std::isfinite(v)) {
          throw ParseError("row " + std::to_string(row) + ", column '" +
                           effective.columns[c].name + "': cannot parse '" + cell +
                           "' as a number");
        }
        col.push_number(v);
      } else {
        col.push_code(col.intern(cell));
      }
    }
  }
  return Dataset(std::move(effective), std::move(columns));
}

Dataset load_dataset(const std::filesystem::path& csv_path, const Schema& schema) {
  std::ifstream in(csv_path);
  if (!in) throw FileError("cannot open dataset '" + csv_path.string() + "'");
  return read_dataset(in, schema);
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  for (std::size_t c = 0; c < dataset.column_count(); ++c) {
    if (c) out << ',';
    out << quote_csv_cell(dataset.spec(c).name);
  }
  out << '\n';
  for (RecordId r = 0; r < dataset.size(); ++r) {
    for (std::size_t c = 0; c < dataset.column_count(); ++c) {
      if (c) out << ',';
      out << quote_csv_cell(dataset.column(c).text(r));
    }
    out << '\n';
  }
}

void write_dataset(const std::filesystem::path& csv_path, const Dataset& dataset) {
  std::ofstream out(csv_path);
  if (!out) throw FileError("cannot write '" + csv_path.string() + "'");
  write_dataset(out, dataset);
}

Dataset replicate(const Dataset& dataset, std::size_t factor) {
  if (factor == 0) throw ArgumentError("replication factor must be >= 1");
  std::vector<Column> columns;
  for (std::size_t c = 0; c < dataset.column_count(); ++c) {
    const Column& src = dataset.column(c);
    Column dst(src.kind());
    for (const auto& label : src.labels()) dst.intern(label);
    dst.reserve(src.size() * factor);
    for (std::size_t f = 0; f < factor; ++f) {
      for (RecordId r = 0; r < src.size(); ++r) {
        if (src.kind() == ColumnKind::kNumeric) {
          dst.push_number(src.number(r));
        } else {
          dst.push_code(src.code(r));
        }
      }
    }
    columns.push_back(std::move(dst));
  }
  return Dataset(dataset.schema(), std::move(columns));
}

Dataset with_qids(const Dataset& dataset, std::span<const std::string> qids) {
  Schema schema = dataset.schema();
  for (auto& c : schema.columns) c.is_qid = false;
  for (const auto& name : qids) {
    const auto i = schema.find(name);
    if (!i) throw SchemaError("unknown QID column '" + name + "'");
    schema.columns[*i].is_qid = true;
  }
  schema.validate();
  std::vector<Column> columns;
  for (std::size_t c = 0; c < dataset.column_count(); ++c) columns.push_back(dataset.column(c));
  return Dataset(std::move(schema), std::move(columns));
}

}  // namespace kanon
