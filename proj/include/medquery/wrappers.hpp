/*
Copyright 2026 The medquery Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "medquery/descriptors.hpp"

namespace medquery {

/// A table cell: Missing, or a value in canonical lexical form.
struct Cell {
  std::optional<std::string> lexical;
  DataType dtype = DataType::String;

  static Cell missing(DataType dtype = DataType::String) { return {std::nullopt, dtype}; }
  static Cell value(std::string lexical, DataType dtype) { return {std::move(lexical), dtype}; }
  bool is_missing() const { return !lexical.has_value(); }
  bool operator==(const Cell&) const = default;
};

struct Row {
  std::vector<Cell> cells;
  bool operator==(const Row&) const = default;
};

struct Table {
  std::string name;
  std::vector<SourceFieldDef> fields;
  std::vector<Row> rows;

  /// Column index of `field`, or nullopt.
  std::optional<std::size_t> column(std::string_view field) const;
  bool operator==(const Table&) const = default;
};

/// Ordered record of source tables read during one extraction. Appends are
/// atomic, so concurrent fetches may share one log.
class AccessLog {
 public:
  AccessLog() = default;
  AccessLog(const AccessLog& other) : entries_(other.entries()) {}
  AccessLog& operator=(const AccessLog& other) {
    auto copy = other.entries();
    std::lock_guard lock(mutex_);
    entries_ = std::move(copy);
    return *this;
  }

  void append(TableRef ref);
  std::vector<TableRef> entries() const;

 private:
  mutable std::mutex mutex_;
  std::vector<TableRef> entries_;
};

/// Reads one declared source table through its wrapper:
///   file binding  - pipe-delimited text with a header line
///   xml binding   - one row per record element, optional transform command
///   view binding  - single-table SELECT over a sibling table
/// Cells are coerced to the declared types. Logs (source, table) once.
Table fetch_table(const Project& project, const std::string& source, const std::string& table, AccessLog& log);

/// Evaluates a view definition over a table of `source`. Result fields are
/// the projected names, in SELECT order.
Table evaluate_view(const Project& project, const std::string& source, const std::string& view_sql,
                    AccessLog& log);

/// Pipe-delimited rendering (header + rows, Missing as empty), the inverse
/// of the tabular file format.
std::string format_tabular(const Table& table);

}  // namespace medquery
