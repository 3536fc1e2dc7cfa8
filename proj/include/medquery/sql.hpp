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

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "medquery/datatype.hpp"
#include "medquery/descriptors.hpp"

namespace medquery {

struct QualifiedField {
  std::string table;
  std::string field;

  std::string to_string() const { return table + "." + field; }
  auto operator<=>(const QualifiedField&) const = default;
};

struct Literal {
  std::string lexical;
  DataType dtype = DataType::String;
  bool operator==(const Literal&) const = default;
};

struct Condition {
  QualifiedField lhs;
  CompareOp op = CompareOp::Eq;
  std::variant<QualifiedField, Literal> rhs;

  bool is_field_comparison() const { return std::holds_alternative<QualifiedField>(rhs); }
  bool operator==(const Condition&) const = default;
};

struct SqlQuery {
  std::vector<QualifiedField> select;
  std::vector<std::string> from;
  /// Field-to-field conditions from ON, plus field equalities from WHERE.
  std::vector<Condition> join_conds;
  /// Remaining WHERE conditions, implicitly AND-ed.
  std::vector<Condition> filters;
  bool operator==(const SqlQuery&) const = default;
};

/// Parses and validates a query over the integrated schema. Grammar:
///   SELECT T.F {, T.F} FROM T {, T | [INNER] JOIN T [ON conds]}
///     [ON conds] [WHERE conds]
/// where conds are comparisons joined by AND. Aggregates, subqueries,
/// expressions, ORDER BY, GROUP BY and OR raise UnsupportedSql.
SqlQuery parse_sql(std::string_view text, const IntegratedSchema& schema);

/// Parses a wrapper view: one FROM table, no joins. Field names may be
/// unqualified; they are qualified with the FROM table. Field existence is
/// checked by the caller against the source table.
SqlQuery parse_view_sql(std::string_view text);

/// Prints a query back in the accepted grammar (comma + ON form).
std::string unparse_sql(const SqlQuery& query);

}  // namespace medquery
