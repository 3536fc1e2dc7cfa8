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

#include "medquery/descriptors.hpp"
#include "medquery/rdql.hpp"

namespace medquery {

enum class ResultFormat { Table, Xml, NTriples };

/// table: header of column names, then one `|`-separated line per row.
/// xml: <results><row><col name="...">value</col>...</row></results>.
/// ntriples: each binding as <http://integratedDB/result/row/n>
///   <http://integratedDB/result#VAR> term, in row then column order.
std::string render_results(const ResultSet& results, ResultFormat format);

/// Graphviz description: one record node per integrated table and one
/// edge per relation between the integrated tables its fields map to.
std::string schema_to_dot(const Project& project);

struct SchemaEdge {
  std::string from;
  std::string to;
  std::string label;
  bool operator==(const SchemaEdge&) const = default;
};

/// Relations projected onto integrated tables, in relation order.
std::vector<SchemaEdge> schema_edges(const Project& project);

}  // namespace medquery
