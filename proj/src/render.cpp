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

#include "medquery/render.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "medquery/iri.hpp"

namespace medquery {

namespace {

const std::string& display(const Term& term) { return term.value(); }

std::string dot_escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (c == '"' || c == '\\' || c == '{' || c == '}' || c == '|' || c == '<' || c == '>') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string render_results(const ResultSet& results, ResultFormat format) {
  std::ostringstream out;
  switch (format) {
    case ResultFormat::Table:
      for (std::size_t c = 0; c < results.columns.size(); ++c) out << (c ? "|" : "") << results.columns[c];
      out << '\n';
      for (const auto& row : results.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "|" : "") << display(row[c]);
        out << '\n';
      }
      break;
    case ResultFormat::Xml:
      out << "<results>\n";
      for (const auto& row : results.rows) {
        out << "  <row>";
        for (std::size_t c = 0; c < row.size(); ++c)
          out << "<col name=\"" << xml_escape(results.columns[c]) << "\">" << xml_escape(display(row[c])) << "</col>";
        out << "</row>\n";
      }
      out << "</results>\n";
      break;
    case ResultFormat::NTriples:
      for (std::size_t r = 0; r < results.rows.size(); ++r)
        for (std::size_t c = 0; c < results.columns.size(); ++c)
          out << '<' << kIntegratedBase << "result/row/" << r << "> <" << kIntegratedBase << "result#"
              << results.columns[c] << "> " << results.rows[r][c].ntriples() << " .\n";
      break;
  }
  return out.str();
}

std::vector<SchemaEdge> schema_edges(const Project& project) {
  const auto& schema = project.schema;
  auto touching = [&](const std::vector<FieldRef>& refs) {
    std::vector<std::string> tables;
    for (const auto& table : schema.tables)
      for (const auto& field : table.fields)
        if (std::find(refs.begin(), refs.end(), field.mapping) != refs.end()) {
          tables.push_back(table.name);
          break;
        }
    return tables;
  };
  std::vector<SchemaEdge> edges;
  for (const auto& relation : schema.relations) {
    std::vector<std::string> a, b;
    std::string label;
    if (const auto* eq = std::get_if<EqualityRelation>(&relation)) {
      a = touching(eq->lhs);
      b = touching(eq->rhs);
      label = "=";
    } else {
      const auto& derived = std::get<DerivedRelation>(relation);
      a = touching({derived.target});
      b = touching(derived.operands);
      label = std::string(to_string(derived.op));
    }
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& x : a)
      for (const auto& y : b) {
        if (x == y || !seen.insert(std::minmax(x, y)).second) continue;
        edges.push_back({x, y, label});
      }
  }
  return edges;
}

std::string schema_to_dot(const Project& project) {
  std::ostringstream out;
  out << "graph \"" << dot_escape(project.schema.name) << "\" {\n  node [shape=record];\n";
  for (const auto& table : project.schema.tables) {
    out << "  \"" << dot_escape(table.name) << "\" [label=\"{" << dot_escape(table.name) << '|';
    for (const auto& field : table.fields) out << dot_escape(field.name) << " : " << to_string(field.dtype) << "\\l";
    out << "}\"];\n";
  }
  for (const auto& edge : schema_edges(project))
    out << "  \"" << dot_escape(edge.from) << "\" -- \"" << dot_escape(edge.to) << "\" [label=\""
        << dot_escape(edge.label) << "\"];\n";
  out << "}\n";
  return out.str();
}

}  // namespace medquery
