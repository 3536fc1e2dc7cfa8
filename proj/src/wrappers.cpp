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

#include "medquery/wrappers.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "medquery/error.hpp"
#include "medquery/sql.hpp"

namespace medquery {

namespace pt = boost::property_tree;

std::optional<std::size_t> Table::column(std::string_view field) const {
  for (std::size_t i = 0; i < fields.size(); ++i)
    if (fields[i].name == field) return i;
  return std::nullopt;
}

void AccessLog::append(TableRef ref) {
  std::lock_guard lock(mutex_);
  entries_.push_back(std::move(ref));
}

std::vector<TableRef> AccessLog::entries() const {
  std::lock_guard lock(mutex_);
  return entries_;
}

namespace {

const DataSourceDescriptor& require_source(const Project& project, const std::string& source) {
  const auto* src = project.find_source(source);
  if (!src) throw Error(ErrorCode::UnknownTable, "no data source '" + source + "'");
  return *src;
}

const SourceTableDef& require_table(const DataSourceDescriptor& source, const std::string& table) {
  const auto* def = source.find_table(table);
  if (!def) throw Error(ErrorCode::UnknownTable, source.name + "." + table);
  return *def;
}

std::filesystem::path resolve(const Project& project, const DataSourceDescriptor& source,
                              const std::string& relative) {
  if (source.location.find("://") != std::string::npos)
    throw Error(ErrorCode::IoError, "source '" + source.name + "': remote location " + source.location +
                                        " is not supported");
  std::filesystem::path path(relative);
  if (path.is_absolute()) return path;
  std::filesystem::path base = project.base_dir;
  if (source.kind == SourceKind::Tabular && !source.location.empty()) base /= source.location;
  return base / path;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string run_transform(const std::string& command, const std::filesystem::path& input) {
  std::string quoted = "'";
  for (char c : input.string()) quoted += c == '\'' ? std::string("'\\''") : std::string(1, c);
  quoted += "'";
  std::string line = command + " < " + quoted;
  FILE* pipe = ::popen(line.c_str(), "r");
  if (!pipe) throw Error(ErrorCode::IoError, "cannot start transform: " + command);
  std::string output;
  char buffer[4096];
  std::size_t n;
  while ((n = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) output.append(buffer, n);
  int status = ::pclose(pipe);
  if (status != 0) throw Error(ErrorCode::IoError, "transform failed (status " + std::to_string(status) + "): " + command);
  return output;
}

Cell coerce(const std::string& text, const SourceFieldDef& field, std::size_t row, const std::string& where) {
  if (text.empty()) return Cell::missing(field.dtype);
  auto canonical = canonical_lexical(text, field.dtype);
  if (!canonical)
    throw Error(ErrorCode::TypeCoercionError, where + " row " + std::to_string(row) + ", field " + field.name +
                                                  ": '" + text + "' is not a valid " +
                                                  std::string(to_string(field.dtype)));
  return Cell::value(std::move(*canonical), field.dtype);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    auto at = line.find(sep, start);
    parts.emplace_back(line.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) return parts;
    start = at + 1;
  }
}

Table read_tabular(const std::filesystem::path& path, const SourceTableDef& def, const std::string& where) {
  auto text = read_text(path);
  std::vector<std::string_view> lines;
  std::string_view rest(text);
  while (!rest.empty()) {
    auto eol = rest.find('\n');
    auto line = rest.substr(0, eol);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    rest = eol == std::string_view::npos ? std::string_view{} : rest.substr(eol + 1);
  }
  if (lines.empty()) throw Error(ErrorCode::IoError, path.string() + ": missing header line");
  auto header = split(lines.front(), '|');
  std::vector<std::size_t> columns;
  for (const auto& field : def.fields) {
    auto it = std::find(header.begin(), header.end(), field.name);
    if (it == header.end()) throw Error(ErrorCode::IoError, path.string() + ": no column '" + field.name + "'");
    columns.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  Table table{def.name, def.fields, {}};
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto cells = split(lines[i], '|');
    if (cells.size() != header.size())
      throw Error(ErrorCode::IoError, path.string() + " line " + std::to_string(i + 1) + ": expected " +
                                          std::to_string(header.size()) + " cells, found " +
                                          std::to_string(cells.size()));
    Row row;
    for (std::size_t f = 0; f < def.fields.size(); ++f)
      row.cells.push_back(coerce(cells[columns[f]], def.fields[f], i, where));
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::string trimmed(const std::string& text) {
  auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  return text.substr(begin, text.find_last_not_of(" \t\r\n") - begin + 1);
}

void collect_records(const pt::ptree& node, const std::string& record, std::vector<const pt::ptree*>& out) {
  for (const auto& [key, child] : node) {
    if (key == "<xmlattr>" || key == "<xmlcomment>") continue;
    if (key == record) out.push_back(&child);
    else collect_records(child, record, out);
  }
}

Table read_xml_table(const Project& project, const DataSourceDescriptor& source, const SourceTableDef& def,
                     const XmlBinding& binding, const std::string& where) {
  auto path = resolve(project, source, source.location);
  std::string document = binding.transform ? run_transform(*binding.transform, path) : read_text(path);
  pt::ptree tree;
  std::istringstream in(document);
  try {
    pt::read_xml(in, tree, pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::IoError, path.string() + " line " + std::to_string(e.line()) + ": " + e.message());
  }
  std::vector<const pt::ptree*> records;
  collect_records(tree, binding.record_element, records);
  Table table{def.name, def.fields, {}};
  for (std::size_t r = 0; r < records.size(); ++r) {
    Row row;
    for (const auto& field : def.fields) {
      auto mapping = std::find_if(binding.field_elements.begin(), binding.field_elements.end(),
                                  [&](const auto& m) { return m.first == field.name; });
      std::string text;
      if (mapping != binding.field_elements.end())
        if (auto child = records[r]->get_child_optional(pt::ptree::path_type(mapping->second, '\0')))
          text = trimmed(child->data());
      row.cells.push_back(coerce(text, field, r + 1, where));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

bool condition_holds(const Table& table, const Row& row, const Condition& cond) {
  const Cell& lhs = row.cells[*table.column(cond.lhs.field)];
  if (lhs.is_missing()) return false;
  std::optional<bool> result;
  if (const auto* field = std::get_if<QualifiedField>(&cond.rhs)) {
    const Cell& rhs = row.cells[*table.column(field->field)];
    if (rhs.is_missing()) return false;
    result = compare_typed(*lhs.lexical, lhs.dtype, cond.op, *rhs.lexical, rhs.dtype);
  } else {
    const auto& literal = std::get<Literal>(cond.rhs);
    result = compare_typed(*lhs.lexical, lhs.dtype, cond.op, literal.lexical, literal.dtype);
  }
  return result.value_or(false);
}

Table fetch_impl(const Project& project, const std::string& source, const std::string& table, AccessLog& log,
                 std::set<std::string>& open_views);

Table view_impl(const Project& project, const std::string& source, const std::string& view_sql, AccessLog& log,
                std::set<std::string>& open_views) {
  auto query = parse_view_sql(view_sql);
  const auto& base_name = query.from.front();
  require_table(require_source(project, source), base_name);
  auto base = fetch_impl(project, source, base_name, log, open_views);
  auto check = [&](const QualifiedField& f) {
    if (!base.column(f.field)) throw Error(ErrorCode::UnknownField, source + "." + base_name + "." + f.field);
  };
  for (const auto& f : query.select) check(f);
  for (const auto& c : query.filters) {
    check(c.lhs);
    if (const auto* f = std::get_if<QualifiedField>(&c.rhs)) check(*f);
  }
  Table result{base.name, {}, {}};
  std::vector<std::size_t> projection;
  for (const auto& f : query.select) {
    projection.push_back(*base.column(f.field));
    result.fields.push_back(base.fields[projection.back()]);
  }
  for (const auto& row : base.rows) {
    bool keep = std::all_of(query.filters.begin(), query.filters.end(),
                            [&](const Condition& c) { return condition_holds(base, row, c); });
    if (!keep) continue;
    Row projected;
    for (auto col : projection) projected.cells.push_back(row.cells[col]);
    result.rows.push_back(std::move(projected));
  }
  return result;
}

Table fetch_impl(const Project& project, const std::string& source, const std::string& table, AccessLog& log,
                 std::set<std::string>& open_views) {
  const auto& src = require_source(project, source);
  const auto& def = require_table(src, table);
  log.append({source, table});
  auto where = source + "." + table;
  if (const auto* file = std::get_if<FileBinding>(&def.binding))
    return read_tabular(resolve(project, src, file->path), def, where);
  if (const auto* xml = std::get_if<XmlBinding>(&def.binding)) return read_xml_table(project, src, def, *xml, where);

  const auto& view = std::get<ViewBinding>(def.binding);
  if (!open_views.insert(where).second) throw Error(ErrorCode::UnsupportedSql, "recursive view " + where);
  auto result = view_impl(project, source, view.query, log, open_views);
  open_views.erase(where);
  Table out{def.name, def.fields, {}};
  std::vector<std::size_t> columns;
  for (const auto& field : def.fields) {
    auto col = result.column(field.name);
    if (!col) throw Error(ErrorCode::UnknownField, where + "." + field.name + " is not produced by its view");
    columns.push_back(*col);
  }
  for (std::size_t r = 0; r < result.rows.size(); ++r) {
    Row row;
    for (std::size_t f = 0; f < def.fields.size(); ++f) {
      const Cell& cell = result.rows[r].cells[columns[f]];
      row.cells.push_back(cell.is_missing() ? Cell::missing(def.fields[f].dtype)
                                            : coerce(*cell.lexical, def.fields[f], r + 1, where));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace

Table fetch_table(const Project& project, const std::string& source, const std::string& table, AccessLog& log) {
  std::set<std::string> open_views;
  return fetch_impl(project, source, table, log, open_views);
}

Table evaluate_view(const Project& project, const std::string& source, const std::string& view_sql,
                    AccessLog& log) {
  std::set<std::string> open_views;
  return view_impl(project, source, view_sql, log, open_views);
}

std::string format_tabular(const Table& table) {
  std::string out;
  for (std::size_t i = 0; i < table.fields.size(); ++i) out += (i ? "|" : "") + table.fields[i].name;
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.cells.size(); ++i) {
      if (i) out += '|';
      if (!row.cells[i].is_missing()) out += *row.cells[i].lexical;
    }
    out += '\n';
  }
  return out;
}

}  // namespace medquery
