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

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "medquery/datatype.hpp"

namespace medquery {

enum class SourceKind { Tabular, Xml };

struct Credentials {
  std::string user;
  std::string password;
  bool operator==(const Credentials&) const = default;
};

struct SourceFieldDef {
  std::string name;
  DataType dtype = DataType::String;
  bool operator==(const SourceFieldDef&) const = default;
};

struct FileBinding {
  std::string path;
  bool operator==(const FileBinding&) const = default;
};

struct ViewBinding {
  std::string query;
  bool operator==(const ViewBinding&) const = default;
};

struct XmlBinding {
  std::string record_element;
  /// field name -> child element name, in declaration order.
  std::vector<std::pair<std::string, std::string>> field_elements;
  /// Optional shell command; reads the XML document on stdin, writes XML.
  std::optional<std::string> transform;
  bool operator==(const XmlBinding&) const = default;
};

using TableBinding = std::variant<FileBinding, ViewBinding, XmlBinding>;

struct SourceTableDef {
  std::string name;
  std::vector<SourceFieldDef> fields;
  TableBinding binding;

  const SourceFieldDef* find_field(std::string_view field) const;
  bool operator==(const SourceTableDef&) const = default;
};

struct DataSourceDescriptor {
  std::string name;
  SourceKind kind = SourceKind::Tabular;
  /// Tabular: base directory for file bindings. Xml: the document.
  std::string location;
  std::optional<Credentials> credentials;
  std::vector<SourceTableDef> tables;

  const SourceTableDef* find_table(std::string_view table) const;
  bool operator==(const DataSourceDescriptor&) const = default;
};

struct FieldRef {
  std::string source;
  std::string table;
  std::string field;

  std::string to_string() const { return source + "." + table + "." + field; }
  auto operator<=>(const FieldRef&) const = default;
};

/// (source, table) pair naming one source table.
struct TableRef {
  std::string source;
  std::string table;

  std::string to_string() const { return source + "." + table; }
  auto operator<=>(const TableRef&) const = default;
};

inline TableRef table_of(const FieldRef& ref) { return {ref.source, ref.table}; }

struct IntegratedFieldDef {
  std::string name;
  DataType dtype = DataType::String;
  FieldRef mapping;
  bool operator==(const IntegratedFieldDef&) const = default;
};

struct IntegratedTableDef {
  std::string name;
  /// Ordered; the first field is the extraction master.
  std::vector<IntegratedFieldDef> fields;

  const IntegratedFieldDef* find_field(std::string_view field) const;
  bool operator==(const IntegratedTableDef&) const = default;
};

/// Pairwise equality of two field lists.
struct EqualityRelation {
  std::vector<FieldRef> lhs;
  std::vector<FieldRef> rhs;
  bool operator==(const EqualityRelation&) const = default;
};

enum class DerivedOp { Add, Concat };

/// target = operand[0] op operand[1] op ...
struct DerivedRelation {
  FieldRef target;
  DerivedOp op = DerivedOp::Add;
  std::vector<FieldRef> operands;
  bool operator==(const DerivedRelation&) const = default;
};

using Relation = std::variant<EqualityRelation, DerivedRelation>;

struct IntegratedSchema {
  std::string name;
  std::vector<IntegratedTableDef> tables;
  std::vector<Relation> relations;

  const IntegratedTableDef* find_table(std::string_view table) const;
  bool operator==(const IntegratedSchema&) const = default;
};

struct Project {
  std::vector<DataSourceDescriptor> sources;
  IntegratedSchema schema;
  /// Directory relative locations and file bindings resolve against.
  std::filesystem::path base_dir;

  const DataSourceDescriptor* find_source(std::string_view source) const;
  const SourceTableDef* find_table(const TableRef& ref) const;

  /// Structural equality; base_dir is not part of the structure.
  bool same_structure(const Project& other) const {
    return sources == other.sources && schema == other.schema;
  }
};

std::string_view to_string(DerivedOp op);

/// Parses both descriptor files. Relative paths inside the source
/// descriptor resolve against that file's directory.
Project parse_project(const std::filesystem::path& source_desc_path,
                      const std::filesystem::path& schema_desc_path);

/// Same as parse_project, from in-memory documents.
Project parse_project_text(const std::string& source_desc_xml, const std::string& schema_desc_xml,
                           std::filesystem::path base_dir = {});

/// Returns the declared source field; throws UnresolvedFieldRef naming the
/// first missing component.
const SourceFieldDef& resolve_field_ref(const Project& project, const FieldRef& ref);

std::string serialize_sources(const std::vector<DataSourceDescriptor>& sources);
std::string serialize_schema(const IntegratedSchema& schema);

std::string xml_escape(std::string_view text);

}  // namespace medquery
