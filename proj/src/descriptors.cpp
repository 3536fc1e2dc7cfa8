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

#include "medquery/descriptors.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "medquery/error.hpp"

namespace medquery {

namespace pt = boost::property_tree;

const SourceFieldDef* SourceTableDef::find_field(std::string_view field) const {
  for (const auto& f : fields)
    if (f.name == field) return &f;
  return nullptr;
}

const SourceTableDef* DataSourceDescriptor::find_table(std::string_view table) const {
  for (const auto& t : tables)
    if (t.name == table) return &t;
  return nullptr;
}

const IntegratedFieldDef* IntegratedTableDef::find_field(std::string_view field) const {
  for (const auto& f : fields)
    if (f.name == field) return &f;
  return nullptr;
}

const IntegratedTableDef* IntegratedSchema::find_table(std::string_view table) const {
  for (const auto& t : tables)
    if (t.name == table) return &t;
  return nullptr;
}

const DataSourceDescriptor* Project::find_source(std::string_view source) const {
  for (const auto& s : sources)
    if (s.name == source) return &s;
  return nullptr;
}

const SourceTableDef* Project::find_table(const TableRef& ref) const {
  const auto* source = find_source(ref.source);
  return source ? source->find_table(ref.table) : nullptr;
}

std::string_view to_string(DerivedOp op) { return op == DerivedOp::Add ? "add" : "concat"; }

namespace {

std::string trim(const std::string& text) {
  auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

[[noreturn]] void invalid(const std::string& message) {
  throw Error(ErrorCode::InvalidDescriptor, message);
}

pt::ptree read_document(const std::string& text, std::string_view what) {
  std::istringstream in(text);
  pt::ptree tree;
  try {
    pt::read_xml(in, tree, pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::MalformedXml, std::string(what) + " line " + std::to_string(e.line()) +
                                             ": " + e.message());
  }
  return tree;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::optional<std::string> attribute(const pt::ptree& node, const std::string& name) {
  if (auto attrs = node.get_child_optional("<xmlattr>"))
    if (auto value = attrs->get_optional<std::string>(name)) return *value;
  return std::nullopt;
}

std::string required_attribute(const pt::ptree& node, const std::string& name,
                               const std::string& element) {
  auto value = attribute(node, name);
  if (!value || value->empty()) invalid("<" + element + "> requires attribute '" + name + "'");
  return *value;
}

/// Single root element with the expected name.
const pt::ptree& root_element(const pt::ptree& doc, const std::string& name) {
  const pt::ptree* root = nullptr;
  for (const auto& [key, child] : doc) {
    if (key == "<xmlcomment>") continue;
    if (key != name || root) invalid("expected a single <" + name + "> root element");
    root = &child;
  }
  if (!root) invalid("expected a single <" + name + "> root element");
  return *root;
}

DataType parse_type_attribute(const pt::ptree& node, const std::string& element) {
  auto name = required_attribute(node, "type", element);
  auto type = parse_data_type(name);
  if (!type) invalid("unknown field type '" + name + "'");
  return *type;
}

template <typename Seen>
void insert_unique(Seen& seen, const std::string& name, const std::string& kind) {
  if (!seen.insert(name).second) throw Error(ErrorCode::DuplicateName, kind + " '" + name + "'");
}

SourceTableDef parse_source_table(const pt::ptree& node, SourceKind kind, const std::string& source) {
  SourceTableDef table;
  table.name = required_attribute(node, "name", "table");
  std::set<std::string> field_names;
  int bindings = 0;
  for (const auto& [key, child] : node) {
    if (key == "<xmlattr>" || key == "<xmlcomment>") continue;
    if (key == "field") {
      SourceFieldDef field{required_attribute(child, "name", "field"), parse_type_attribute(child, "field")};
      insert_unique(field_names, field.name, "field " + source + "." + table.name);
      table.fields.push_back(std::move(field));
    } else if (key == "file") {
      table.binding = FileBinding{required_attribute(child, "path", "file")};
      ++bindings;
    } else if (key == "view") {
      table.binding = ViewBinding{trim(child.data())};
      ++bindings;
    } else if (key == "xmlbinding") {
      XmlBinding binding;
      binding.record_element = required_attribute(child, "record", "xmlbinding");
      binding.transform = attribute(child, "transform");
      for (const auto& [mkey, map] : child) {
        if (mkey == "<xmlattr>" || mkey == "<xmlcomment>") continue;
        if (mkey != "map") invalid("unexpected <" + mkey + "> inside <xmlbinding>");
        binding.field_elements.emplace_back(required_attribute(map, "field", "map"),
                                            required_attribute(map, "element", "map"));
      }
      table.binding = std::move(binding);
      ++bindings;
    } else if (key != "<xmltext>") {
      invalid("unexpected <" + key + "> inside <table>");
    }
  }
  if (bindings != 1)
    invalid("table " + source + "." + table.name + " needs exactly one of <file>, <view>, <xmlbinding>");
  bool is_xml = std::holds_alternative<XmlBinding>(table.binding);
  if (kind == SourceKind::Xml && !is_xml)
    invalid("table " + source + "." + table.name + " of an xml source needs <xmlbinding>");
  if (kind == SourceKind::Tabular && is_xml)
    invalid("table " + source + "." + table.name + " of a tabular source needs <file> or <view>");
  if (const auto* xml = std::get_if<XmlBinding>(&table.binding)) {
    std::set<std::string> mapped;
    for (const auto& [field, element] : xml->field_elements) {
      if (!table.find_field(field))
        invalid("<map> names undeclared field " + source + "." + table.name + "." + field);
      insert_unique(mapped, field, "mapping for field " + source + "." + table.name);
    }
  }
  return table;
}

std::vector<DataSourceDescriptor> parse_sources(const pt::ptree& doc) {
  const auto& root = root_element(doc, "datasources");
  std::vector<DataSourceDescriptor> sources;
  std::set<std::string> source_names;
  for (const auto& [key, node] : root) {
    if (key == "<xmlattr>" || key == "<xmlcomment>" || key == "<xmltext>") continue;
    if (key != "datasource") invalid("unexpected <" + key + "> inside <datasources>");
    DataSourceDescriptor source;
    source.name = required_attribute(node, "name", "datasource");
    insert_unique(source_names, source.name, "data source");
    auto kind = required_attribute(node, "kind", "datasource");
    if (kind == "tabular") source.kind = SourceKind::Tabular;
    else if (kind == "xml") source.kind = SourceKind::Xml;
    else invalid("unknown data source kind '" + kind + "'");
    source.location = attribute(node, "location").value_or("");
    if (source.kind == SourceKind::Xml && source.location.empty())
      invalid("xml data source '" + source.name + "' needs a location");
    std::set<std::string> table_names;
    for (const auto& [ckey, child] : node) {
      if (ckey == "<xmlattr>" || ckey == "<xmlcomment>" || ckey == "<xmltext>") continue;
      if (ckey == "credentials") {
        source.credentials = Credentials{attribute(child, "user").value_or(""),
                                         attribute(child, "password").value_or("")};
      } else if (ckey == "table") {
        auto table = parse_source_table(child, source.kind, source.name);
        insert_unique(table_names, table.name, "table in source '" + source.name + "'");
        source.tables.push_back(std::move(table));
      } else {
        invalid("unexpected <" + ckey + "> inside <datasource>");
      }
    }
    sources.push_back(std::move(source));
  }
  return sources;
}

FieldRef parse_ref(const pt::ptree& node, const std::string& element) {
  return {required_attribute(node, "source", element), required_attribute(node, "table", element),
          required_attribute(node, "field", element)};
}

std::vector<FieldRef> parse_ref_list(const pt::ptree& node, const std::string& element) {
  std::vector<FieldRef> refs;
  for (const auto& [key, child] : node) {
    if (key == "<xmlattr>" || key == "<xmlcomment>" || key == "<xmltext>") continue;
    if (key != "ref") invalid("unexpected <" + key + "> inside <" + element + ">");
    refs.push_back(parse_ref(child, "ref"));
  }
  return refs;
}

Relation parse_relation(const pt::ptree& node) {
  auto kind = required_attribute(node, "kind", "relation");
  if (kind == "equality") {
    EqualityRelation relation;
    int lhs = 0, rhs = 0;
    for (const auto& [key, child] : node) {
      if (key == "<xmlattr>" || key == "<xmlcomment>" || key == "<xmltext>") continue;
      if (key == "lhs") {
        relation.lhs = parse_ref_list(child, "lhs");
        ++lhs;
      } else if (key == "rhs") {
        relation.rhs = parse_ref_list(child, "rhs");
        ++rhs;
      } else {
        invalid("unexpected <" + key + "> inside equality <relation>");
      }
    }
    if (lhs != 1 || rhs != 1) invalid("equality <relation> needs exactly one <lhs> and one <rhs>");
    return relation;
  }
  if (kind == "derived") {
    DerivedRelation relation;
    auto op = required_attribute(node, "op", "relation");
    if (op == "add") relation.op = DerivedOp::Add;
    else if (op == "concat") relation.op = DerivedOp::Concat;
    else invalid("unknown derived op '" + op + "'");
    int targets = 0;
    for (const auto& [key, child] : node) {
      if (key == "<xmlattr>" || key == "<xmlcomment>" || key == "<xmltext>") continue;
      if (key == "target") {
        relation.target = parse_ref(child, "target");
        ++targets;
      } else if (key == "operand") {
        relation.operands.push_back(parse_ref(child, "operand"));
      } else {
        invalid("unexpected <" + key + "> inside derived <relation>");
      }
    }
    if (targets != 1) invalid("derived <relation> needs exactly one <target>");
    return relation;
  }
  invalid("unknown relation kind '" + kind + "'");
}

IntegratedSchema parse_schema(const pt::ptree& doc) {
  const auto& root = root_element(doc, "schema");
  IntegratedSchema schema;
  schema.name = required_attribute(root, "name", "schema");
  std::set<std::string> table_names;
  for (const auto& [key, node] : root) {
    if (key == "<xmlattr>" || key == "<xmlcomment>" || key == "<xmltext>") continue;
    if (key == "table") {
      IntegratedTableDef table;
      table.name = required_attribute(node, "name", "table");
      insert_unique(table_names, table.name, "integrated table");
      std::set<std::string> field_names;
      for (const auto& [fkey, field] : node) {
        if (fkey == "<xmlattr>" || fkey == "<xmlcomment>" || fkey == "<xmltext>") continue;
        if (fkey != "field") invalid("unexpected <" + fkey + "> inside integrated <table>");
        IntegratedFieldDef def;
        def.name = required_attribute(field, "name", "field");
        def.dtype = parse_type_attribute(field, "field");
        def.mapping = {required_attribute(field, "source", "field"),
                       required_attribute(field, "sourcetable", "field"),
                       required_attribute(field, "sourcefield", "field")};
        insert_unique(field_names, def.name, "field in integrated table '" + table.name + "'");
        table.fields.push_back(std::move(def));
      }
      if (table.fields.empty()) invalid("integrated table '" + table.name + "' has no fields");
      schema.tables.push_back(std::move(table));
    } else if (key == "relation") {
      schema.relations.push_back(parse_relation(node));
    } else {
      invalid("unexpected <" + key + "> inside <schema>");
    }
  }
  return schema;
}

}  // namespace

const SourceFieldDef& resolve_field_ref(const Project& project, const FieldRef& ref) {
  const auto* source = project.find_source(ref.source);
  if (!source) throw Error(ErrorCode::UnresolvedFieldRef, ref.to_string() + ": no data source '" + ref.source + "'");
  const auto* table = source->find_table(ref.table);
  if (!table)
    throw Error(ErrorCode::UnresolvedFieldRef,
                ref.to_string() + ": no table '" + ref.table + "' in source '" + ref.source + "'");
  const auto* field = table->find_field(ref.field);
  if (!field)
    throw Error(ErrorCode::UnresolvedFieldRef,
                ref.to_string() + ": no field '" + ref.field + "' in table '" + ref.source + "." + ref.table + "'");
  return *field;
}

Project parse_project_text(const std::string& source_desc_xml, const std::string& schema_desc_xml,
                           std::filesystem::path base_dir) {
  Project project;
  project.sources = parse_sources(read_document(source_desc_xml, "data source descriptor"));
  project.schema = parse_schema(read_document(schema_desc_xml, "schema descriptor"));
  project.base_dir = std::move(base_dir);
  for (const auto& table : project.schema.tables)
    for (const auto& field : table.fields) resolve_field_ref(project, field.mapping);
  return project;
}

Project parse_project(const std::filesystem::path& source_desc_path,
                      const std::filesystem::path& schema_desc_path) {
  auto sources = read_file(source_desc_path);
  auto schema = read_file(schema_desc_path);
  return parse_project_text(sources, schema, source_desc_path.parent_path());
}

std::string xml_escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

std::string attr(std::string_view name, std::string_view value) {
  return " " + std::string(name) + "=\"" + xml_escape(value) + "\"";
}

std::string ref_attrs(const FieldRef& ref) {
  return attr("source", ref.source) + attr("table", ref.table) + attr("field", ref.field);
}

}  // namespace

std::string serialize_sources(const std::vector<DataSourceDescriptor>& sources) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<datasources>\n";
  for (const auto& source : sources) {
    out << "  <datasource" << attr("name", source.name)
        << attr("kind", source.kind == SourceKind::Xml ? "xml" : "tabular")
        << attr("location", source.location) << ">\n";
    if (source.credentials)
      out << "    <credentials" << attr("user", source.credentials->user)
          << attr("password", source.credentials->password) << "/>\n";
    for (const auto& table : source.tables) {
      out << "    <table" << attr("name", table.name) << ">\n";
      for (const auto& field : table.fields)
        out << "      <field" << attr("name", field.name) << attr("type", to_string(field.dtype)) << "/>\n";
      if (const auto* file = std::get_if<FileBinding>(&table.binding)) {
        out << "      <file" << attr("path", file->path) << "/>\n";
      } else if (const auto* view = std::get_if<ViewBinding>(&table.binding)) {
        out << "      <view>" << xml_escape(view->query) << "</view>\n";
      } else {
        const auto& xml = std::get<XmlBinding>(table.binding);
        out << "      <xmlbinding" << attr("record", xml.record_element);
        if (xml.transform) out << attr("transform", *xml.transform);
        out << ">\n";
        for (const auto& [field, element] : xml.field_elements)
          out << "        <map" << attr("field", field) << attr("element", element) << "/>\n";
        out << "      </xmlbinding>\n";
      }
      out << "    </table>\n";
    }
    out << "  </datasource>\n";
  }
  out << "</datasources>\n";
  return out.str();
}

std::string serialize_schema(const IntegratedSchema& schema) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<schema" << attr("name", schema.name) << ">\n";
  for (const auto& table : schema.tables) {
    out << "  <table" << attr("name", table.name) << ">\n";
    for (const auto& field : table.fields)
      out << "    <field" << attr("name", field.name) << attr("type", to_string(field.dtype))
          << attr("source", field.mapping.source) << attr("sourcetable", field.mapping.table)
          << attr("sourcefield", field.mapping.field) << "/>\n";
    out << "  </table>\n";
  }
  for (const auto& relation : schema.relations) {
    if (const auto* eq = std::get_if<EqualityRelation>(&relation)) {
      out << "  <relation kind=\"equality\">\n    <lhs>\n";
      for (const auto& ref : eq->lhs) out << "      <ref" << ref_attrs(ref) << "/>\n";
      out << "    </lhs>\n    <rhs>\n";
      for (const auto& ref : eq->rhs) out << "      <ref" << ref_attrs(ref) << "/>\n";
      out << "    </rhs>\n  </relation>\n";
    } else {
      const auto& derived = std::get<DerivedRelation>(relation);
      out << "  <relation kind=\"derived\"" << attr("op", to_string(derived.op)) << ">\n";
      out << "    <target" << ref_attrs(derived.target) << "/>\n";
      for (const auto& ref : derived.operands) out << "    <operand" << ref_attrs(ref) << "/>\n";
      out << "  </relation>\n";
    }
  }
  out << "</schema>\n";
  return out.str();
}

}  // namespace medquery
