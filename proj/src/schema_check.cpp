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

#include "medquery/schema_check.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "medquery/error.hpp"
#include "medquery/sql.hpp"

namespace medquery {

std::string_view to_string(Severity severity) { return severity == Severity::Error ? "error" : "warning"; }

std::string_view to_string(FindingCode code) {
  switch (code) {
    case FindingCode::UnresolvedRef: return "UNRESOLVED_REF";
    case FindingCode::TypeMismatch: return "TYPE_MISMATCH";
    case FindingCode::ArityMismatch: return "ARITY_MISMATCH";
    case FindingCode::CyclicDerivation: return "CYCLIC_DERIVATION";
    case FindingCode::UnmappedTable: return "UNMAPPED_TABLE";
  }
  return "UNKNOWN";
}

std::size_t SatisfiabilityReport::error_count() const {
  return static_cast<std::size_t>(std::count_if(findings.begin(), findings.end(),
                                                [](const Finding& f) { return f.severity == Severity::Error; }));
}

std::size_t SatisfiabilityReport::warning_count() const { return findings.size() - error_count(); }

std::string SatisfiabilityReport::to_text() const {
  std::ostringstream out;
  for (const auto& f : findings)
    out << to_string(f.severity) << ' ' << to_string(f.code) << ' ' << f.location << ": " << f.message << '\n';
  auto errors = error_count();
  auto warnings = warning_count();
  out << errors << (errors == 1 ? " error, " : " errors, ") << warnings
      << (warnings == 1 ? " warning\n" : " warnings\n");
  return out.str();
}

std::string SatisfiabilityReport::to_xml() const {
  std::ostringstream out;
  out << "<report errors=\"" << error_count() << "\" warnings=\"" << warning_count() << "\">\n";
  for (const auto& f : findings)
    out << "  <finding severity=\"" << to_string(f.severity) << "\" code=\"" << to_string(f.code)
        << "\" location=\"" << xml_escape(f.location) << "\" message=\"" << xml_escape(f.message) << "\"/>\n";
  out << "</report>\n";
  return out.str();
}

namespace {

class Checker {
 public:
  explicit Checker(const Project& project) : project_(project) {}

  SatisfiabilityReport run() {
    check_references();
    check_types();
    check_arity();
    check_cycles();
    check_unmapped();
    return std::move(report_);
  }

 private:
  void add(Severity severity, FindingCode code, std::string location, std::string message) {
    report_.findings.push_back({severity, code, std::move(location), std::move(message)});
  }

  static std::string relation_location(std::size_t index) {
    return "schema/relation[" + std::to_string(index + 1) + "]";
  }

  const SourceFieldDef* lookup(const FieldRef& ref) const {
    const auto* table = project_.find_table(table_of(ref));
    return table ? table->find_field(ref.field) : nullptr;
  }

  template <typename Fn>
  void for_each_ref(Fn&& fn) const {
    const auto& relations = project_.schema.relations;
    for (std::size_t i = 0; i < relations.size(); ++i) {
      auto loc = relation_location(i);
      if (const auto* eq = std::get_if<EqualityRelation>(&relations[i])) {
        for (std::size_t j = 0; j < eq->lhs.size(); ++j)
          fn(eq->lhs[j], loc + "/lhs/ref[" + std::to_string(j + 1) + "]");
        for (std::size_t j = 0; j < eq->rhs.size(); ++j)
          fn(eq->rhs[j], loc + "/rhs/ref[" + std::to_string(j + 1) + "]");
      } else {
        const auto& derived = std::get<DerivedRelation>(relations[i]);
        fn(derived.target, loc + "/target");
        for (std::size_t j = 0; j < derived.operands.size(); ++j)
          fn(derived.operands[j], loc + "/operand[" + std::to_string(j + 1) + "]");
      }
    }
  }

  void check_references() {
    for_each_ref([&](const FieldRef& ref, const std::string& loc) {
      try {
        resolve_field_ref(project_, ref);
      } catch (const Error& e) {
        add(Severity::Error, FindingCode::UnresolvedRef, loc, e.detail());
      }
    });
  }

  void check_types() {
    for (const auto& table : project_.schema.tables) {
      for (const auto& field : table.fields) {
        const auto* source = lookup(field.mapping);
        if (source && source->dtype != field.dtype)
          add(Severity::Error, FindingCode::TypeMismatch,
              "schema/table[" + table.name + "]/field[" + field.name + "]",
              "declared " + std::string(to_string(field.dtype)) + " but " + field.mapping.to_string() + " is " +
                  std::string(to_string(source->dtype)));
      }
    }
    const auto& relations = project_.schema.relations;
    for (std::size_t i = 0; i < relations.size(); ++i) {
      auto loc = relation_location(i);
      if (const auto* eq = std::get_if<EqualityRelation>(&relations[i])) {
        for (std::size_t j = 0; j < std::min(eq->lhs.size(), eq->rhs.size()); ++j) {
          const auto* l = lookup(eq->lhs[j]);
          const auto* r = lookup(eq->rhs[j]);
          if (l && r && l->dtype != r->dtype)
            add(Severity::Error, FindingCode::TypeMismatch, loc,
                eq->lhs[j].to_string() + " (" + std::string(to_string(l->dtype)) + ") = " + eq->rhs[j].to_string() +
                    " (" + std::string(to_string(r->dtype)) + ")");
        }
        continue;
      }
      const auto& derived = std::get<DerivedRelation>(relations[i]);
      const auto* target = lookup(derived.target);
      if (derived.op == DerivedOp::Concat) {
        if (target && target->dtype != DataType::String)
          add(Severity::Error, FindingCode::TypeMismatch, loc + "/target",
              "concat target " + derived.target.to_string() + " is " + std::string(to_string(target->dtype)) +
                  ", expected string");
        continue;
      }
      bool decimal_operand = false;
      for (std::size_t j = 0; j < derived.operands.size(); ++j) {
        const auto* operand = lookup(derived.operands[j]);
        if (!operand) continue;
        decimal_operand |= operand->dtype == DataType::Decimal;
        if (!is_numeric(operand->dtype))
          add(Severity::Error, FindingCode::TypeMismatch, loc + "/operand[" + std::to_string(j + 1) + "]",
              "add operand " + derived.operands[j].to_string() + " is " + std::string(to_string(operand->dtype)));
      }
      if (target && !is_numeric(target->dtype))
        add(Severity::Error, FindingCode::TypeMismatch, loc + "/target",
            "add target " + derived.target.to_string() + " is " + std::string(to_string(target->dtype)));
      else if (target && target->dtype == DataType::Integer && decimal_operand)
        add(Severity::Error, FindingCode::TypeMismatch, loc + "/target",
            "integer target " + derived.target.to_string() + " cannot hold a sum of decimal operands");
    }
  }

  void check_arity() {
    const auto& relations = project_.schema.relations;
    for (std::size_t i = 0; i < relations.size(); ++i) {
      if (const auto* eq = std::get_if<EqualityRelation>(&relations[i])) {
        if (eq->lhs.size() != eq->rhs.size() || eq->lhs.empty())
          add(Severity::Error, FindingCode::ArityMismatch, relation_location(i),
              "equality pairs " + std::to_string(eq->lhs.size()) + " field(s) with " +
                  std::to_string(eq->rhs.size()));
      } else if (std::get<DerivedRelation>(relations[i]).operands.size() < 2) {
        add(Severity::Error, FindingCode::ArityMismatch, relation_location(i),
            "derived relation needs at least 2 operands");
      }
    }
  }

  // Tarjan over target -> operand edges; one finding per cyclic component.
  void check_cycles() {
    std::vector<std::string> names;
    std::map<std::string, std::size_t> ids;
    std::vector<std::vector<std::size_t>> edges;
    std::vector<std::size_t> first_relation;
    auto node = [&](const FieldRef& ref, std::size_t relation) {
      auto [it, inserted] = ids.emplace(ref.to_string(), names.size());
      if (inserted) {
        names.push_back(ref.to_string());
        edges.emplace_back();
        first_relation.push_back(relation);
      }
      return it->second;
    };
    const auto& relations = project_.schema.relations;
    std::vector<std::size_t> defining_relation;
    for (std::size_t i = 0; i < relations.size(); ++i) {
      const auto* derived = std::get_if<DerivedRelation>(&relations[i]);
      if (!derived) continue;
      auto target = node(derived->target, i);
      for (const auto& operand : derived->operands) {
        auto op = node(operand, i);
        if (std::find(edges[target].begin(), edges[target].end(), op) == edges[target].end())
          edges[target].push_back(op);
      }
    }
    if (names.empty()) return;

    const std::size_t n = names.size();
    const std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0), component(n, unvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t counter = 0, components = 0;
    std::function<void(std::size_t)> connect = [&](std::size_t v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack[v] = true;
      for (auto w : edges[v]) {
        if (index[w] == unvisited) {
          connect(w);
          low[v] = std::min(low[v], low[w]);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      }
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component[w] = components;
        } while (w != v);
        ++components;
      }
    };
    for (std::size_t v = 0; v < n; ++v)
      if (index[v] == unvisited) connect(v);

    std::vector<std::vector<std::size_t>> members(components);
    for (std::size_t v = 0; v < n; ++v) members[component[v]].push_back(v);
    std::vector<bool> reported(components, false);
    // Nodes are numbered in document order, so the first member is the start.
    for (std::size_t v = 0; v < n; ++v) {
      auto c = component[v];
      if (reported[c]) continue;
      reported[c] = true;
      bool self_loop = std::find(edges[v].begin(), edges[v].end(), v) != edges[v].end();
      if (members[c].size() < 2 && !self_loop) continue;
      auto path = cycle_through(v, edges, component);
      std::string message = "derivation cycle ";
      for (std::size_t k = 0; k < path.size(); ++k) message += (k ? " -> " : "") + names[path[k]];
      add(Severity::Error, FindingCode::CyclicDerivation, relation_location(first_relation[v]), message);
    }
  }

  // Shortest cycle from start back to itself, staying inside its component.
  static std::vector<std::size_t> cycle_through(std::size_t start, const std::vector<std::vector<std::size_t>>& edges,
                                                const std::vector<std::size_t>& component) {
    std::vector<std::size_t> parent(edges.size(), static_cast<std::size_t>(-1));
    std::vector<bool> seen(edges.size(), false);
    std::vector<std::size_t> frontier{start};
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      auto v = frontier[head];
      for (auto w : edges[v]) {
        if (component[w] != component[start]) continue;
        if (w == start) {
          std::vector<std::size_t> path{start};
          for (auto u = v; u != start; u = parent[u]) path.push_back(u);
          std::reverse(path.begin() + 1, path.end());
          path.push_back(start);
          return path;
        }
        if (!seen[w]) {
          seen[w] = true;
          parent[w] = v;
          frontier.push_back(w);
        }
      }
    }
    return {start, start};
  }

  void check_unmapped() {
    std::set<TableRef> used;
    for (const auto& table : project_.schema.tables)
      for (const auto& field : table.fields) used.insert(table_of(field.mapping));
    for_each_ref([&](const FieldRef& ref, const std::string&) { used.insert(table_of(ref)); });
    // Tables feeding a used view count as used.
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& source : project_.sources) {
        for (const auto& table : source.tables) {
          const auto* view = std::get_if<ViewBinding>(&table.binding);
          if (!view || !used.count({source.name, table.name})) continue;
          try {
            auto base = parse_view_sql(view->query).from.front();
            grew |= used.insert({source.name, base}).second;
          } catch (const Error&) {
          }
        }
      }
    }
    for (const auto& source : project_.sources)
      for (const auto& table : source.tables)
        if (!used.count({source.name, table.name}))
          add(Severity::Warning, FindingCode::UnmappedTable,
              "datasources/datasource[" + source.name + "]/table[" + table.name + "]",
              "source table " + source.name + "." + table.name + " is not used by any mapping or relation");
  }

  const Project& project_;
  SatisfiabilityReport report_;
};

}  // namespace

SatisfiabilityReport check_schema(const Project& project) { return Checker(project).run(); }

}  // namespace medquery
