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

#include "medquery/sql_to_rdql.hpp"

#include <algorithm>
#include <regex>
#include <set>

#include "medquery/iri.hpp"

namespace medquery {

namespace {

bool reserved_name(const std::string& name) {
  static const std::regex pattern("(tbl|fld)_[0-9]+");
  return std::regex_match(name, pattern);
}

class Converter {
 public:
  Converter(const SqlQuery& query, const IntegratedSchema& schema) : query_(query), schema_(schema) {}

  Conversion run() {
    collect_fields();
    join_equal_fields();
    assign_variables();

    RdqlQuery out;
    for (const auto& f : query_.select) out.select.push_back(Var{var_of_.at(f)});
    for (const auto& f : fields_) {
      auto k = std::find(query_.from.begin(), query_.from.end(), f.table) - query_.from.begin();
      out.patterns.push_back({Var{"tbl_" + std::to_string(k)}, Term::iri(property_iri(f.table, f.field)),
                              Var{var_of_.at(f)}});
    }
    for (std::size_t i = 0; i < query_.join_conds.size(); ++i) {
      if (shared_[i]) continue;
      const auto& c = query_.join_conds[i];
      out.filter.push_back({Var{var_of_.at(c.lhs)}, c.op, Var{var_of_.at(std::get<QualifiedField>(c.rhs))}});
    }
    for (const auto& c : query_.filters) {
      FilterAtom atom{Var{var_of_.at(c.lhs)}, c.op, Var{}};
      if (const auto* field = std::get_if<QualifiedField>(&c.rhs)) {
        atom.rhs = Var{var_of_.at(*field)};
      } else {
        const auto& literal = std::get<Literal>(c.rhs);
        atom.rhs = Term::literal(literal.lexical, literal.dtype);
      }
      out.filter.push_back(std::move(atom));
    }
    auto text = to_rdql_text(out);
    return {std::move(text), std::move(out)};
  }

 private:
  DataType dtype(const QualifiedField& f) const {
    return schema_.find_table(f.table)->find_field(f.field)->dtype;
  }

  void add_field(const QualifiedField& f) {
    if (std::find(fields_.begin(), fields_.end(), f) == fields_.end()) fields_.push_back(f);
  }

  // Distinct fields in order of first occurrence: SELECT, joins, filters.
  void collect_fields() {
    for (const auto& f : query_.select) add_field(f);
    for (const auto* conds : {&query_.join_conds, &query_.filters}) {
      for (const auto& c : *conds) {
        add_field(c.lhs);
        if (const auto* rhs = std::get_if<QualifiedField>(&c.rhs)) add_field(*rhs);
      }
    }
    parent_.resize(fields_.size());
    for (std::size_t i = 0; i < parent_.size(); ++i) parent_[i] = i;
  }

  std::size_t index_of(const QualifiedField& f) const {
    return static_cast<std::size_t>(std::find(fields_.begin(), fields_.end(), f) - fields_.begin());
  }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) i = parent_[i] = parent_[parent_[i]];
    return i;
  }

  // Equality joins between same-typed fields are encoded by a shared
  // variable; any other join condition stays in the AND clause.
  void join_equal_fields() {
    shared_.assign(query_.join_conds.size(), false);
    for (std::size_t i = 0; i < query_.join_conds.size(); ++i) {
      const auto& c = query_.join_conds[i];
      const auto& rhs = std::get<QualifiedField>(c.rhs);
      if (c.op != CompareOp::Eq || dtype(c.lhs) != dtype(rhs)) continue;
      shared_[i] = true;
      auto a = find(index_of(c.lhs));
      auto b = find(index_of(rhs));
      if (a != b) parent_[std::max(a, b)] = std::min(a, b);
    }
  }

  void assign_variables() {
    std::map<std::string, std::set<std::string>> tables_by_name;
    for (const auto& f : query_.select) tables_by_name[f.field].insert(f.table);

    std::set<std::string> taken;
    auto claim = [&](std::string name) {
      auto base = name;
      for (int k = 2; taken.count(name) || reserved_name(name); ++k) name = base + "_" + std::to_string(k);
      taken.insert(name);
      return name;
    };

    std::map<std::size_t, std::string> class_var;
    for (const auto& f : query_.select) {
      auto root = find(index_of(f));
      if (class_var.count(root)) continue;
      std::string name = tables_by_name[f.field].size() > 1 || reserved_name(f.field) ? f.table + "_" + f.field
                                                                                       : f.field;
      class_var[root] = claim(name);
    }
    int fresh = 0;
    for (std::size_t i = 0; i < fields_.size(); ++i) {
      auto root = find(i);
      if (!class_var.count(root)) {
        std::string name = "fld_" + std::to_string(fresh++);
        taken.insert(name);
        class_var[root] = name;
      }
      var_of_[fields_[i]] = class_var[root];
    }
  }

  const SqlQuery& query_;
  const IntegratedSchema& schema_;
  std::vector<QualifiedField> fields_;
  std::vector<std::size_t> parent_;
  std::vector<bool> shared_;
  std::map<QualifiedField, std::string> var_of_;
};

}  // namespace

Conversion convert(const SqlQuery& query, const IntegratedSchema& schema) { return Converter(query, schema).run(); }

}  // namespace medquery
