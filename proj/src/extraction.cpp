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

#include "medquery/extraction.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <future>
#include <numeric>
#include <random>

#include "medquery/error.hpp"
#include "medquery/iri.hpp"

namespace medquery {

std::set<std::string> required_tables(const RdqlQuery& query, const IntegratedSchema& schema) {
  std::set<std::string> names;
  for (const auto& pattern : query.patterns) {
    if (std::holds_alternative<Var>(pattern.predicate)) {
      for (const auto& table : schema.tables) names.insert(table.name);
      continue;
    }
    const auto& term = std::get<Term>(pattern.predicate);
    auto property = term.is_iri() ? parse_property_iri(term.value()) : std::nullopt;
    if (!property) throw Error(ErrorCode::MalformedPropertyIri, term.ntriples());
    if (!schema.find_table(property->table)) throw Error(ErrorCode::UnknownTable, property->table);
    names.insert(property->table);
  }
  return names;
}

namespace {

// One step along an equality chain: rows of `to` whose `to_fields` equal
// the `from_fields` of the current row.
struct Hop {
  TableRef from;
  TableRef to;
  std::vector<std::string> from_fields;
  std::vector<std::string> to_fields;
};

std::vector<Hop> equality_edges(const IntegratedSchema& schema) {
  std::vector<Hop> edges;
  for (const auto& relation : schema.relations) {
    const auto* eq = std::get_if<EqualityRelation>(&relation);
    if (!eq || eq->lhs.size() != eq->rhs.size()) continue;
    std::vector<Hop> groups;
    for (std::size_t i = 0; i < eq->lhs.size(); ++i) {
      auto a = table_of(eq->lhs[i]);
      auto b = table_of(eq->rhs[i]);
      if (a == b) continue;
      auto it = std::find_if(groups.begin(), groups.end(), [&](const Hop& h) { return h.from == a && h.to == b; });
      if (it == groups.end()) it = groups.insert(groups.end(), Hop{a, b, {}, {}});
      it->from_fields.push_back(eq->lhs[i].field);
      it->to_fields.push_back(eq->rhs[i].field);
    }
    for (const auto& g : groups) {
      edges.push_back(g);
      edges.push_back(Hop{g.to, g.from, g.to_fields, g.from_fields});
    }
  }
  return edges;
}

// Breadth-first tree of equality chains rooted at the master table.
// Neighbours are expanded in relation order, so among shortest chains the
// one using earlier relations wins.
class ChainTree {
 public:
  ChainTree(const IntegratedSchema& schema, const TableRef& master) : master_(master) {
    auto edges = equality_edges(schema);
    std::deque<TableRef> frontier{master};
    parent_.emplace(master, std::nullopt);
    while (!frontier.empty()) {
      auto current = frontier.front();
      frontier.pop_front();
      for (const auto& edge : edges) {
        if (edge.from != current || parent_.count(edge.to)) continue;
        parent_.emplace(edge.to, edge);
        frontier.push_back(edge.to);
      }
    }
  }

  bool reaches(const TableRef& table) const { return parent_.count(table) > 0; }

  /// Hops from the master to `table`, in travel order.
  std::vector<Hop> chain_to(const TableRef& table) const {
    std::vector<Hop> hops;
    for (auto at = table; at != master_;) {
      const auto& hop = *parent_.at(at);
      hops.push_back(hop);
      at = hop.from;
    }
    std::reverse(hops.begin(), hops.end());
    return hops;
  }

 private:
  TableRef master_;
  std::map<TableRef, std::optional<Hop>> parent_;
};

const DerivedRelation* derivation_of(const IntegratedSchema& schema, const FieldRef& ref) {
  for (const auto& relation : schema.relations)
    if (const auto* derived = std::get_if<DerivedRelation>(&relation))
      if (derived->target == ref) return derived;
  return nullptr;
}

// How one integrated value is obtained from a master row.
struct ValuePlan {
  FieldRef ref;
  const DerivedRelation* derived = nullptr;
  std::vector<ValuePlan> operands;
};

class Materializer {
 public:
  Materializer(const Project& project, const std::string& table_name)
      : project_(project),
        def_(require_table(project, table_name)),
        master_(table_of(def_.fields.front().mapping)),
        chains_(project.schema, master_) {
    for (const auto& field : def_.fields) {
      std::set<FieldRef> open;
      plans_.push_back(plan(field.mapping, field.name, open));
    }
  }

  std::vector<TableRef> source_tables() const {
    std::vector<TableRef> tables{master_};
    auto add = [&](const TableRef& t) {
      if (std::find(tables.begin(), tables.end(), t) == tables.end()) tables.push_back(t);
    };
    std::function<void(const ValuePlan&)> visit = [&](const ValuePlan& p) {
      if (p.derived) {
        for (const auto& operand : p.operands) visit(operand);
        return;
      }
      for (const auto& hop : chains_.chain_to(table_of(p.ref))) add(hop.to);
    };
    for (const auto& p : plans_) visit(p);
    return tables;
  }

  Table run(AccessLog& log, const FetchOptions& options, ExtractionDiagnostics* diagnostics) {
    fetch_all(log, options);
    const Table& master = sources_.at(master_);
    Table out{def_.name, {}, {}};
    for (const auto& field : def_.fields) out.fields.push_back({field.name, field.dtype});
    out.rows.resize(master.rows.size());
    for (std::size_t r = 0; r < master.rows.size(); ++r)
      for (std::size_t f = 0; f < def_.fields.size(); ++f)
        out.rows[r].cells.push_back(value(plans_[f], r, def_.fields[f].dtype));
    if (diagnostics)
      for (auto& w : warnings_) diagnostics->warnings.push_back(std::move(w));
    return out;
  }

 private:
  static const IntegratedTableDef& require_table(const Project& project, const std::string& name) {
    const auto* def = project.schema.find_table(name);
    if (!def) throw Error(ErrorCode::UnknownTable, name);
    return *def;
  }

  ValuePlan plan(const FieldRef& ref, const std::string& field_name, std::set<FieldRef>& open) {
    ValuePlan p{ref, derivation_of(project_.schema, ref), {}};
    if (p.derived) {
      if (!open.insert(ref).second)
        throw Error(ErrorCode::NoRelationPath, def_.name + "." + field_name + ": cyclic derivation through " +
                                                   ref.to_string());
      for (const auto& operand : p.derived->operands) p.operands.push_back(plan(operand, field_name, open));
      open.erase(ref);
      return p;
    }
    resolve_field_ref(project_, ref);
    if (!chains_.reaches(table_of(ref)))
      throw Error(ErrorCode::NoRelationPath, def_.name + "." + field_name + ": no equality relation links " +
                                                 table_of(ref).to_string() + " to master table " +
                                                 master_.to_string());
    return p;
  }

  void fetch_all(AccessLog& log, const FetchOptions& options) {
    auto tables = source_tables();
    if (options.shuffle_seed) {
      std::mt19937_64 rng(*options.shuffle_seed);
      std::shuffle(tables.begin(), tables.end(), rng);
    }
    if (!options.parallel) {
      for (const auto& t : tables) sources_.emplace(t, fetch_table(project_, t.source, t.table, log));
      return;
    }
    std::vector<std::future<Table>> pending;
    for (const auto& t : tables)
      pending.push_back(std::async(std::launch::async, [&, t] { return fetch_table(project_, t.source, t.table, log); }));
    for (std::size_t i = 0; i < tables.size(); ++i) sources_.emplace(tables[i], pending[i].get());
  }

  // For each master row, the matching row of `table` (if any).
  const std::vector<std::optional<std::size_t>>& rows_of(const TableRef& table) {
    if (auto it = row_maps_.find(table); it != row_maps_.end()) return it->second;
    const auto n = sources_.at(master_).rows.size();
    std::vector<std::optional<std::size_t>> rows(n);
    if (table == master_) {
      for (std::size_t r = 0; r < n; ++r) rows[r] = r;
      return row_maps_.emplace(table, std::move(rows)).first->second;
    }
    auto hops = chains_.chain_to(table);
    const auto& hop = hops.back();
    const auto previous = rows_of(hop.from);
    const Table& from = sources_.at(hop.from);
    const Table& to = sources_.at(hop.to);
    auto columns = [](const Table& t, const std::vector<std::string>& names) {
      std::vector<std::size_t> cols;
      for (const auto& name : names) cols.push_back(*t.column(name));
      return cols;
    };
    auto from_cols = columns(from, hop.from_fields);
    auto to_cols = columns(to, hop.to_fields);
    auto key = [](const Row& row, const std::vector<std::size_t>& cols) -> std::optional<std::vector<std::string>> {
      std::vector<std::string> k;
      for (auto c : cols) {
        if (row.cells[c].is_missing()) return std::nullopt;
        k.push_back(*row.cells[c].lexical);
      }
      return k;
    };
    std::map<std::vector<std::string>, std::vector<std::size_t>> index;
    for (std::size_t r = 0; r < to.rows.size(); ++r)
      if (auto k = key(to.rows[r], to_cols)) index[*k].push_back(r);
    std::size_t ambiguous = 0;
    for (std::size_t r = 0; r < n; ++r) {
      if (!previous[r]) continue;
      auto k = key(from.rows[*previous[r]], from_cols);
      if (!k) continue;
      auto it = index.find(*k);
      if (it == index.end()) continue;
      rows[r] = it->second.front();
      ambiguous += it->second.size() > 1;
    }
    if (ambiguous)
      warnings_.push_back(def_.name + ": " + std::to_string(ambiguous) + " row(s) of " + hop.from.to_string() +
                          " match several rows of " + hop.to.to_string() + "; the first match was used");
    return row_maps_.emplace(table, std::move(rows)).first->second;
  }

  Cell value(const ValuePlan& p, std::size_t master_row, DataType dtype) {
    if (!p.derived) {
      auto table = table_of(p.ref);
      auto row = rows_of(table)[master_row];
      if (!row) return Cell::missing(dtype);
      const Table& source = sources_.at(table);
      const Cell& cell = source.rows[*row].cells[*source.column(p.ref.field)];
      if (cell.is_missing()) return Cell::missing(dtype);
      if (cell.dtype == dtype) return cell;
      auto canonical = canonical_lexical(*cell.lexical, dtype);
      if (!canonical)
        throw Error(ErrorCode::TypeCoercionError, def_.name + " row " + std::to_string(master_row + 1) + ": '" +
                                                      *cell.lexical + "' from " + p.ref.to_string() +
                                                      " is not a valid " + std::string(to_string(dtype)));
      return Cell::value(std::move(*canonical), dtype);
    }
    std::vector<Cell> operands;
    for (const auto& operand : p.operands) {
      const auto* def = project_.find_table(table_of(operand.ref));
      const auto* field = def ? def->find_field(operand.ref.field) : nullptr;
      auto operand_type = field ? field->dtype : DataType::String;
      if (operand.derived && !field) operand_type = p.derived->op == DerivedOp::Add ? DataType::Decimal : DataType::String;
      operands.push_back(value(operand, master_row, operand_type));
      if (operands.back().is_missing()) return Cell::missing(dtype);
    }
    if (p.derived->op == DerivedOp::Concat) {
      std::string joined;
      for (const auto& c : operands) joined += *c.lexical;
      auto canonical = canonical_lexical(joined, dtype);
      if (!canonical) throw Error(ErrorCode::TypeCoercionError, "concatenation '" + joined + "' is not a valid " +
                                                                    std::string(to_string(dtype)));
      return Cell::value(std::move(*canonical), dtype);
    }
    std::optional<Decimal> sum;
    for (const auto& c : operands) {
      auto v = Decimal::parse(*c.lexical);
      if (!v) throw Error(ErrorCode::TypeCoercionError, "'" + *c.lexical + "' is not numeric");
      sum = sum ? *sum + *v : *v;
    }
    if (dtype == DataType::Integer && !sum->is_integral())
      throw Error(ErrorCode::TypeCoercionError, p.ref.to_string() + ": sum is not an integer");
    if (!is_numeric(dtype)) return Cell::value(*canonical_lexical(sum->to_lexical(DataType::Decimal), dtype), dtype);
    return Cell::value(sum->to_lexical(dtype), dtype);
  }

  const Project& project_;
  const IntegratedTableDef& def_;
  TableRef master_;
  ChainTree chains_;
  std::vector<ValuePlan> plans_;
  std::map<TableRef, Table> sources_;
  std::map<TableRef, std::vector<std::optional<std::size_t>>> row_maps_;
  std::vector<std::string> warnings_;
};

}  // namespace

std::vector<TableRef> source_tables_for(const Project& project, const std::string& table_name) {
  return Materializer(project, table_name).source_tables();
}

Table materialize_integrated_table(const Project& project, const std::string& table_name, AccessLog& log,
                                   const FetchOptions& options, ExtractionDiagnostics* diagnostics) {
  return Materializer(project, table_name).run(log, options, diagnostics);
}

IntegratedData materialize(const Project& project, const std::set<std::string>& table_names, AccessLog& log,
                           const FetchOptions& options, ExtractionDiagnostics* diagnostics) {
  IntegratedData data;
  std::vector<std::string> names(table_names.begin(), table_names.end());
  std::vector<ExtractionDiagnostics> per_table(names.size());
  if (!options.parallel) {
    for (std::size_t i = 0; i < names.size(); ++i)
      data.tables.emplace(names[i], materialize_integrated_table(project, names[i], log, options, &per_table[i]));
  } else {
    std::vector<std::future<Table>> pending;
    for (std::size_t i = 0; i < names.size(); ++i)
      pending.push_back(std::async(std::launch::async, [&, i] {
        return materialize_integrated_table(project, names[i], log, options, &per_table[i]);
      }));
    // Drain every future before rethrowing so no task outlives `data`.
    std::exception_ptr failure;
    for (std::size_t i = 0; i < names.size(); ++i) {
      try {
        data.tables.emplace(names[i], pending[i].get());
      } catch (...) {
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  if (diagnostics)
    for (auto& d : per_table)
      for (auto& w : d.warnings) diagnostics->warnings.push_back(std::move(w));
  return data;
}

TripleStore build_triples(const IntegratedData& data) {
  TripleStore store;
  for (const auto& [name, table] : data.tables) {
    std::vector<Term> predicates;
    for (const auto& field : table.fields) predicates.push_back(Term::iri(property_iri(name, field.name)));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      auto subject = Term::iri(row_iri(name, r));
      for (std::size_t f = 0; f < table.fields.size(); ++f) {
        const auto& cell = table.rows[r].cells[f];
        if (cell.is_missing()) continue;
        store.insert({subject, predicates[f], Term::literal(*cell.lexical, cell.dtype)});
      }
    }
  }
  return store;
}

}  // namespace medquery
