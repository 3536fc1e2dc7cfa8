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

#include "medquery/triple_store.hpp"

namespace medquery {

/// Variable name without the leading '?'.
struct Var {
  std::string name;
  auto operator<=>(const Var&) const = default;
};

/// Variable, IRI or typed literal.
using PatternTerm = std::variant<Var, Term>;

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;
  bool operator==(const TriplePattern&) const = default;
};

struct FilterAtom {
  Var lhs;
  CompareOp op = CompareOp::Eq;
  std::variant<Var, Term> rhs;
  bool operator==(const FilterAtom&) const = default;
};

struct RdqlQuery {
  std::vector<Var> select;
  std::vector<TriplePattern> patterns;
  /// Conjunction; empty means no constraint.
  std::vector<FilterAtom> filter;
  bool operator==(const RdqlQuery&) const = default;
};

struct ResultSet {
  std::vector<std::string> columns;
  std::vector<std::vector<Term>> rows;
  /// Filter atoms that compared incompatible types (and so were false).
  std::size_t type_mismatches = 0;
};

/// SELECT ?v {, ?v} WHERE (s p o) {, (s p o)} [AND atom {&& atom}]
/// IRIs in <>, literals quoted with optional ^^<datatype> (default string);
/// bare numerals and true/false are accepted on the right of filter atoms.
RdqlQuery parse_rdql(std::string_view text);

/// Conjunctive matching of every pattern, filtered, projected onto the
/// select list. Duplicate rows are kept; rows are sorted by the N-Triples
/// forms of their terms.
ResultSet evaluate(const RdqlQuery& query, const TripleStore& store);

/// Filter semantics for one atom over bound terms: nullopt when the terms
/// are of incomparable types.
std::optional<bool> compare_terms(const Term& lhs, CompareOp op, const Term& rhs);

/// Textual form in the parse_rdql grammar.
std::string to_rdql_text(const RdqlQuery& query);

}  // namespace medquery
