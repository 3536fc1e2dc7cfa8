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

#include <array>
#include <compare>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "medquery/datatype.hpp"

namespace medquery {

/// An RDF term: an absolute IRI or a typed literal. Ordering and equality
/// follow the term's N-Triples serialization, which is injective.
class Term {
 public:
  enum class Kind { Iri, Literal };

  static Term iri(std::string value);
  /// Throws TypeCoercionError if `lexical` is not a valid `dtype` value.
  /// The stored lexical form is canonical.
  static Term literal(std::string_view lexical, DataType dtype);

  Kind kind() const { return kind_; }
  bool is_iri() const { return kind_ == Kind::Iri; }
  bool is_literal() const { return kind_ == Kind::Literal; }
  /// IRI text or literal lexical form.
  const std::string& value() const { return value_; }
  DataType dtype() const { return dtype_; }
  const std::string& ntriples() const { return serialized_; }

  std::strong_ordering operator<=>(const Term& other) const { return serialized_ <=> other.serialized_; }
  bool operator==(const Term& other) const { return serialized_ == other.serialized_; }

 private:
  Term(Kind kind, std::string value, DataType dtype);

  Kind kind_ = Kind::Iri;
  std::string value_;
  DataType dtype_ = DataType::String;
  std::string serialized_;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  auto operator<=>(const Triple&) const = default;
  bool operator==(const Triple&) const = default;
  std::string to_ntriples() const;
};

/// Wildcard-able pattern over one triple.
struct TriplePatternQuery {
  std::optional<Term> subject;
  std::optional<Term> predicate;
  std::optional<Term> object;
};

/// Set of triples with SPO, POS and OSP orderings. Single writer while
/// building; concurrent readers once building is done.
class TripleStore {
 public:
  TripleStore() = default;
  TripleStore(const TripleStore& other);
  TripleStore& operator=(const TripleStore& other);
  TripleStore(TripleStore&&) noexcept = default;
  TripleStore& operator=(TripleStore&&) noexcept = default;

  /// True iff the triple was not present. Subject and predicate must be IRIs.
  bool insert(const Triple& triple);
  bool contains(const Triple& triple) const;
  std::size_t size() const { return spo_.size(); }
  bool empty() const { return spo_.empty(); }

  /// All triples unifying with the pattern, in SPO order.
  std::vector<Triple> match(const TriplePatternQuery& pattern) const;
  /// Number of triples `match` would return.
  std::size_t count(const TriplePatternQuery& pattern) const;

  /// Every triple in SPO order.
  std::vector<Triple> triples() const;

  bool operator==(const TripleStore& other) const;

 private:
  using Key = std::array<const Term*, 3>;
  /// Leading columns of a key; `second` may be null.
  struct Prefix {
    const Term* first;
    const Term* second;
  };
  struct KeyLess {
    using is_transparent = void;
    static int compare_prefix(const Key& k, const Prefix& p) {
      if (*k[0] != *p.first) return *k[0] < *p.first ? -1 : 1;
      if (p.second && *k[1] != *p.second) return *k[1] < *p.second ? -1 : 1;
      return 0;
    }
    bool operator()(const Key& k, const Prefix& p) const { return compare_prefix(k, p) < 0; }
    bool operator()(const Prefix& p, const Key& k) const { return compare_prefix(k, p) > 0; }
    bool operator()(const Key& a, const Key& b) const {
      for (int i = 0; i < 3; ++i) {
        if (*a[i] < *b[i]) return true;
        if (*b[i] < *a[i]) return false;
      }
      return false;
    }
  };
  using Index = std::set<Key, KeyLess>;

  template <typename Visit>
  void scan(const TriplePatternQuery& pattern, Visit&& visit) const;
  const Term* intern(const Term& term);
  const Term* find_term(const Term& term) const;

  std::set<Term> terms_;
  Index spo_;  // (s, p, o)
  Index pos_;  // (p, o, s)
  Index osp_;  // (o, s, p)
};

/// One line per triple, SPO order, `<s> <p> "lex"^^<dtype> .` + LF.
std::string export_ntriples(const TripleStore& store);
/// Inverse of export_ntriples; throws NtParseError naming the line.
TripleStore import_ntriples(std::string_view text);

}  // namespace medquery
