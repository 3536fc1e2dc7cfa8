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

#include "medquery/triple_store.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "medquery/error.hpp"
#include "medquery/iri.hpp"

namespace medquery {

bool is_absolute_iri(std::string_view iri) {
  auto colon = iri.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  if (!std::isalpha(static_cast<unsigned char>(iri[0]))) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    unsigned char c = iri[i];
    if (!std::isalnum(c) && c != '+' && c != '-' && c != '.') return false;
  }
  for (unsigned char c : iri)
    if (c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' || c == '\\' ||
        c == '^' || c == '`')
      return false;
  return true;
}

namespace {

std::string escape_literal(std::string_view lexical) {
  std::string out;
  out.reserve(lexical.size());
  for (char c : lexical) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Term::Term(Kind kind, std::string value, DataType dtype) : kind_(kind), value_(std::move(value)), dtype_(dtype) {
  if (kind_ == Kind::Iri) serialized_ = "<" + value_ + ">";
  else serialized_ = "\"" + escape_literal(value_) + "\"^^<" + xsd_iri(dtype_) + ">";
}

Term Term::iri(std::string value) {
  if (!is_absolute_iri(value)) throw std::invalid_argument("not an absolute IRI: " + value);
  return Term(Kind::Iri, std::move(value), DataType::String);
}

Term Term::literal(std::string_view lexical, DataType dtype) {
  auto canonical = canonical_lexical(lexical, dtype);
  if (!canonical)
    throw Error(ErrorCode::TypeCoercionError,
                "'" + std::string(lexical) + "' is not a valid " + std::string(to_string(dtype)));
  return Term(Kind::Literal, std::move(*canonical), dtype);
}

std::string Triple::to_ntriples() const {
  return subject.ntriples() + " " + predicate.ntriples() + " " + object.ntriples() + " .";
}

TripleStore::TripleStore(const TripleStore& other) {
  for (const auto& key : other.spo_) insert({*key[0], *key[1], *key[2]});
}

TripleStore& TripleStore::operator=(const TripleStore& other) {
  if (this != &other) {
    TripleStore copy(other);
    *this = std::move(copy);
  }
  return *this;
}

const Term* TripleStore::intern(const Term& term) { return &*terms_.insert(term).first; }

const Term* TripleStore::find_term(const Term& term) const {
  auto it = terms_.find(term);
  return it == terms_.end() ? nullptr : &*it;
}

bool TripleStore::insert(const Triple& triple) {
  if (!triple.subject.is_iri() || !triple.predicate.is_iri())
    throw std::invalid_argument("subject and predicate must be IRIs");
  const Term* s = intern(triple.subject);
  const Term* p = intern(triple.predicate);
  const Term* o = intern(triple.object);
  if (!spo_.insert({s, p, o}).second) return false;
  pos_.insert({p, o, s});
  osp_.insert({o, s, p});
  return true;
}

bool TripleStore::contains(const Triple& triple) const {
  const Term* s = find_term(triple.subject);
  const Term* p = find_term(triple.predicate);
  const Term* o = find_term(triple.object);
  return s && p && o && spo_.count({s, p, o});
}

// Visits candidate keys (rotated back to s, p, o) from the index whose
// leading columns are bound. Unbound trailing slots are filtered.
template <typename Visit>
void TripleStore::scan(const TriplePatternQuery& pattern, Visit&& visit) const {
  const Term* s = nullptr;
  const Term* p = nullptr;
  const Term* o = nullptr;
  if (pattern.subject && !(s = find_term(*pattern.subject))) return;
  if (pattern.predicate && !(p = find_term(*pattern.predicate))) return;
  if (pattern.object && !(o = find_term(*pattern.object))) return;

  auto prefix_scan = [](const Index& index, const Term* first, const Term* second, auto&& emit) {
    Prefix prefix{first, second};
    auto [it, last] = index.equal_range(prefix);
    for (; it != last; ++it) emit(*it);
  };

  if (s) {
    if (!p && o) {
      prefix_scan(osp_, o, s, [&](const Key& k) { visit(k[1], k[2], k[0]); });
    } else {
      prefix_scan(spo_, s, p, [&](const Key& k) {
        if (!o || k[2] == o) visit(k[0], k[1], k[2]);
      });
    }
  } else if (p) {
    prefix_scan(pos_, p, o, [&](const Key& k) { visit(k[2], k[0], k[1]); });
  } else if (o) {
    prefix_scan(osp_, o, nullptr, [&](const Key& k) { visit(k[1], k[2], k[0]); });
  } else {
    for (const auto& k : spo_) visit(k[0], k[1], k[2]);
  }
}

std::vector<Triple> TripleStore::match(const TriplePatternQuery& pattern) const {
  std::vector<Key> keys;
  scan(pattern, [&](const Term* s, const Term* p, const Term* o) { keys.push_back({s, p, o}); });
  bool spo_ordered = !pattern.subject ? (!pattern.predicate && !pattern.object) : (pattern.predicate || !pattern.object);
  if (!spo_ordered) std::sort(keys.begin(), keys.end(), KeyLess{});
  std::vector<Triple> out;
  out.reserve(keys.size());
  for (const auto& k : keys) out.push_back({*k[0], *k[1], *k[2]});
  return out;
}

std::size_t TripleStore::count(const TriplePatternQuery& pattern) const {
  std::size_t n = 0;
  scan(pattern, [&](const Term*, const Term*, const Term*) { ++n; });
  return n;
}

std::vector<Triple> TripleStore::triples() const { return match({}); }

bool TripleStore::operator==(const TripleStore& other) const {
  if (size() != other.size()) return false;
  auto a = spo_.begin();
  auto b = other.spo_.begin();
  for (; a != spo_.end(); ++a, ++b)
    for (int i = 0; i < 3; ++i)
      if (*(*a)[i] != *(*b)[i]) return false;
  return true;
}

std::string export_ntriples(const TripleStore& store) {
  std::string out;
  for (const auto& t : store.triples()) {
    out += t.to_ntriples();
    out += '\n';
  }
  return out;
}

namespace {

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t number) : line_(line), number_(number) {}

  Triple parse() {
    auto s = parse_iri();
    expect_space();
    auto p = parse_iri();
    expect_space();
    Term o = peek() == '<' ? parse_iri() : parse_literal();
    if (line_.substr(pos_) != " .") fail("expected terminal ' .'");
    return {std::move(s), std::move(p), std::move(o)};
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorCode::NtParseError, "line " + std::to_string(number_) + ": " + message);
  }

  char peek() const { return pos_ < line_.size() ? line_[pos_] : '\0'; }

  void expect_space() {
    if (peek() != ' ') fail("expected a single space between terms");
    ++pos_;
  }

  Term parse_iri() {
    if (peek() != '<') fail("expected '<'");
    auto end = line_.find('>', pos_);
    if (end == std::string_view::npos) fail("unterminated IRI");
    std::string iri(line_.substr(pos_ + 1, end - pos_ - 1));
    if (!is_absolute_iri(iri)) fail("not an absolute IRI: " + iri);
    pos_ = end + 1;
    return Term::iri(std::move(iri));
  }

  Term parse_literal() {
    if (peek() != '"') fail("expected IRI or literal");
    ++pos_;
    std::string lexical;
    for (;;) {
      if (pos_ >= line_.size()) fail("unterminated literal");
      char c = line_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        lexical += c;
        continue;
      }
      if (pos_ >= line_.size()) fail("dangling escape");
      switch (line_[pos_++]) {
        case '"': lexical += '"'; break;
        case '\\': lexical += '\\'; break;
        case 'n': lexical += '\n'; break;
        case 'r': lexical += '\r'; break;
        case 't': lexical += '\t'; break;
        default: fail("unknown escape sequence");
      }
    }
    if (line_.substr(pos_, 2) != "^^") fail("expected ^^<datatype> after literal");
    pos_ += 2;
    if (peek() != '<') fail("expected datatype IRI");
    auto end = line_.find('>', pos_);
    if (end == std::string_view::npos) fail("unterminated datatype IRI");
    auto dtype = data_type_from_xsd_iri(line_.substr(pos_ + 1, end - pos_ - 1));
    if (!dtype) fail("unsupported datatype " + std::string(line_.substr(pos_, end - pos_ + 1)));
    pos_ = end + 1;
    auto canonical = canonical_lexical(lexical, *dtype);
    if (!canonical || *canonical != lexical) fail("non-canonical " + std::string(to_string(*dtype)) + " '" + lexical + "'");
    return Term::literal(lexical, *dtype);
  }

  std::string_view line_;
  std::size_t number_;
  std::size_t pos_ = 0;
};

}  // namespace

TripleStore import_ntriples(std::string_view text) {
  TripleStore store;
  std::size_t number = 0;
  while (!text.empty()) {
    auto eol = text.find('\n');
    auto line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++number;
    if (line.empty()) continue;
    store.insert(LineParser(line, number).parse());
  }
  return store;
}

}  // namespace medquery
