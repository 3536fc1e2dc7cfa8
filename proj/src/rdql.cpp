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

#include "medquery/rdql.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

#include "medquery/error.hpp"
#include "medquery/iri.hpp"

namespace medquery {

namespace {

[[noreturn]] void parse_error(std::size_t pos, const std::string& message) {
  throw Error(ErrorCode::RdqlParseError, "at position " + std::to_string(pos) + ": " + message);
}

bool is_name_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class RdqlParser {
 public:
  explicit RdqlParser(std::string_view text) : text_(text) {}

  RdqlQuery parse() {
    RdqlQuery query;
    expect_keyword("SELECT");
    query.select.push_back(parse_var());
    for (;;) {
      skip_space();
      if (peek() == ',') {
        ++pos_;
        query.select.push_back(parse_var());
      } else if (peek() == '?') {
        query.select.push_back(parse_var());
      } else {
        break;
      }
    }
    expect_keyword("WHERE");
    query.patterns.push_back(parse_pattern());
    for (;;) {
      skip_space();
      if (peek() != ',') break;
      ++pos_;
      query.patterns.push_back(parse_pattern());
    }
    skip_space();
    if (at_keyword("AND")) {
      pos_ += 3;
      query.filter.push_back(parse_atom());
      for (;;) {
        skip_space();
        if (text_.substr(pos_, 2) != "&&") break;
        pos_ += 2;
        query.filter.push_back(parse_atom());
      }
    }
    skip_space();
    if (pos_ < text_.size()) parse_error(pos_, "unexpected trailing text");
    return query;
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_keyword(std::string_view keyword) const {
    if (text_.size() - pos_ < keyword.size()) return false;
    for (std::size_t i = 0; i < keyword.size(); ++i)
      if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) != keyword[i]) return false;
    return pos_ + keyword.size() == text_.size() || !is_name_char(text_[pos_ + keyword.size()]);
  }

  void expect_keyword(std::string_view keyword) {
    skip_space();
    if (!at_keyword(keyword)) parse_error(pos_, "expected " + std::string(keyword));
    pos_ += keyword.size();
  }

  Var parse_var() {
    skip_space();
    if (peek() != '?') parse_error(pos_, "expected variable");
    ++pos_;
    auto start = pos_;
    if (!is_name_start(peek())) parse_error(pos_, "invalid variable name");
    while (pos_ < text_.size() && is_name_char(text_[pos_])) ++pos_;
    return Var{std::string(text_.substr(start, pos_ - start))};
  }

  std::string parse_iri_text() {
    auto start = pos_;
    auto end = text_.find('>', pos_);
    if (end == std::string_view::npos) parse_error(start, "unterminated IRI");
    std::string iri(text_.substr(pos_ + 1, end - pos_ - 1));
    if (!is_absolute_iri(iri)) parse_error(start, "not an absolute IRI: " + iri);
    pos_ = end + 1;
    return iri;
  }

  Term parse_quoted_literal() {
    auto start = pos_;
    ++pos_;
    std::string lexical;
    for (;;) {
      if (pos_ >= text_.size()) parse_error(start, "unterminated literal");
      char c = text_[pos_++];
      if (c == '"') break;
      if (c != '\\') {
        lexical += c;
        continue;
      }
      if (pos_ >= text_.size()) parse_error(pos_, "dangling escape");
      switch (text_[pos_++]) {
        case '"': lexical += '"'; break;
        case '\\': lexical += '\\'; break;
        case 'n': lexical += '\n'; break;
        case 'r': lexical += '\r'; break;
        case 't': lexical += '\t'; break;
        default: parse_error(pos_ - 1, "unknown escape sequence");
      }
    }
    DataType dtype = DataType::String;
    if (text_.substr(pos_, 2) == "^^") {
      pos_ += 2;
      if (peek() != '<') parse_error(pos_, "expected datatype IRI");
      auto at = pos_;
      auto dt = data_type_from_xsd_iri(parse_iri_text());
      if (!dt) parse_error(at, "unsupported datatype");
      dtype = *dt;
    }
    auto canonical = canonical_lexical(lexical, dtype);
    if (!canonical) parse_error(start, "'" + lexical + "' is not a valid " + std::string(to_string(dtype)));
    return Term::literal(*canonical, dtype);
  }

  std::optional<Term> parse_bare_literal() {
    auto start = pos_;
    if (peek() == '-' || peek() == '+' || std::isdigit(static_cast<unsigned char>(peek()))) {
      ++pos_;
      while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
        ++pos_;
      auto text = text_.substr(start, pos_ - start);
      auto dtype = text.find('.') == std::string_view::npos ? DataType::Integer : DataType::Decimal;
      auto canonical = canonical_lexical(text, dtype);
      if (!canonical) parse_error(start, "invalid number '" + std::string(text) + "'");
      return Term::literal(*canonical, dtype);
    }
    if (at_keyword("TRUE") || at_keyword("FALSE")) {
      bool value = at_keyword("TRUE");
      pos_ += value ? 4 : 5;
      return Term::literal(value ? "true" : "false", DataType::Boolean);
    }
    return std::nullopt;
  }

  PatternTerm parse_pattern_term() {
    skip_space();
    char c = peek();
    if (c == '?') return parse_var();
    if (c == '<') return Term::iri(parse_iri_text());
    if (c == '"') return parse_quoted_literal();
    parse_error(pos_, "expected variable, IRI or quoted literal");
  }

  TriplePattern parse_pattern() {
    skip_space();
    if (peek() != '(') parse_error(pos_, "expected '(' to open a triple pattern");
    ++pos_;
    TriplePattern pattern{parse_pattern_term(), parse_pattern_term(), parse_pattern_term()};
    skip_space();
    if (peek() == ',') parse_error(pos_, "pattern terms are separated by spaces, not commas");
    if (peek() != ')') parse_error(pos_, "expected ')' to close the triple pattern");
    ++pos_;
    return pattern;
  }

  CompareOp parse_op() {
    skip_space();
    auto two = text_.substr(pos_, 2);
    if (two == "==") { pos_ += 2; return CompareOp::Eq; }
    if (two == "!=") { pos_ += 2; return CompareOp::Ne; }
    if (two == "<=") { pos_ += 2; return CompareOp::Le; }
    if (two == ">=") { pos_ += 2; return CompareOp::Ge; }
    switch (peek()) {
      case '=': ++pos_; return CompareOp::Eq;
      case '<': ++pos_; return CompareOp::Lt;
      case '>': ++pos_; return CompareOp::Gt;
      default: parse_error(pos_, "expected comparison operator");
    }
  }

  FilterAtom parse_atom() {
    FilterAtom atom;
    atom.lhs = parse_var();
    atom.op = parse_op();
    skip_space();
    char c = peek();
    if (c == '?') {
      atom.rhs = parse_var();
    } else if (c == '"') {
      atom.rhs = parse_quoted_literal();
    } else if (c == '<') {
      atom.rhs = Term::iri(parse_iri_text());
    } else if (auto literal = parse_bare_literal()) {
      atom.rhs = std::move(*literal);
    } else {
      parse_error(pos_, "expected variable or literal");
    }
    return atom;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void collect_vars(const PatternTerm& term, std::set<std::string>& vars) {
  if (const auto* v = std::get_if<Var>(&term)) vars.insert(v->name);
}

}  // namespace

RdqlQuery parse_rdql(std::string_view text) {
  auto query = RdqlParser(text).parse();
  std::set<std::string> bound;
  for (const auto& p : query.patterns) {
    collect_vars(p.subject, bound);
    collect_vars(p.predicate, bound);
    collect_vars(p.object, bound);
  }
  for (const auto& v : query.select)
    if (!bound.count(v.name)) throw Error(ErrorCode::UnboundSelectVar, "?" + v.name);
  for (const auto& atom : query.filter) {
    if (!bound.count(atom.lhs.name)) throw Error(ErrorCode::UnboundFilterVar, "?" + atom.lhs.name);
    if (const auto* v = std::get_if<Var>(&atom.rhs))
      if (!bound.count(v->name)) throw Error(ErrorCode::UnboundFilterVar, "?" + v->name);
  }
  return query;
}

std::optional<bool> compare_terms(const Term& lhs, CompareOp op, const Term& rhs) {
  if (lhs.is_literal() && rhs.is_literal())
    return compare_typed(lhs.value(), lhs.dtype(), op, rhs.value(), rhs.dtype());
  if (lhs.is_iri() && rhs.is_iri()) {
    if (op == CompareOp::Eq) return lhs.value() == rhs.value();
    if (op == CompareOp::Ne) return lhs.value() != rhs.value();
  }
  return std::nullopt;
}

namespace {

class Evaluator {
 public:
  Evaluator(const RdqlQuery& query, const TripleStore& store) : query_(query), store_(store) {
    for (const auto& p : query.patterns)
      for (const auto* term : {&p.subject, &p.predicate, &p.object})
        if (const auto* v = std::get_if<Var>(term)) slot(v->name);
    bindings_.resize(slots_.size());
    order_patterns();
  }

  ResultSet run() {
    for (const auto& v : query_.select) result_.columns.push_back(v.name);
    search(0);
    std::sort(result_.rows.begin(), result_.rows.end());
    return std::move(result_);
  }

 private:
  std::size_t slot(const std::string& name) {
    auto [it, inserted] = slots_.emplace(name, slots_.size());
    return it->second;
  }

  std::size_t slot_of(const std::string& name) const { return slots_.at(name); }

  // Greedy: cheapest pattern first, then prefer patterns sharing a
  // variable with those already placed. Affects speed only.
  void order_patterns() {
    const auto n = query_.patterns.size();
    std::vector<std::size_t> cost(n);
    for (std::size_t i = 0; i < n; ++i) cost[i] = store_.count(constant_query(query_.patterns[i]));
    std::vector<bool> placed(n, false);
    std::set<std::string> seen;
    for (std::size_t k = 0; k < n; ++k) {
      std::optional<std::size_t> best;
      bool best_connected = false;
      for (std::size_t i = 0; i < n; ++i) {
        if (placed[i]) continue;
        bool connected = shares_var(query_.patterns[i], seen);
        if (!best || (connected && !best_connected) ||
            (connected == best_connected && cost[i] < cost[*best])) {
          best = i;
          best_connected = connected;
        }
      }
      placed[*best] = true;
      order_.push_back(*best);
      for (const auto* term : {&query_.patterns[*best].subject, &query_.patterns[*best].predicate,
                               &query_.patterns[*best].object})
        if (const auto* v = std::get_if<Var>(term)) seen.insert(v->name);
    }
  }

  static bool shares_var(const TriplePattern& p, const std::set<std::string>& seen) {
    for (const auto* term : {&p.subject, &p.predicate, &p.object})
      if (const auto* v = std::get_if<Var>(term))
        if (seen.count(v->name)) return true;
    return false;
  }

  static TriplePatternQuery constant_query(const TriplePattern& p) {
    TriplePatternQuery q;
    if (const auto* t = std::get_if<Term>(&p.subject)) q.subject = *t;
    if (const auto* t = std::get_if<Term>(&p.predicate)) q.predicate = *t;
    if (const auto* t = std::get_if<Term>(&p.object)) q.object = *t;
    return q;
  }

  std::optional<Term> resolve(const PatternTerm& term) const {
    if (const auto* t = std::get_if<Term>(&term)) return *t;
    return bindings_[slot_of(std::get<Var>(term).name)];
  }

  // Binds `term` to `value`; false on conflict. Records new bindings.
  bool unify(const PatternTerm& term, const Term& value, std::vector<std::size_t>& fresh) {
    const auto* v = std::get_if<Var>(&term);
    if (!v) return true;
    auto s = slot_of(v->name);
    if (bindings_[s]) return *bindings_[s] == value;
    bindings_[s] = value;
    fresh.push_back(s);
    return true;
  }

  void search(std::size_t depth) {
    if (depth == order_.size()) {
      emit();
      return;
    }
    const auto& pattern = query_.patterns[order_[depth]];
    TriplePatternQuery q{resolve(pattern.subject), resolve(pattern.predicate), resolve(pattern.object)};
    for (const auto& triple : store_.match(q)) {
      std::vector<std::size_t> fresh;
      if (unify(pattern.subject, triple.subject, fresh) && unify(pattern.predicate, triple.predicate, fresh) &&
          unify(pattern.object, triple.object, fresh))
        search(depth + 1);
      for (auto s : fresh) bindings_[s].reset();
    }
  }

  void emit() {
    bool keep = true;
    for (const auto& atom : query_.filter) {
      const Term& lhs = *bindings_[slot_of(atom.lhs.name)];
      const Term& rhs = std::holds_alternative<Var>(atom.rhs) ? *bindings_[slot_of(std::get<Var>(atom.rhs).name)]
                                                              : std::get<Term>(atom.rhs);
      auto outcome = compare_terms(lhs, atom.op, rhs);
      if (!outcome) ++result_.type_mismatches;
      keep &= outcome.value_or(false);
    }
    if (!keep) return;
    std::vector<Term> row;
    row.reserve(query_.select.size());
    for (const auto& v : query_.select) row.push_back(*bindings_[slot_of(v.name)]);
    result_.rows.push_back(std::move(row));
  }

  const RdqlQuery& query_;
  const TripleStore& store_;
  std::map<std::string, std::size_t> slots_;
  std::vector<std::optional<Term>> bindings_;
  std::vector<std::size_t> order_;
  ResultSet result_;
};

std::string pattern_term_text(const PatternTerm& term) {
  if (const auto* v = std::get_if<Var>(&term)) return "?" + v->name;
  const auto& t = std::get<Term>(term);
  if (t.is_literal() && t.dtype() == DataType::String) {
    auto nt = t.ntriples();
    return nt.substr(0, nt.find("\"^^<") + 1);
  }
  return t.ntriples();
}

std::string filter_operand_text(const std::variant<Var, Term>& operand) {
  if (const auto* v = std::get_if<Var>(&operand)) return "?" + v->name;
  const auto& t = std::get<Term>(operand);
  if (t.is_literal() && t.dtype() != DataType::String) return t.value();
  return pattern_term_text(t);
}

}  // namespace

ResultSet evaluate(const RdqlQuery& query, const TripleStore& store) { return Evaluator(query, store).run(); }

std::string to_rdql_text(const RdqlQuery& query) {
  std::string out = "SELECT ";
  for (std::size_t i = 0; i < query.select.size(); ++i) out += (i ? ", ?" : "?") + query.select[i].name;
  out += "\nWHERE\n";
  for (std::size_t i = 0; i < query.patterns.size(); ++i) {
    const auto& p = query.patterns[i];
    out += "(" + pattern_term_text(p.subject) + " " + pattern_term_text(p.predicate) + " " +
           pattern_term_text(p.object) + ")";
    out += i + 1 < query.patterns.size() ? ",\n" : "\n";
  }
  if (!query.filter.empty()) {
    out += "AND ";
    for (std::size_t i = 0; i < query.filter.size(); ++i) {
      const auto& atom = query.filter[i];
      if (i) out += " && ";
      out += "?" + atom.lhs.name + " " + std::string(to_string(atom.op)) + " " + filter_operand_text(atom.rhs);
    }
    out += "\n";
  }
  return out;
}

}  // namespace medquery
