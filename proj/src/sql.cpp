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

#include "medquery/sql.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

#include "medquery/error.hpp"

namespace medquery {

namespace {

enum class Tok { Ident, Number, String, Comma, Dot, LParen, RParen, Op, Star, Arith, Semicolon, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  std::size_t pos = 0;
};

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
  return out;
}

const std::set<std::string> kKeywords = {
    "SELECT", "FROM",  "WHERE", "ON",    "AND",   "OR",     "JOIN",  "INNER", "NOT",  "GROUP",
    "ORDER",  "BY",    "HAVING", "LIMIT", "DISTINCT", "AS", "IN",    "BETWEEN", "LIKE", "IS",
    "EXISTS", "UNION", "TRUE",  "FALSE", "LEFT",  "RIGHT",  "OUTER", "FULL",  "CROSS", "NULL",
    "OFFSET", "CASE",  "ALL",   "ANY",   "INTERSECT", "EXCEPT"};

const std::set<std::string> kAggregates = {"COUNT", "SUM", "AVG", "MIN", "MAX"};

[[noreturn]] void parse_error(std::size_t pos, const std::string& message) {
  throw Error(ErrorCode::SqlParseError, "at position " + std::to_string(pos) + ": " + message);
}

[[noreturn]] void unsupported(const std::string& construct) { throw Error(ErrorCode::UnsupportedSql, construct); }

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = text[i];
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(c) || c == '_') {
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
      tokens.push_back({Tok::Ident, std::string(text.substr(start, i - start)), start});
    } else if (std::isdigit(c)) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i + 1 < text.size() && text[i] == '.' && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      }
      tokens.push_back({Tok::Number, std::string(text.substr(start, i - start)), start});
    } else if (c == '\'') {
      std::string value;
      ++i;
      for (;;) {
        if (i >= text.size()) parse_error(start, "unterminated string literal");
        if (text[i] == '\'') {
          if (i + 1 < text.size() && text[i + 1] == '\'') {
            value += '\'';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        value += text[i++];
      }
      tokens.push_back({Tok::String, value, start});
    } else if (c == ',') {
      tokens.push_back({Tok::Comma, ",", i++});
    } else if (c == '.') {
      tokens.push_back({Tok::Dot, ".", i++});
    } else if (c == '(') {
      tokens.push_back({Tok::LParen, "(", i++});
    } else if (c == ')') {
      tokens.push_back({Tok::RParen, ")", i++});
    } else if (c == ';') {
      tokens.push_back({Tok::Semicolon, ";", i++});
    } else if (c == '*') {
      tokens.push_back({Tok::Star, "*", i++});
    } else if (c == '+' || c == '-' || c == '/' || c == '%' || c == '|') {
      tokens.push_back({Tok::Arith, std::string(1, static_cast<char>(c)), i++});
    } else if (c == '=' || c == '<' || c == '>' || c == '!') {
      std::string op(1, static_cast<char>(c));
      ++i;
      if (i < text.size() && (text[i] == '=' || (c == '<' && text[i] == '>'))) op += text[i++];
      if (op == "!") parse_error(start, "expected '!='");
      tokens.push_back({Tok::Op, op, start});
    } else {
      parse_error(start, std::string("unexpected character '") + static_cast<char>(c) + "'");
    }
  }
  tokens.push_back({Tok::End, "", text.size()});
  return tokens;
}

struct Operand {
  std::variant<QualifiedField, Literal> value;
  std::size_t pos = 0;
};

// Raw syntax: field names may be unqualified (table left empty).
struct RawQuery {
  SqlQuery query;
  std::vector<std::pair<QualifiedField, std::size_t>> field_positions;
  std::vector<std::size_t> from_positions;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  RawQuery parse() {
    expect_keyword("SELECT");
    if (is_keyword("DISTINCT") || is_keyword("ALL")) unsupported("distinct");
    parse_select_item();
    while (peek().type == Tok::Comma) {
      advance();
      parse_select_item();
    }
    expect_keyword("FROM");
    parse_table_list();
    if (is_keyword("ON")) {
      advance();
      parse_conditions(true);
    }
    if (is_keyword("WHERE")) {
      advance();
      parse_conditions(false);
    }
    if (is_keyword("GROUP")) unsupported("group by");
    if (is_keyword("HAVING")) unsupported("having");
    if (is_keyword("ORDER")) unsupported("order by");
    if (is_keyword("LIMIT") || is_keyword("OFFSET")) unsupported("limit");
    if (is_keyword("UNION") || is_keyword("INTERSECT") || is_keyword("EXCEPT")) unsupported("set operation");
    if (is_keyword("OR")) unsupported("or");
    if (peek().type == Tok::Semicolon) advance();
    if (peek().type != Tok::End) parse_error(peek().pos, "unexpected '" + peek().text + "'");
    return std::move(raw_);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(index_ + ahead, tokens_.size() - 1)];
  }
  const Token& advance() { return tokens_[std::min(index_++, tokens_.size() - 1)]; }

  bool is_keyword(const char* keyword, std::size_t ahead = 0) const {
    const auto& t = peek(ahead);
    return t.type == Tok::Ident && upper(t.text) == keyword;
  }

  void expect_keyword(const char* keyword) {
    if (!is_keyword(keyword)) parse_error(peek().pos, std::string("expected ") + keyword);
    advance();
  }

  std::string expect_name(const char* what) {
    const auto& t = peek();
    if (t.type != Tok::Ident || kKeywords.count(upper(t.text)))
      parse_error(t.pos, std::string("expected ") + what + (t.type == Tok::End ? "" : ", found '" + t.text + "'"));
    return advance().text;
  }

  // Rejects what may legally follow a value in full SQL but not here.
  void reject_trailing_expression() {
    const auto& t = peek();
    if (t.type == Tok::Arith || t.type == Tok::Star) unsupported("expression");
    if (t.type == Tok::LParen) unsupported("expression");
  }

  void reject_function_call() {
    if (peek().type == Tok::Ident && peek(1).type == Tok::LParen) {
      if (kAggregates.count(upper(peek().text))) unsupported("aggregate");
      if (is_keyword("EXISTS")) unsupported("subquery");
      unsupported("expression");
    }
  }

  QualifiedField parse_field() {
    auto pos = peek().pos;
    QualifiedField field;
    field.field = expect_name("field name");
    if (peek().type == Tok::Dot) {
      advance();
      field.table = std::move(field.field);
      field.field = expect_name("field name");
    }
    raw_.field_positions.emplace_back(field, pos);
    return field;
  }

  void parse_select_item() {
    const auto& t = peek();
    if (t.type == Tok::Star) unsupported("wildcard select");
    if (t.type == Tok::LParen) {
      if (is_keyword("SELECT", 1)) unsupported("subquery");
      unsupported("expression");
    }
    if (t.type == Tok::Number || t.type == Tok::String || t.type == Tok::Arith || is_keyword("TRUE") ||
        is_keyword("FALSE") || is_keyword("NULL") || is_keyword("CASE"))
      unsupported("expression");
    reject_function_call();
    raw_.query.select.push_back(parse_field());
    reject_trailing_expression();
    if (is_keyword("AS") || (peek().type == Tok::Ident && !kKeywords.count(upper(peek().text))))
      unsupported("alias");
  }

  void parse_table_name() {
    if (peek().type == Tok::LParen) {
      if (is_keyword("SELECT", 1)) unsupported("subquery");
      parse_error(peek().pos, "expected table name");
    }
    raw_.from_positions.push_back(peek().pos);
    raw_.query.from.push_back(expect_name("table name"));
    if (is_keyword("AS") || (peek().type == Tok::Ident && !kKeywords.count(upper(peek().text))))
      unsupported("table alias");
  }

  void parse_table_list() {
    parse_table_name();
    for (;;) {
      if (peek().type == Tok::Comma) {
        advance();
        parse_table_name();
      } else if (is_keyword("JOIN") || (is_keyword("INNER") && is_keyword("JOIN", 1))) {
        if (is_keyword("INNER")) advance();
        advance();
        parse_table_name();
        if (is_keyword("ON")) {
          advance();
          parse_conditions(true);
        }
      } else if (is_keyword("LEFT") || is_keyword("RIGHT") || is_keyword("FULL") || is_keyword("OUTER")) {
        unsupported("outer join");
      } else if (is_keyword("CROSS")) {
        unsupported("cross join");
      } else {
        return;
      }
    }
  }

  Operand parse_operand() {
    const auto& t = peek();
    Operand operand;
    operand.pos = t.pos;
    if (t.type == Tok::LParen) {
      if (is_keyword("SELECT", 1)) unsupported("subquery");
      unsupported("expression");
    }
    if (t.type == Tok::Number) {
      auto text = advance().text;
      operand.value = Literal{*canonical_lexical(text, text.find('.') == std::string::npos ? DataType::Integer
                                                                                            : DataType::Decimal),
                              text.find('.') == std::string::npos ? DataType::Integer : DataType::Decimal};
    } else if (t.type == Tok::Arith && t.text == "-" && peek(1).type == Tok::Number) {
      advance();
      auto text = "-" + advance().text;
      auto dtype = text.find('.') == std::string::npos ? DataType::Integer : DataType::Decimal;
      operand.value = Literal{*canonical_lexical(text, dtype), dtype};
    } else if (t.type == Tok::String) {
      operand.value = Literal{advance().text, DataType::String};
    } else if (is_keyword("TRUE") || is_keyword("FALSE")) {
      operand.value = Literal{is_keyword("TRUE") ? "true" : "false", DataType::Boolean};
      advance();
    } else if (is_keyword("NULL")) {
      unsupported("null");
    } else if (is_keyword("NOT")) {
      unsupported("not");
    } else if (is_keyword("EXISTS")) {
      unsupported("subquery");
    } else if (is_keyword("CASE")) {
      unsupported("expression");
    } else {
      reject_function_call();
      operand.value = parse_field();
    }
    reject_trailing_expression();
    return operand;
  }

  CompareOp parse_comparator() {
    const auto& t = peek();
    if (t.type != Tok::Op) {
      if (is_keyword("IN")) {
        if (peek(1).type == Tok::LParen && is_keyword("SELECT", 2)) unsupported("subquery");
        unsupported("in");
      }
      if (is_keyword("NOT")) unsupported("not");
      if (is_keyword("BETWEEN")) unsupported("between");
      if (is_keyword("LIKE")) unsupported("like");
      if (is_keyword("IS")) unsupported("null");
      parse_error(t.pos, "expected comparison operator");
    }
    advance();
    if (t.text == "=") return CompareOp::Eq;
    if (t.text == "!=" || t.text == "<>") return CompareOp::Ne;
    if (t.text == "<") return CompareOp::Lt;
    if (t.text == "<=") return CompareOp::Le;
    if (t.text == ">") return CompareOp::Gt;
    if (t.text == ">=") return CompareOp::Ge;
    parse_error(t.pos, "unknown operator '" + t.text + "'");
  }

  void parse_condition(bool from_on) {
    auto lhs = parse_operand();
    auto op = parse_comparator();
    auto rhs = parse_operand();
    Condition cond;
    if (const auto* field = std::get_if<QualifiedField>(&lhs.value)) {
      cond = Condition{*field, op, rhs.value};
    } else if (const auto* field = std::get_if<QualifiedField>(&rhs.value)) {
      cond = Condition{*field, mirrored(op), lhs.value};
    } else {
      unsupported("constant condition");
    }
    bool field_pair = cond.is_field_comparison();
    if (field_pair && (from_on || op == CompareOp::Eq)) raw_.query.join_conds.push_back(std::move(cond));
    else raw_.query.filters.push_back(std::move(cond));
  }

  void parse_conditions(bool from_on) {
    parse_condition(from_on);
    for (;;) {
      if (is_keyword("AND")) {
        advance();
        parse_condition(from_on);
      } else if (is_keyword("OR")) {
        unsupported("or");
      } else {
        return;
      }
    }
  }

  std::vector<Token> tokens_;
  std::size_t index_ = 0;
  RawQuery raw_;
};

template <typename Fn>
void for_each_field(SqlQuery& query, Fn&& fn) {
  for (auto& f : query.select) fn(f);
  for (auto* conds : {&query.join_conds, &query.filters}) {
    for (auto& c : *conds) {
      fn(c.lhs);
      if (auto* rhs = std::get_if<QualifiedField>(&c.rhs)) fn(*rhs);
    }
  }
}

}  // namespace

SqlQuery parse_sql(std::string_view text, const IntegratedSchema& schema) {
  auto raw = Parser(text).parse();
  auto& query = raw.query;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < query.from.size(); ++i) {
    if (!schema.find_table(query.from[i])) throw Error(ErrorCode::UnknownTable, query.from[i]);
    if (!seen.insert(query.from[i]).second) unsupported("repeated table " + query.from[i]);
  }
  for (const auto& [field, pos] : raw.field_positions)
    if (field.table.empty()) parse_error(pos, "field '" + field.field + "' must be qualified with its table");
  std::set<std::string> referenced;
  for_each_field(query, [&](const QualifiedField& f) {
    if (!seen.count(f.table)) throw Error(ErrorCode::UnknownTable, f.table + " (not listed in FROM)");
    if (!schema.find_table(f.table)->find_field(f.field)) throw Error(ErrorCode::UnknownField, f.to_string());
    referenced.insert(f.table);
  });
  for (const auto& table : query.from)
    if (!referenced.count(table)) unsupported("table " + table + " has no referenced field");
  return query;
}

SqlQuery parse_view_sql(std::string_view text) {
  auto raw = Parser(text).parse();
  auto& query = raw.query;
  if (query.from.size() != 1) unsupported("join in view");
  const auto& table = query.from.front();
  for_each_field(query, [&](QualifiedField& f) {
    if (f.table.empty()) f.table = table;
    else if (f.table != table) throw Error(ErrorCode::UnknownTable, f.table + " (not listed in FROM)");
  });
  // A field equality inside one table is a filter, not a join, in a view.
  for (auto& c : query.join_conds) query.filters.push_back(std::move(c));
  query.join_conds.clear();
  return query;
}

namespace {

std::string sql_literal(const Literal& literal) {
  switch (literal.dtype) {
    case DataType::String: {
      std::string out = "'";
      for (char c : literal.lexical) {
        if (c == '\'') out += '\'';
        out += c;
      }
      return out + "'";
    }
    case DataType::Boolean: return literal.lexical == "true" ? "TRUE" : "FALSE";
    default: return literal.lexical;
  }
}

std::string sql_condition(const Condition& c) {
  std::string out = c.lhs.to_string() + " " + std::string(to_string(c.op)) + " ";
  if (const auto* field = std::get_if<QualifiedField>(&c.rhs)) return out + field->to_string();
  return out + sql_literal(std::get<Literal>(c.rhs));
}

std::string joined(const std::vector<Condition>& conds) {
  std::string out;
  for (std::size_t i = 0; i < conds.size(); ++i) out += (i ? " AND " : "") + sql_condition(conds[i]);
  return out;
}

}  // namespace

std::string unparse_sql(const SqlQuery& query) {
  std::string out = "SELECT ";
  for (std::size_t i = 0; i < query.select.size(); ++i) out += (i ? ", " : "") + query.select[i].to_string();
  out += " FROM ";
  for (std::size_t i = 0; i < query.from.size(); ++i) out += (i ? ", " : "") + query.from[i];
  if (!query.join_conds.empty()) out += " ON " + joined(query.join_conds);
  if (!query.filters.empty()) out += " WHERE " + joined(query.filters);
  return out;
}

}  // namespace medquery
