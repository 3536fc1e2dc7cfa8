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

#include <gtest/gtest.h>

#include <algorithm>

#include "generators.hpp"
#include "medquery/error.hpp"
#include "medquery/rdql.hpp"
#include "oracles.hpp"
#include "test_data.hpp"

using namespace medquery;

namespace {

const char* kStudentsRdql = R"(SELECT ?FIRSTNAME, ?LASTNAME, ?AVERAGE, ?DEBT
WHERE
(?tbl_0 <http://integratedDB/STUDENT#FIRSTNAME> ?FIRSTNAME),
(?tbl_0 <http://integratedDB/STUDENT#LASTNAME> ?LASTNAME),
(?tbl_1 <http://integratedDB/GRADE#AVERAGE> ?AVERAGE),
(?tbl_0 <http://integratedDB/STUDENT#DEBT> ?DEBT),
(?tbl_0 <http://integratedDB/STUDENT#ID> ?fld_0),
(?tbl_1 <http://integratedDB/GRADE#STUDENTID> ?fld_0)
AND ?DEBT > 2000)";

Term prop(const std::string& t, const std::string& f) { return Term::iri("http://integratedDB/" + t + "#" + f); }
Term row(const std::string& t, int n) { return Term::iri("http://integratedDB/" + t + "/row/" + std::to_string(n)); }
Term integer(const std::string& v) { return Term::literal(v, DataType::Integer); }
Term str(const std::string& v) { return Term::literal(v, DataType::String); }

TripleStore students_store() {
  TripleStore s;
  const std::vector<std::vector<std::string>> students = {{"1", "Ann", "K", "1500"}, {"2", "Bob", "L", "2500"}};
  for (int r = 0; r < 2; ++r) {
    s.insert({row("STUDENT", r), prop("STUDENT", "ID"), integer(students[r][0])});
    s.insert({row("STUDENT", r), prop("STUDENT", "FIRSTNAME"), str(students[r][1])});
    s.insert({row("STUDENT", r), prop("STUDENT", "LASTNAME"), str(students[r][2])});
    s.insert({row("STUDENT", r), prop("STUDENT", "DEBT"), integer(students[r][3])});
  }
  const std::vector<std::pair<std::string, std::string>> grades = {{"1", "17"}, {"2", "12"}};
  for (int r = 0; r < 2; ++r) {
    s.insert({row("GRADE", r), prop("GRADE", "STUDENTID"), integer(grades[r].first)});
    s.insert({row("GRADE", r), prop("GRADE", "AVERAGE"), integer(grades[r].second)});
  }
  return s;
}

}  // namespace

TEST(Rdql, ParsesStudents) {
  auto q = parse_rdql(kStudentsRdql);
  EXPECT_EQ(q.select.size(), 4u);
  EXPECT_EQ(q.patterns.size(), 6u);
  ASSERT_EQ(q.filter.size(), 1u);
  EXPECT_EQ(q.filter[0].lhs.name, "DEBT");
  EXPECT_EQ(q.filter[0].op, CompareOp::Gt);
  EXPECT_EQ(std::get<Term>(q.filter[0].rhs), integer("2000"));
  EXPECT_EQ(std::get<Term>(q.patterns[0].predicate), prop("STUDENT", "FIRSTNAME"));
}

TEST(Rdql, ParsesLiteralsAndLayout) {
  auto q = parse_rdql("SELECT ?x WHERE (?x <http://p> \"a\")");
  ASSERT_EQ(q.patterns.size(), 1u);
  EXPECT_TRUE(q.filter.empty());
  EXPECT_EQ(std::get<Term>(q.patterns[0].object), str("a"));
  auto typed = parse_rdql(
      "select ?x ?y where (?x <http://p> \"07\"^^<http://www.w3.org/2001/XMLSchema#integer>), (?x <http://q> ?y) "
      "and ?y >= -1.50 && ?y != true && ?x = <http://e/s> && ?y < \"q\\\"\"");
  EXPECT_EQ(typed.select.size(), 2u);
  EXPECT_EQ(std::get<Term>(typed.patterns[0].object), integer("7"));
  ASSERT_EQ(typed.filter.size(), 4u);
  EXPECT_EQ(std::get<Term>(typed.filter[0].rhs), Term::literal("-1.5", DataType::Decimal));
  EXPECT_EQ(std::get<Term>(typed.filter[1].rhs), Term::literal("true", DataType::Boolean));
  EXPECT_EQ(std::get<Term>(typed.filter[2].rhs), Term::iri("http://e/s"));
  EXPECT_EQ(std::get<Term>(typed.filter[3].rhs), str("q\""));
}

TEST(Rdql, Errors) {
  EXPECT_MQ_ERROR(parse_rdql("SELECT ?y WHERE (?x <http://p> \"a\")"), ErrorCode::UnboundSelectVar);
  EXPECT_MQ_ERROR(parse_rdql("SELECT ?x WHERE (?x <http://p> \"a\") AND ?z > 1"), ErrorCode::UnboundFilterVar);
  EXPECT_MQ_ERROR(parse_rdql("SELECT ?x WHERE (?x <http://p>)"), ErrorCode::RdqlParseError);
  EXPECT_MQ_ERROR(parse_rdql("SELECT ?x WHERE (?x <http://p> \"a\"), "), ErrorCode::RdqlParseError);
  EXPECT_MQ_ERROR(parse_rdql("SELECT ?x WHERE (?x <http://p> \"a\") AND ?x ~ 1"), ErrorCode::RdqlParseError);
  EXPECT_MQ_ERROR(parse_rdql("SELECT ?1x WHERE (?1x <http://p> \"a\")"), ErrorCode::RdqlParseError);
  EXPECT_MQ_ERROR(parse_rdql("SELECT ?x WHERE (?x <http://p> \"a\"^^<http://www.w3.org/2001/XMLSchema#integer>)"),
                  ErrorCode::RdqlParseError);
  try {
    parse_rdql("SELECT ?x WHERE (?x <http://p> \"a\") junk");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RdqlParseError);
    EXPECT_NE(std::string(e.what()).find("position"), std::string::npos) << e.what();
  }
}

TEST(Rdql, EvaluatesStudents) {
  auto r = evaluate(parse_rdql(kStudentsRdql), students_store());
  EXPECT_EQ(r.columns, (std::vector<std::string>{"FIRSTNAME", "LASTNAME", "AVERAGE", "DEBT"}));
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0], (std::vector<Term>{str("Bob"), str("L"), integer("12"), integer("2500")}));
  EXPECT_EQ(r.type_mismatches, 0u);
}

TEST(Rdql, EmptyStoreAndFullScan) {
  auto all = parse_rdql("SELECT ?s, ?p, ?o WHERE (?s ?p ?o)");
  EXPECT_TRUE(evaluate(all, TripleStore{}).rows.empty());
  auto store = students_store();
  EXPECT_EQ(evaluate(all, store).rows.size(), store.size());
}

TEST(Rdql, KeepsDuplicatesInCanonicalOrder) {
  auto r = evaluate(parse_rdql("SELECT ?p WHERE (?s ?p ?o)"), students_store());
  ASSERT_EQ(r.rows.size(), 12u);
  EXPECT_TRUE(std::is_sorted(r.rows.begin(), r.rows.end(), [](const auto& a, const auto& b) {
    return a[0].ntriples() < b[0].ntriples();
  }));
}

TEST(Rdql, CrossTypeComparisonsAreFalseAndCounted) {
  auto r = evaluate(parse_rdql("SELECT ?o WHERE (?s <http://integratedDB/STUDENT#FIRSTNAME> ?o) AND ?o > 5"),
                    students_store());
  EXPECT_TRUE(r.rows.empty());
  EXPECT_EQ(r.type_mismatches, 2u);
  EXPECT_EQ(compare_terms(integer("2"), CompareOp::Lt, Term::literal("2.5", DataType::Decimal)), true);
  EXPECT_EQ(compare_terms(str("b"), CompareOp::Gt, str("B")), true);
  EXPECT_FALSE(compare_terms(Term::literal("true", DataType::Boolean), CompareOp::Gt,
                             Term::literal("false", DataType::Boolean)));
  EXPECT_EQ(compare_terms(Term::iri("http://a"), CompareOp::Eq, Term::iri("http://a")), true);
  EXPECT_FALSE(compare_terms(Term::iri("http://a"), CompareOp::Eq, str("http://a")));
}

TEST(Rdql, AgreesWithExhaustiveEnumeration) {
  mqtest::Rng rng(101);
  for (int i = 0; i < 150; ++i) {
    auto store = mqtest::random_store(rng, 120);
    auto q = mqtest::random_rdql(rng, store);
    EXPECT_EQ(mqtest::ntriples_rows(evaluate(q, store)), mqtest::oracle_rdql(q, store)) << to_rdql_text(q);
  }
}

TEST(Rdql, PatternOrderDoesNotMatter) {
  mqtest::Rng rng(202);
  for (int i = 0; i < 100; ++i) {
    auto store = mqtest::random_store(rng, 200);
    auto q = mqtest::random_rdql(rng, store);
    auto expected = evaluate(q, store);
    std::shuffle(q.patterns.begin(), q.patterns.end(), rng);
    auto shuffled = evaluate(q, store);
    EXPECT_EQ(shuffled.rows, expected.rows);
    EXPECT_EQ(shuffled.type_mismatches, expected.type_mismatches);
  }
}

TEST(Rdql, AddingTriplesKeepsRows) {
  mqtest::Rng rng(303);
  for (int i = 0; i < 60; ++i) {
    auto store = mqtest::random_store(rng, 100);
    auto q = mqtest::random_rdql(rng, store);
    auto before = mqtest::ntriples_rows(evaluate(q, store));
    auto extra = mqtest::random_store(rng, 30);
    for (const auto& t : extra.triples()) store.insert(t);
    auto after = mqtest::ntriples_rows(evaluate(q, store));
    EXPECT_TRUE(std::includes(after.begin(), after.end(), before.begin(), before.end()));
  }
}

TEST(Rdql, TextRoundTrip) {
  mqtest::Rng rng(404);
  for (int i = 0; i < 100; ++i) {
    auto q = mqtest::random_rdql(rng, TripleStore{});
    EXPECT_EQ(parse_rdql(to_rdql_text(q)), q) << to_rdql_text(q);
  }
}
