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

#include <regex>

#include "generators.hpp"
#include "medquery/pipeline.hpp"
#include "medquery/render.hpp"
#include "medquery/sql.hpp"
#include "medquery/sql_to_rdql.hpp"
#include "oracles.hpp"
#include "test_data.hpp"

using namespace medquery;

namespace {

const char* kStudentsSql =
    "SELECT STUDENT.FIRSTNAME, STUDENT.LASTNAME, GRADE.AVERAGE, STUDENT.DEBT FROM STUDENT, GRADE ON "
    "STUDENT.ID=GRADE.STUDENTID WHERE STUDENT.DEBT>2000";

std::size_t count_matches(const std::string& text, const std::string& pattern) {
  std::regex re(pattern);
  return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
}

}  // namespace

TEST(Pipeline, StudentsQueryOverFixture) {
  auto run = run_query(load_fixture("uni"), kStudentsSql, QueryLanguage::Sql);
  EXPECT_EQ(render_results(run.results, ResultFormat::Table), "FIRSTNAME|LASTNAME|AVERAGE|DEBT\nBob|L|12|2500\n");
  EXPECT_EQ(run.tables, (std::set<std::string>{"GRADE", "STUDENT"}));
  EXPECT_EQ(run.accessed.size(), 2u);
  EXPECT_EQ(run.store.size(), 12u);
}

TEST(Pipeline, SqlAndConvertedRdqlAgree) {
  auto p = load_fixture("uni");
  auto sql = run_query(p, kStudentsSql, QueryLanguage::Sql);
  auto rdql = run_query(p, sql.rdql_text, QueryLanguage::Rdql);
  for (auto format : {ResultFormat::Table, ResultFormat::Xml, ResultFormat::NTriples})
    EXPECT_EQ(render_results(sql.results, format), render_results(rdql.results, format));
  EXPECT_EQ(sql.query, rdql.query);
}

TEST(Pipeline, ZeroMatchesGivesHeaderOnly) {
  auto run = run_query(load_fixture("uni"), "SELECT STUDENT.ID FROM STUDENT WHERE STUDENT.DEBT > 99999", QueryLanguage::Sql);
  EXPECT_EQ(render_results(run.results, ResultFormat::Table), "ID\n");
  EXPECT_EQ(render_results(run.results, ResultFormat::Xml), "<results>\n</results>\n");
  EXPECT_EQ(render_results(run.results, ResultFormat::NTriples), "");
}

TEST(Pipeline, ResultRenderings) {
  auto run = run_query(load_fixture("uni"), "SELECT STUDENT.FIRSTNAME, STUDENT.DEBT FROM STUDENT WHERE STUDENT.ID = 1",
                       QueryLanguage::Sql);
  EXPECT_EQ(render_results(run.results, ResultFormat::NTriples),
            "<http://integratedDB/result/row/0> <http://integratedDB/result#FIRSTNAME> "
            "\"Ann\"^^<http://www.w3.org/2001/XMLSchema#string> .\n"
            "<http://integratedDB/result/row/0> <http://integratedDB/result#DEBT> "
            "\"1500\"^^<http://www.w3.org/2001/XMLSchema#integer> .\n");
  EXPECT_EQ(render_results(run.results, ResultFormat::Xml),
            "<results>\n  <row><col name=\"FIRSTNAME\">Ann</col><col name=\"DEBT\">1500</col></row>\n</results>\n");
  // The N-Triples rendering is itself importable.
  EXPECT_EQ(import_ntriples(render_results(run.results, ResultFormat::NTriples)).size(), 2u);
}

TEST(Pipeline, XmlResultsAreEscaped) {
  ResultSet r{{"V"}, {{Term::literal("a<b & \"c\"", DataType::String)}}, 0};
  EXPECT_EQ(render_results(r, ResultFormat::Xml),
            "<results>\n  <row><col name=\"V\">a&lt;b &amp; &quot;c&quot;</col></row>\n</results>\n");
}

TEST(Render, StudentsSchemaDot) {
  auto dot = schema_to_dot(load_fixture("uni"));
  EXPECT_EQ(count_matches(dot, R"(\[label="\{)"), 2u) << dot;
  EXPECT_NE(dot.find("\"STUDENT\" [label=\"{STUDENT|ID : integer\\lFIRSTNAME : string"), std::string::npos) << dot;
  EXPECT_NE(dot.find("\"STUDENT\" -- \"GRADE\" [label=\"=\"];"), std::string::npos) << dot;
  EXPECT_EQ(count_matches(dot, " -- "), 1u);
}

TEST(Render, OneTableHasNoEdges) {
  auto p = load_fixture("missing");
  auto dot = schema_to_dot(p);
  EXPECT_EQ(count_matches(dot, R"(\[label="\{)"), 1u);
  EXPECT_EQ(count_matches(dot, " -- "), 0u);
  EXPECT_TRUE(schema_edges(p).empty());
}

TEST(Render, EdgesFollowFieldMappings) {
  auto p = load_fixture("check", "clean.xml");
  // ORDERS.CUSTID is mapped by no integrated field, so only the concat
  // relation (ORDER.LABEL from CUSTOMER.NAME via ORDER.CUSTOMER) links
  // the tables, and it stays inside ORDER.
  EXPECT_TRUE(schema_edges(p).empty());
  auto uni = load_fixture("uni");
  EXPECT_EQ(schema_edges(uni), (std::vector<SchemaEdge>{{"STUDENT", "GRADE", "="}}));
}

TEST(Render, SchemaXmlRoundTrips) {
  auto p = load_fixture("uni");
  auto again = parse_project_text(serialize_sources(p.sources), serialize_schema(p.schema), p.base_dir);
  EXPECT_EQ(again.schema, p.schema);
}

TEST(Pipeline, AgreesWithRelationalOracle) {
  mqtest::Rng rng(909);
  for (int i = 0; i < 25; ++i) {
    mqtest::TempDir dir("mq-pipe");
    auto g = mqtest::random_project(rng, dir.path());
    auto data = mqtest::oracle_materialize(g);
    for (int k = 0; k < 10; ++k) {
      auto q = mqtest::random_query(rng, g.project.schema);
      auto run = run_query(g.project, q.sql, QueryLanguage::Sql);
      EXPECT_EQ(mqtest::rows_of(run.results), mqtest::oracle_sql(q, data)) << q.sql << "\n" << run.rdql_text;
    }
  }
}
