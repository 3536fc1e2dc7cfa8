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

#include "generators.hpp"
#include "medquery/sql.hpp"
#include "medquery/sql_to_rdql.hpp"
#include "test_data.hpp"

using namespace medquery;

namespace {

const char* kStudentsSql =
    "SELECT STUDENT.FIRSTNAME, STUDENT.LASTNAME, GRADE.AVERAGE, STUDENT.DEBT FROM STUDENT, GRADE ON "
    "STUDENT.ID=GRADE.STUDENTID WHERE STUDENT.DEBT>2000";

const char* kStudentsRdql = R"(SELECT ?FIRSTNAME, ?LASTNAME, ?AVERAGE, ?DEBT
WHERE
(?tbl_0 <http://integratedDB/STUDENT#FIRSTNAME> ?FIRSTNAME),
(?tbl_0 <http://integratedDB/STUDENT#LASTNAME> ?LASTNAME),
(?tbl_1 <http://integratedDB/GRADE#AVERAGE> ?AVERAGE),
(?tbl_0 <http://integratedDB/STUDENT#DEBT> ?DEBT),
(?tbl_0 <http://integratedDB/STUDENT#ID> ?fld_0),
(?tbl_1 <http://integratedDB/GRADE#STUDENTID> ?fld_0)
AND ?DEBT > 2000
)";

// A schema with colliding names and a reserved-looking field.
const char* kSources = R"(<datasources><datasource name="d" kind="tabular" location=".">
  <table name="A"><field name="ID" type="integer"/><field name="NAME" type="string"/><field name="tbl_0" type="string"/>
    <field name="AMOUNT" type="decimal"/><file path="a.tbl"/></table>
  <table name="B"><field name="ID" type="integer"/><field name="NAME" type="string"/><field name="AID" type="integer"/>
    <field name="AMOUNT" type="integer"/><file path="b.tbl"/></table>
</datasource></datasources>)";
const char* kSchema = R"(<schema name="s">
  <table name="A">
    <field name="ID" type="integer" source="d" sourcetable="A" sourcefield="ID"/>
    <field name="NAME" type="string" source="d" sourcetable="A" sourcefield="NAME"/>
    <field name="tbl_0" type="string" source="d" sourcetable="A" sourcefield="tbl_0"/>
    <field name="AMOUNT" type="decimal" source="d" sourcetable="A" sourcefield="AMOUNT"/>
  </table>
  <table name="B">
    <field name="ID" type="integer" source="d" sourcetable="B" sourcefield="ID"/>
    <field name="NAME" type="string" source="d" sourcetable="B" sourcefield="NAME"/>
    <field name="AID" type="integer" source="d" sourcetable="B" sourcefield="AID"/>
    <field name="AMOUNT" type="integer" source="d" sourcetable="B" sourcefield="AMOUNT"/>
  </table>
</schema>)";

std::string convert_text(const std::string& sql, const IntegratedSchema& schema) {
  return convert(parse_sql(sql, schema), schema).text;
}

const IntegratedSchema& collision_schema() {
  static const Project p = parse_project_text(kSources, kSchema);
  return p.schema;
}

}  // namespace

TEST(SqlToRdql, StudentsGolden) {
  auto p = load_fixture("uni");
  EXPECT_EQ(convert_text(kStudentsSql, p.schema), kStudentsRdql);
}

TEST(SqlToRdql, SingleTable) {
  auto p = load_fixture("uni");
  EXPECT_EQ(convert_text("SELECT STUDENT.ID FROM STUDENT", p.schema),
            "SELECT ?ID\nWHERE\n(?tbl_0 <http://integratedDB/STUDENT#ID> ?ID)\n");
}

TEST(SqlToRdql, CollidingNamesAreQualified) {
  auto text = convert_text("SELECT A.NAME, B.NAME, A.tbl_0 FROM A, B ON A.ID = B.AID", collision_schema());
  EXPECT_EQ(text.substr(0, text.find('\n')), "SELECT ?A_NAME, ?B_NAME, ?A_tbl_0");
}

TEST(SqlToRdql, SelectedJoinMemberNamesTheClass) {
  auto text = convert_text("SELECT A.ID, B.AID FROM A, B ON A.ID = B.AID", collision_schema());
  EXPECT_EQ(text,
            "SELECT ?ID, ?ID\nWHERE\n"
            "(?tbl_0 <http://integratedDB/A#ID> ?ID),\n"
            "(?tbl_1 <http://integratedDB/B#AID> ?ID)\n");
}

TEST(SqlToRdql, MixedTypeAndNonEqualityJoinsBecomeFilters) {
  auto text = convert_text("SELECT A.NAME FROM A, B ON A.AMOUNT = B.AMOUNT AND A.ID < B.ID WHERE B.NAME = 'x'",
                           collision_schema());
  EXPECT_EQ(text,
            "SELECT ?NAME\nWHERE\n"
            "(?tbl_0 <http://integratedDB/A#NAME> ?NAME),\n"
            "(?tbl_0 <http://integratedDB/A#AMOUNT> ?fld_0),\n"
            "(?tbl_1 <http://integratedDB/B#AMOUNT> ?fld_1),\n"
            "(?tbl_0 <http://integratedDB/A#ID> ?fld_2),\n"
            "(?tbl_1 <http://integratedDB/B#ID> ?fld_3),\n"
            "(?tbl_1 <http://integratedDB/B#NAME> ?fld_4)\n"
            "AND ?fld_0 = ?fld_1 && ?fld_2 < ?fld_3 && ?fld_4 = \"x\"\n");
}

TEST(SqlToRdql, LiteralRendering) {
  auto text = convert_text("SELECT A.ID FROM A WHERE A.AMOUNT >= 1.50 AND A.NAME != 'say \"hi\"' AND A.ID <> -3",
                           collision_schema());
  EXPECT_NE(text.find("AND ?fld_0 >= 1.5 && ?fld_1 != \"say \\\"hi\\\"\" && ?ID != -3\n"), std::string::npos) << text;
}

TEST(SqlToRdql, OutputReparsesToTheSameQuery) {
  mqtest::Rng rng(73);
  for (int i = 0; i < 40; ++i) {
    mqtest::TempDir dir("mq-conv");
    auto g = mqtest::random_project(rng, dir.path());
    for (int k = 0; k < 10; ++k) {
      auto sql = mqtest::random_query(rng, g.project.schema).sql;
      auto conversion = convert(parse_sql(sql, g.project.schema), g.project.schema);
      EXPECT_EQ(parse_rdql(conversion.text), conversion.query) << sql << "\n" << conversion.text;
      EXPECT_EQ(to_rdql_text(conversion.query), conversion.text);
    }
  }
}
