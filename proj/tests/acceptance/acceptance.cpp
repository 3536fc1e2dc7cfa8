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

// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <regex>
#include <sstream>

#include "generators.hpp"
#include "medquery/error.hpp"
#include "medquery/extraction.hpp"
#include "medquery/pipeline.hpp"
#include "medquery/render.hpp"
#include "medquery/schema_check.hpp"
#include "medquery/sql.hpp"
#include "medquery/sql_to_rdql.hpp"
#include "oracles.hpp"

using namespace medquery;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

std::filesystem::path data(const std::string& relative) { return std::filesystem::path(MEDQUERY_TEST_DATA) / relative; }

Project fixture(const std::string& dir, const std::string& schema = "schema.xml") {
  return parse_project(data(dir) / "sources.xml", data(dir) / schema);
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string normalize_whitespace(const std::string& text) {
  std::string collapsed = std::regex_replace(text, std::regex(" +"), " ");
  collapsed = std::regex_replace(collapsed, std::regex(" +\n"), "\n");
  while (!collapsed.empty() && (collapsed.back() == '\n' || collapsed.back() == ' ')) collapsed.pop_back();
  return collapsed;
}

std::string fixed(double value, int digits) {
  std::ostringstream out;
  out.precision(digits);
  out << std::fixed << value;
  return out.str();
}

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
AND ?DEBT > 2000)";

Outcome students_golden() {
  auto start = Clock::now();
  auto project = fixture("uni");
  auto text = convert(parse_sql(kStudentsSql, project.schema), project.schema).text;
  double elapsed = seconds_since(start);
  bool same = normalize_whitespace(text) == normalize_whitespace(kStudentsRdql);
  return {same && elapsed < 1.0, std::string(same ? "matches" : "differs") + " in " + fixed(elapsed * 1000, 1) + " ms"};
}

constexpr int kProjects = 100;
constexpr int kQueriesPerProject = 10;

struct Baseline {
  std::vector<std::string> exports;
  std::vector<std::string> tables;
};

Outcome end_to_end(Baseline& baseline) {
  auto start = Clock::now();
  int mismatches = 0;
  int queries = 0;
  std::size_t rows = 0;
  for (int i = 0; i < kProjects; ++i) {
    mqtest::Rng rng(1000 + i);
    mqtest::TempDir dir("mq-accept");
    auto g = mqtest::random_project(rng, dir.path());
    auto data = mqtest::oracle_materialize(g);
    for (int k = 0; k < kQueriesPerProject; ++k) {
      auto q = mqtest::random_query(rng, g.project.schema);
      auto run = run_query(g.project, q.sql, QueryLanguage::Sql);
      auto expected = mqtest::oracle_sql(q, data);
      ++queries;
      rows += expected.size();
      if (mqtest::rows_of(run.results) != expected) {
        if (mismatches++ < 3) std::cerr << "mismatch: " << q.sql << "\n" << run.rdql_text;
      }
      baseline.exports.push_back(export_ntriples(run.store));
      baseline.tables.push_back(render_results(run.results, ResultFormat::Table));
    }
  }
  double elapsed = seconds_since(start);
  return {mismatches == 0 && elapsed < 60.0, std::to_string(queries) + " queries, " + std::to_string(rows) +
                                                 " oracle rows, " + std::to_string(mismatches) + " mismatches, " +
                                                 fixed(elapsed, 2) + " s"};
}

Outcome rdql_oracle() {
  mqtest::Rng rng(3000);
  int mismatches = 0;
  std::size_t rows = 0;
  for (int i = 0; i < 200; ++i) {
    auto store = mqtest::random_store(rng, 300);
    auto q = mqtest::random_rdql(rng, store);
    auto expected = mqtest::oracle_rdql(q, store);
    rows += expected.size();
    if (mqtest::ntriples_rows(evaluate(q, store)) != expected) {
      if (mismatches++ < 3) std::cerr << "mismatch:\n" << to_rdql_text(q);
    }
  }
  return {mismatches == 0, "200 cases, " + std::to_string(rows) + " oracle rows, " + std::to_string(mismatches) +
                               " mismatches"};
}

Outcome satisfiability() {
  auto codes = [](const SatisfiabilityReport& r) {
    std::set<FindingCode> out;
    for (const auto& f : r.findings)
      if (f.severity == Severity::Error) out.insert(f.code);
    return out;
  };
  bool fixtures_ok = codes(check_schema(fixture("check", "clean.xml"))).empty() &&
                     codes(check_schema(fixture("uni"))).empty();
  const std::vector<std::pair<std::string, FindingCode>> cases = {{"unresolved", FindingCode::UnresolvedRef},
                                                                   {"type_mismatch", FindingCode::TypeMismatch},
                                                                   {"arity", FindingCode::ArityMismatch},
                                                                   {"cycle", FindingCode::CyclicDerivation}};
  for (const auto& [schema, code] : cases)
    fixtures_ok &= codes(check_schema(fixture("check", schema + ".xml"))) == std::set<FindingCode>{code};

  mqtest::Rng rng(4000);
  int disagreements = 0;
  int cyclic = 0;
  for (int i = 0; i < 50; ++i) {
    auto g = mqtest::random_derivations(rng, 8);
    bool expected = mqtest::oracle_has_cycle(g);
    cyclic += expected;
    bool found = codes(check_schema(parse_project_text(g.sources_xml, g.schema_xml))).count(FindingCode::CyclicDerivation);
    disagreements += expected != found;
  }
  return {fixtures_ok && disagreements == 0,
          std::string("fixtures ") + (fixtures_ok ? "ok" : "wrong") + ", 50 graphs (" + std::to_string(cyclic) +
              " cyclic), " + std::to_string(disagreements) + " disagreements"};
}

Outcome laziness() {
  mqtest::Rng rng(5000);
  int violations = 0;
  for (int i = 0; i < 20; ++i) {
    mqtest::TempDir dir("mq-accept");
    auto grouped = mqtest::random_grouped_project(rng, dir.path());
    const auto& [table, group] = *std::next(grouped.groups.begin(), i % 3);
    auto run = run_query(grouped.generated.project, "SELECT " + table + ".ID FROM " + table, QueryLanguage::Sql);
    std::set<std::string> allowed(group.begin(), group.end());
    for (const auto& ref : run.accessed) violations += !allowed.count(ref.to_string());
  }
  return {violations == 0, "20 schemas, " + std::to_string(violations) + " unreachable fetches"};
}

Outcome extraction_semantics() {
  AccessLog log;
  auto table = materialize_integrated_table(fixture("missing"), "STUDENT", log);
  auto col = *table.column("AVERAGE");
  std::size_t missing_average = 0;
  std::size_t present = 0;
  for (const auto& row : table.rows) {
    missing_average += row.cells[col].is_missing();
    for (const auto& cell : row.cells) present += !cell.is_missing();
  }
  IntegratedData data;
  data.tables.emplace("STUDENT", table);
  auto triples = build_triples(data).size();
  bool ok = table.rows.size() == 3 && missing_average == 1 && table.rows[1].cells[col].is_missing() && triples == present;
  return {ok, std::to_string(table.rows.size()) + " rows, " + std::to_string(missing_average) + " missing AVERAGE, " +
                  std::to_string(triples) + " triples for " + std::to_string(present) + " cells"};
}

Outcome ntriples_round_trip() {
  mqtest::Rng rng(7000);
  int failures = 0;
  std::size_t triples = 0;
  for (int i = 0; i < 50; ++i) {
    auto store = mqtest::random_store(rng, 200, true);
    triples += store.size();
    auto text = export_ntriples(store);
    if (export_ntriples(import_ntriples(text)) != text) ++failures;
    auto shuffled = store.triples();
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    TripleStore rebuilt;
    for (const auto& t : shuffled) rebuilt.insert(t);
    if (export_ntriples(rebuilt) != text) ++failures;
  }
  return {failures == 0, "50 stores, " + std::to_string(triples) + " triples, " + std::to_string(failures) + " failures"};
}

Outcome determinism(const Baseline& baseline) {
  std::size_t index = 0;
  int differences = 0;
  for (int i = 0; i < kProjects; ++i) {
    mqtest::Rng rng(1000 + i);
    mqtest::TempDir dir("mq-accept");
    auto g = mqtest::random_project(rng, dir.path());
    for (int k = 0; k < kQueriesPerProject; ++k, ++index) {
      auto q = mqtest::random_query(rng, g.project.schema);
      FetchOptions options{index % 2 == 0, 8000 + index};
      auto run = run_query(g.project, q.sql, QueryLanguage::Sql, options);
      differences += export_ntriples(run.store) != baseline.exports[index];
      differences += render_results(run.results, ResultFormat::Table) != baseline.tables[index];
    }
  }
  return {differences == 0 && index == baseline.exports.size(),
          std::to_string(index) + " reruns with shuffled/parallel fetches, " + std::to_string(differences) +
              " differences"};
}

}  // namespace

int main() {
  Baseline baseline;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"university golden conversion", students_golden},
      {"end-to-end oracle equivalence", [&] { return end_to_end(baseline); }},
      {"rdql evaluator oracle", rdql_oracle},
      {"satisfiability suite", satisfiability},
      {"lazy extraction", laziness},
      {"extraction semantics", extraction_semantics},
      {"n-triples round trip", ntriples_round_trip},
      {"determinism", [&] { return determinism(baseline); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failed += !outcome.pass;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": "
              << outcome.detail << std::endl;
  }
  return failed ? 1 : 0;
}
