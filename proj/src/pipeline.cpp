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

#include "medquery/pipeline.hpp"

#include "medquery/sql.hpp"
#include "medquery/sql_to_rdql.hpp"

namespace medquery {

QueryRun run_query(const Project& project, std::string_view text, QueryLanguage language,
                   const FetchOptions& options) {
  QueryRun run;
  run.rdql_text = language == QueryLanguage::Sql ? convert(parse_sql(text, project.schema), project.schema).text
                                                 : std::string(text);
  run.query = parse_rdql(run.rdql_text);
  run.tables = required_tables(run.query, project.schema);
  AccessLog log;
  run.data = materialize(project, run.tables, log, options, &run.diagnostics);
  run.accessed = log.entries();
  run.store = build_triples(run.data);
  run.results = evaluate(run.query, run.store);
  return run;
}

}  // namespace medquery
