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

#include <set>
#include <string>
#include <string_view>

#include "medquery/descriptors.hpp"
#include "medquery/extraction.hpp"
#include "medquery/rdql.hpp"

namespace medquery {

enum class QueryLanguage { Sql, Rdql };

struct QueryRun {
  /// RDQL actually evaluated (the converter's output for SQL input).
  std::string rdql_text;
  RdqlQuery query;
  std::set<std::string> tables;
  IntegratedData data;
  TripleStore store;
  ResultSet results;
  std::vector<TableRef> accessed;
  ExtractionDiagnostics diagnostics;
};

/// parse (+ convert) -> required tables -> materialize -> triples -> evaluate.
/// SQL is converted and the resulting text re-parsed, so a SQL run and an
/// RDQL run of the converter's output are indistinguishable.
QueryRun run_query(const Project& project, std::string_view text, QueryLanguage language,
                   const FetchOptions& options = {});

}  // namespace medquery
