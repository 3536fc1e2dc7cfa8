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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "medquery/descriptors.hpp"
#include "medquery/rdql.hpp"
#include "medquery/triple_store.hpp"
#include "medquery/wrappers.hpp"

namespace medquery {

/// Materialized integrated tables, keyed by integrated-table name.
struct IntegratedData {
  std::map<std::string, Table> tables;
};

/// How source tables are fetched while materializing. Results never depend
/// on these settings.
struct FetchOptions {
  /// Fetch the source tables of one materialization on worker threads.
  bool parallel = false;
  /// Shuffle fetch order with this seed.
  std::optional<std::uint64_t> shuffle_seed;
};

struct ExtractionDiagnostics {
  std::vector<std::string> warnings;
};

/// Integrated tables whose property IRIs appear as pattern predicates. A
/// variable predicate pulls in every schema table.
std::set<std::string> required_tables(const RdqlQuery& query, const IntegratedSchema& schema);

/// Source tables a materialization of `table_name` reads: the master table,
/// tables on equality chains toward mapped foreign tables, and tables of
/// derived-relation operands.
std::vector<TableRef> source_tables_for(const Project& project, const std::string& table_name);

/// Builds one integrated table by scanning its master source table (the
/// table of its first field) and pulling every other field through
/// equality relations, following chains across intermediate tables.
Table materialize_integrated_table(const Project& project, const std::string& table_name, AccessLog& log,
                                   const FetchOptions& options = {}, ExtractionDiagnostics* diagnostics = nullptr);

/// Materializes several integrated tables; with options.parallel they are
/// built concurrently.
IntegratedData materialize(const Project& project, const std::set<std::string>& table_names, AccessLog& log,
                           const FetchOptions& options = {}, ExtractionDiagnostics* diagnostics = nullptr);

/// One subject per row (http://integratedDB/T/row/n) and one triple per
/// non-Missing cell (http://integratedDB/T#F).
TripleStore build_triples(const IntegratedData& data);

}  // namespace medquery
