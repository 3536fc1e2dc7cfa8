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

#include <map>
#include <string>

#include "medquery/rdql.hpp"
#include "medquery/sql.hpp"

namespace medquery {

struct Conversion {
  std::string text;
  RdqlQuery query;
};

/// Rewrites a validated SQL query as RDQL over the integrated-data triples:
///  1. each FROM table gets a subject variable ?tbl_k (k = FROM position);
///  2. each selected field T.F becomes ?F (?T_F when two selected fields of
///     different tables share a name);
///  3. every field used anywhere gets one pattern
///     (?tbl_k <http://integratedDB/T#F> ?var); equality joins share one
///     variable, a selected side's variable if any, else a fresh ?fld_j;
///  4. the remaining conditions form the AND clause.
Conversion convert(const SqlQuery& query, const IntegratedSchema& schema);

}  // namespace medquery
