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

#include <string>
#include <vector>

#include "medquery/descriptors.hpp"

namespace medquery {

enum class Severity { Error, Warning };

enum class FindingCode {
  UnresolvedRef,
  TypeMismatch,
  ArityMismatch,
  CyclicDerivation,
  UnmappedTable,
};

std::string_view to_string(Severity severity);
/// Upper-case report code, e.g. TYPE_MISMATCH.
std::string_view to_string(FindingCode code);

struct Finding {
  Severity severity = Severity::Error;
  FindingCode code = FindingCode::UnresolvedRef;
  /// Path into the descriptors, e.g. schema/relation[2]/lhs/ref[1].
  std::string location;
  std::string message;
  bool operator==(const Finding&) const = default;
};

struct SatisfiabilityReport {
  std::vector<Finding> findings;

  std::size_t error_count() const;
  std::size_t warning_count() const;
  bool accepted() const { return error_count() == 0; }

  /// One `severity CODE location: message` line per finding, then a
  /// summary line `N errors, M warnings`.
  std::string to_text() const;
  std::string to_xml() const;
};

/// Structural satisfiability checks over the integrated schema, in order:
/// relation references resolve, paired types agree, equality arities match,
/// derivations are acyclic, and every source table is used somewhere.
/// Problems are reported as findings; nothing is thrown.
SatisfiabilityReport check_schema(const Project& project);

}  // namespace medquery
