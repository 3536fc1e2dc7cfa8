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

#include <optional>
#include <string>
#include <string_view>

namespace medquery {

/// Scheme followed by ':' and no characters N-Triples forbids inside <>.
bool is_absolute_iri(std::string_view iri);

inline constexpr std::string_view kIntegratedBase = "http://integratedDB/";

/// http://integratedDB/T#F
inline std::string property_iri(std::string_view table, std::string_view field) {
  return std::string(kIntegratedBase) + std::string(table) + "#" + std::string(field);
}

/// http://integratedDB/T/row/n
inline std::string row_iri(std::string_view table, std::size_t row) {
  return std::string(kIntegratedBase) + std::string(table) + "/row/" + std::to_string(row);
}

struct PropertyName {
  std::string table;
  std::string field;
};

/// Splits http://integratedDB/T#F; nullopt when the IRI does not follow
/// that scheme.
inline std::optional<PropertyName> parse_property_iri(std::string_view iri) {
  if (!iri.starts_with(kIntegratedBase)) return std::nullopt;
  iri.remove_prefix(kIntegratedBase.size());
  auto hash = iri.find('#');
  if (hash == std::string_view::npos || hash == 0 || hash + 1 == iri.size()) return std::nullopt;
  auto table = iri.substr(0, hash);
  auto field = iri.substr(hash + 1);
  if (table.find_first_of("/#") != std::string_view::npos || field.find('#') != std::string_view::npos)
    return std::nullopt;
  return PropertyName{std::string(table), std::string(field)};
}

}  // namespace medquery
