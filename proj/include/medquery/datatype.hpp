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

#include <compare>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace medquery {

enum class DataType { String, Integer, Decimal, Boolean };

std::string_view to_string(DataType type);
std::optional<DataType> parse_data_type(std::string_view name);
/// XML Schema datatype IRI, e.g. http://www.w3.org/2001/XMLSchema#integer.
std::string xsd_iri(DataType type);
std::optional<DataType> data_type_from_xsd_iri(std::string_view iri);

inline bool is_numeric(DataType type) {
  return type == DataType::Integer || type == DataType::Decimal;
}

/// Brings a lexical form into canonical shape for `type`, or nullopt when
/// the text is not a valid value of that type.
///   integer: optional '-' then digits, no leading zeros
///   decimal: optional '-' digits '.' digits, no redundant zeros
///   boolean: true | false
std::optional<std::string> canonical_lexical(std::string_view text, DataType type);

/// Exact decimal number: unscaled * 10^-scale.
class Decimal {
 public:
  Decimal() = default;

  /// Accepts integer and decimal lexical forms (canonical or not).
  static std::optional<Decimal> parse(std::string_view text);

  Decimal operator+(const Decimal& other) const;
  std::strong_ordering operator<=>(const Decimal& other) const;
  bool operator==(const Decimal& other) const { return (*this <=> other) == 0; }

  bool is_integral() const;
  /// Canonical lexical form for the given numeric type. Integer rendering
  /// requires is_integral().
  std::string to_lexical(DataType type) const;

 private:
  Decimal(boost::multiprecision::cpp_int unscaled, unsigned scale);
  void normalize();

  boost::multiprecision::cpp_int unscaled_ = 0;
  unsigned scale_ = 0;
};

enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };

/// Operator spelling: = != < <= > >=
std::string_view to_string(CompareOp op);
/// Mirror image for swapped operands (a < b  <=>  b > a).
CompareOp mirrored(CompareOp op);

/// Typed value comparison. Numeric types compare by value, strings by code
/// point, booleans support only = and !=. Returns nullopt when the two
/// types cannot be compared.
std::optional<bool> compare_typed(std::string_view lhs, DataType lhs_type, CompareOp op,
                                  std::string_view rhs, DataType rhs_type);

}  // namespace medquery
