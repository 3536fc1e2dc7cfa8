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

#include "medquery/datatype.hpp"

#include <algorithm>
#include <cctype>

#include "medquery/error.hpp"

namespace medquery {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::InvalidDescriptor: return "InvalidDescriptor";
    case ErrorCode::DuplicateName: return "DuplicateName";
    case ErrorCode::UnresolvedFieldRef: return "UnresolvedFieldRef";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::TypeCoercionError: return "TypeCoercionError";
    case ErrorCode::UnknownTable: return "UnknownTable";
    case ErrorCode::UnknownField: return "UnknownField";
    case ErrorCode::SqlParseError: return "SqlParseError";
    case ErrorCode::UnsupportedSql: return "UnsupportedSql";
    case ErrorCode::NoRelationPath: return "NoRelationPath";
    case ErrorCode::MalformedPropertyIri: return "MalformedPropertyIri";
    case ErrorCode::NtParseError: return "NtParseError";
    case ErrorCode::RdqlParseError: return "RdqlParseError";
    case ErrorCode::UnboundSelectVar: return "UnboundSelectVar";
    case ErrorCode::UnboundFilterVar: return "UnboundFilterVar";
  }
  return "Unknown";
}

namespace {

constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

std::string_view strip_leading_zeros(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return digits;
}

struct NumberParts {
  bool negative = false;
  std::string_view integral;
  std::string_view fraction;
  bool has_point = false;
};

std::optional<NumberParts> split_number(std::string_view text) {
  NumberParts parts;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    parts.negative = text.front() == '-';
    text.remove_prefix(1);
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) {
    if (!all_digits(text)) return std::nullopt;
    parts.integral = text;
    return parts;
  }
  parts.has_point = true;
  parts.integral = text.substr(0, dot);
  parts.fraction = text.substr(dot + 1);
  if (parts.integral.empty() && parts.fraction.empty()) return std::nullopt;
  if (!parts.integral.empty() && !all_digits(parts.integral)) return std::nullopt;
  if (!parts.fraction.empty() && !all_digits(parts.fraction)) return std::nullopt;
  return parts;
}

}  // namespace

std::string_view to_string(DataType type) {
  switch (type) {
    case DataType::String: return "string";
    case DataType::Integer: return "integer";
    case DataType::Decimal: return "decimal";
    case DataType::Boolean: return "boolean";
  }
  return "string";
}

std::optional<DataType> parse_data_type(std::string_view name) {
  if (name == "string") return DataType::String;
  if (name == "integer") return DataType::Integer;
  if (name == "decimal") return DataType::Decimal;
  if (name == "boolean") return DataType::Boolean;
  return std::nullopt;
}

std::string xsd_iri(DataType type) { return std::string(kXsd) + std::string(to_string(type)); }

std::optional<DataType> data_type_from_xsd_iri(std::string_view iri) {
  if (!iri.starts_with(kXsd)) return std::nullopt;
  return parse_data_type(iri.substr(kXsd.size()));
}

std::optional<std::string> canonical_lexical(std::string_view text, DataType type) {
  switch (type) {
    case DataType::String:
      return std::string(text);
    case DataType::Boolean:
      if (text == "true" || text == "TRUE" || text == "True" || text == "1") return "true";
      if (text == "false" || text == "FALSE" || text == "False" || text == "0") return "false";
      return std::nullopt;
    case DataType::Integer: {
      auto parts = split_number(text);
      if (!parts || parts->has_point) return std::nullopt;
      std::string digits(strip_leading_zeros(parts->integral));
      if (parts->negative && digits != "0") return "-" + digits;
      return digits;
    }
    case DataType::Decimal: {
      auto value = Decimal::parse(text);
      if (!value) return std::nullopt;
      return value->to_lexical(DataType::Decimal);
    }
  }
  return std::nullopt;
}

Decimal::Decimal(boost::multiprecision::cpp_int unscaled, unsigned scale)
    : unscaled_(std::move(unscaled)), scale_(scale) {
  normalize();
}

std::optional<Decimal> Decimal::parse(std::string_view text) {
  auto parts = split_number(text);
  if (!parts) return std::nullopt;
  std::string digits(parts->integral);
  digits += parts->fraction;
  if (digits.empty()) return std::nullopt;
  boost::multiprecision::cpp_int unscaled(std::string(strip_leading_zeros(digits)));
  if (parts->negative) unscaled = -unscaled;
  return Decimal(std::move(unscaled), static_cast<unsigned>(parts->fraction.size()));
}

void Decimal::normalize() {
  while (scale_ > 0 && unscaled_ % 10 == 0) {
    unscaled_ /= 10;
    --scale_;
  }
  if (unscaled_ == 0) scale_ = 0;
}

namespace {
boost::multiprecision::cpp_int pow10(unsigned n) {
  boost::multiprecision::cpp_int r = 1;
  for (unsigned i = 0; i < n; ++i) r *= 10;
  return r;
}
}  // namespace

Decimal Decimal::operator+(const Decimal& other) const {
  unsigned scale = std::max(scale_, other.scale_);
  auto a = unscaled_ * pow10(scale - scale_);
  auto b = other.unscaled_ * pow10(scale - other.scale_);
  return Decimal(a + b, scale);
}

std::strong_ordering Decimal::operator<=>(const Decimal& other) const {
  unsigned scale = std::max(scale_, other.scale_);
  auto a = unscaled_ * pow10(scale - scale_);
  auto b = other.unscaled_ * pow10(scale - other.scale_);
  if (a < b) return std::strong_ordering::less;
  if (a > b) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool Decimal::is_integral() const { return scale_ == 0; }

std::string Decimal::to_lexical(DataType type) const {
  bool negative = unscaled_ < 0;
  std::string digits = (negative ? -unscaled_ : unscaled_).str();
  if (type == DataType::Integer) {
    std::string out = negative ? "-" : "";
    if (scale_ > 0) digits = digits.substr(0, digits.size() > scale_ ? digits.size() - scale_ : 0);
    if (digits.empty()) digits = "0";
    return (digits == "0") ? digits : out + digits;
  }
  if (digits.size() <= scale_) digits.insert(0, scale_ - digits.size() + 1, '0');
  std::string integral = digits.substr(0, digits.size() - scale_);
  std::string fraction = scale_ ? digits.substr(digits.size() - scale_) : "0";
  return (negative ? "-" : "") + integral + "." + fraction;
}

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "=";
}

CompareOp mirrored(CompareOp op) {
  switch (op) {
    case CompareOp::Lt: return CompareOp::Gt;
    case CompareOp::Le: return CompareOp::Ge;
    case CompareOp::Gt: return CompareOp::Lt;
    case CompareOp::Ge: return CompareOp::Le;
    default: return op;
  }
}

namespace {
template <typename Ordering>
bool holds(Ordering order, CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return order == 0;
    case CompareOp::Ne: return order != 0;
    case CompareOp::Lt: return order < 0;
    case CompareOp::Le: return order <= 0;
    case CompareOp::Gt: return order > 0;
    case CompareOp::Ge: return order >= 0;
  }
  return false;
}
}  // namespace

std::optional<bool> compare_typed(std::string_view lhs, DataType lhs_type, CompareOp op,
                                  std::string_view rhs, DataType rhs_type) {
  if (is_numeric(lhs_type) && is_numeric(rhs_type)) {
    auto a = Decimal::parse(lhs);
    auto b = Decimal::parse(rhs);
    if (!a || !b) return std::nullopt;
    return holds(*a <=> *b, op);
  }
  if (lhs_type != rhs_type) return std::nullopt;
  if (lhs_type == DataType::Boolean) {
    if (op != CompareOp::Eq && op != CompareOp::Ne) return std::nullopt;
    return holds(lhs.compare(rhs) <=> 0, op);
  }
  return holds(lhs.compare(rhs) <=> 0, op);
}

}  // namespace medquery
