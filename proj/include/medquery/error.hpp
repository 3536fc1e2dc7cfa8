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

#include <stdexcept>
#include <string>
#include <string_view>

namespace medquery {

/// Classification of every failure the library reports. One error, one code.
enum class ErrorCode {
  FileNotFound,
  MalformedXml,
  InvalidDescriptor,
  DuplicateName,
  UnresolvedFieldRef,
  IoError,
  TypeCoercionError,
  UnknownTable,
  UnknownField,
  SqlParseError,
  UnsupportedSql,
  NoRelationPath,
  MalformedPropertyIri,
  NtParseError,
  RdqlParseError,
  UnboundSelectVar,
  UnboundFilterVar,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace medquery
