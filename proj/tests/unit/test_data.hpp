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

#include <filesystem>

#include "medquery/descriptors.hpp"

inline std::filesystem::path test_data(const std::filesystem::path& relative) {
  return std::filesystem::path(MEDQUERY_TEST_DATA) / relative;
}

inline medquery::Project load_fixture(const std::string& dir, const std::string& schema = "schema.xml") {
  return medquery::parse_project(test_data(dir) / "sources.xml", test_data(dir) / schema);
}

/// Asserts that `stmt` throws medquery::Error with `code`.
#define EXPECT_MQ_ERROR(stmt, expected)                                   \
  do {                                                                    \
    try {                                                                 \
      stmt;                                                               \
      ADD_FAILURE() << "no exception from " #stmt;                        \
    } catch (const medquery::Error& e) {                                  \
      EXPECT_EQ(medquery::to_string(e.code()), medquery::to_string(expected)) << e.what(); \
    }                                                                     \
  } while (0)
