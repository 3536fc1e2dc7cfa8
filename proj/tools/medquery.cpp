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

// medquery command-line front end.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "medquery/error.hpp"
#include "medquery/extraction.hpp"
#include "medquery/pipeline.hpp"
#include "medquery/render.hpp"
#include "medquery/schema_check.hpp"
#include "medquery/sql.hpp"
#include "medquery/sql_to_rdql.hpp"

namespace {

using namespace medquery;

enum class LogLevel { Quiet, Info, Debug };

constexpr int kOk = 0;
constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

struct Options {
  std::string command;
  std::string sources;
  std::string schema;
  std::string format = "dot";
  std::string lang = "sql";
  std::string out = "table";
  std::string query;
  std::string query_file;
  std::string table;
  LogLevel log = LogLevel::Info;
};

// Thrown for failures that belong to exit status 2.
struct UsageError {
  std::string message;
};

bool is_input_error(ErrorCode code) {
  return code == ErrorCode::FileNotFound || code == ErrorCode::MalformedXml ||
         code == ErrorCode::InvalidDescriptor || code == ErrorCode::DuplicateName ||
         code == ErrorCode::UnresolvedFieldRef;
}

Project load_project(const Options& opts) {
  try {
    return parse_project(opts.sources, opts.schema);
  } catch (const medquery::Error& e) {
    if (is_input_error(e.code())) throw UsageError{e.what()};
    throw;
  }
}

std::string query_text(const Options& opts) {
  if (!opts.query_file.empty()) {
    std::ifstream in(opts.query_file, std::ios::binary);
    if (!in) throw UsageError{"cannot read query file " + opts.query_file};
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }
  if (opts.query.empty()) throw UsageError{"a query is required (--query or --query-file)"};
  return opts.query;
}

// Commands that act on data need a schema without error findings.
void require_clean(const Project& project) {
  auto report = check_schema(project);
  if (!report.accepted()) {
    std::cerr << report.to_text();
    throw medquery::Error(ErrorCode::InvalidDescriptor, "integrated schema has satisfiability errors");
  }
}

int cmd_validate(const Options& opts) {
  auto report = check_schema(load_project(opts));
  std::cout << report.to_text();
  return report.accepted() ? kOk : kDomainError;
}

int cmd_show_schema(const Options& opts) {
  auto project = load_project(opts);
  require_clean(project);
  std::cout << (opts.format == "xml" ? serialize_schema(project.schema) : schema_to_dot(project));
  return kOk;
}

int cmd_convert(const Options& opts) {
  auto project = load_project(opts);
  auto text = query_text(opts);
  std::cout << convert(parse_sql(text, project.schema), project.schema).text;
  return kOk;
}

int cmd_query(const Options& opts) {
  auto project = load_project(opts);
  auto text = query_text(opts);
  require_clean(project);
  auto start = std::chrono::steady_clock::now();
  auto run = run_query(project, text, opts.lang == "rdql" ? QueryLanguage::Rdql : QueryLanguage::Sql);
  auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  if (opts.log == LogLevel::Debug) {
    std::cerr << "# rdql:\n" << run.rdql_text;
    for (const auto& ref : run.accessed) std::cerr << "# fetched " << ref.source << '.' << ref.table << '\n';
    if (run.results.type_mismatches) std::cerr << "# type mismatches: " << run.results.type_mismatches << '\n';
  }
  if (opts.log != LogLevel::Quiet)
    for (const auto& warning : run.diagnostics.warnings) std::cerr << "warning: " << warning << '\n';
  auto format = opts.out == "xml" ? ResultFormat::Xml : opts.out == "ntriples" ? ResultFormat::NTriples
                                                                               : ResultFormat::Table;
  std::cout << render_results(run.results, format);
  std::cout.flush();
  if (opts.log != LogLevel::Quiet) std::cerr << "# extraction+query time: " << elapsed << " ms\n";
  return kOk;
}

int cmd_extract(const Options& opts) {
  if (opts.table.empty()) throw UsageError{"extract requires --table"};
  auto project = load_project(opts);
  require_clean(project);
  if (!project.schema.find_table(opts.table)) throw medquery::Error(ErrorCode::UnknownTable, opts.table);
  AccessLog log;
  ExtractionDiagnostics diagnostics;
  auto data = materialize(project, {opts.table}, log, {}, &diagnostics);
  if (opts.log != LogLevel::Quiet)
    for (const auto& warning : diagnostics.warnings) std::cerr << "warning: " << warning << '\n';
  if (opts.out == "table")
    std::cout << format_tabular(data.tables.at(opts.table));
  else if (opts.out == "ntriples")
    std::cout << export_ntriples(build_triples(data));
  else
    throw UsageError{"extract supports --out table or ntriples"};
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  Options opts;
  CLI::App app{"Federated query mediator over integrated sources"};
  app.require_subcommand(1);
  auto common = [&](CLI::App* sub) {
    sub->add_option("--sources", opts.sources, "Data source descriptor")->required()->check(CLI::ExistingFile);
    sub->add_option("--schema", opts.schema, "Integrated schema descriptor")->required()->check(CLI::ExistingFile);
  };
  auto query_opts = [&](CLI::App* sub) {
    auto* q = sub->add_option("--query", opts.query, "Query text");
    auto* f = sub->add_option("--query-file", opts.query_file, "File holding the query");
    q->excludes(f);
  };

  auto* validate = app.add_subcommand("validate", "Check the integrated schema");
  common(validate);
  auto* show = app.add_subcommand("show-schema", "Print the integrated schema");
  common(show);
  show->add_option("--format", opts.format)->check(CLI::IsMember({"dot", "xml"}));
  auto* conv = app.add_subcommand("convert", "Translate SQL to RDQL");
  common(conv);
  query_opts(conv);
  auto* query = app.add_subcommand("query", "Answer a query over the sources");
  common(query);
  query_opts(query);
  query->add_option("--lang", opts.lang)->check(CLI::IsMember({"sql", "rdql"}));
  query->add_option("--out", opts.out)->check(CLI::IsMember({"table", "xml", "ntriples"}));
  auto* extract = app.add_subcommand("extract", "Materialize one integrated table");
  common(extract);
  extract->add_option("--table", opts.table, "Integrated table")->required();
  extract->add_option("--out", opts.out)->check(CLI::IsMember({"table", "ntriples"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int status = app.exit(e);
    return status == 0 ? kOk : kUsageError;
  }

  if (const char* level = std::getenv("MEDQUERY_LOG")) {
    std::string value = level;
    if (value == "quiet") opts.log = LogLevel::Quiet;
    else if (value == "debug") opts.log = LogLevel::Debug;
    else if (value == "info") opts.log = LogLevel::Info;
  }

  try {
    if (validate->parsed()) return cmd_validate(opts);
    if (show->parsed()) return cmd_show_schema(opts);
    if (conv->parsed()) return cmd_convert(opts);
    if (query->parsed()) return cmd_query(opts);
    return cmd_extract(opts);
  } catch (const UsageError& e) {
    std::cerr << "medquery: " << e.message << '\n';
    return kUsageError;
  } catch (const medquery::Error& e) {
    if (e.code() == ErrorCode::UnsupportedSql)
      std::cerr << "unsupported: " << e.detail() << '\n';
    else
      std::cerr << "medquery: " << e.what() << '\n';
    return kDomainError;
  }
}
