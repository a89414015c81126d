// Copyright 2026 The gqlcheck Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <functional>

#include "gqlcheck/coverage.hpp"
#include "gqlcheck/generators.hpp"
#include "gqlcheck/response_spec.hpp"
#include "gqlcheck/synthesis.hpp"

namespace gqlcheck {

enum class PropertyId { NoServerError, SchemaConformance, NoErrorsSection };

const char* to_string(PropertyId property);
std::optional<PropertyId> property_from_string(std::string_view name);
const std::set<PropertyId>& all_properties();

struct RunConfig {
    std::string endpoint;
    int num_tests = 100;
    int max_size = 20;
    // When set, every test runs at this size instead of the linear ramp.
    std::optional<int> fixed_size;
    int max_fields = 2;
    int max_iterations = 10;
    std::uint64_t seed = 0;
    bool include_mutations = false;
    CharsetMode charset = CharsetMode::Alphanumeric;
    std::set<PropertyId> enabled_properties = all_properties();
    std::map<std::string, std::string> headers;
    std::chrono::milliseconds timeout{10000};
    int workers = 1;
    bool include_roots = true;
    TupleSet tuple_filters;
    bool strict = false;

    // Size for the 1-based test index: a linear ramp from 1 to max_size.
    int size_for_test(int index) const;
    Json to_json() const;
};

struct ExecutionResult {
    int status = 0;
    Json body;
    std::chrono::microseconds latency{0};
    std::optional<std::string> transport_error;

    bool server_error() const { return transport_error.has_value() || status >= 500; }
    bool client_error() const { return status >= 400 && status < 500; }
    bool success() const { return status >= 200 && status < 300; }
};

using Executor = std::function<ExecutionResult(const std::string& query_text)>;

// POSTs {"query": ...} envelopes to a GraphQL endpoint with a keep-alive
// connection. One instance per thread.
class HttpExecutor {
public:
    explicit HttpExecutor(const RunConfig& cfg);
    ~HttpExecutor();

    HttpExecutor(HttpExecutor&&) noexcept;
    HttpExecutor& operator=(HttpExecutor&&) noexcept;

    ExecutionResult post(const std::string& query_text);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// One-shot convenience around HttpExecutor.
ExecutionResult execute(const std::string& query_text, const RunConfig& cfg);

// POSTs an arbitrary GraphQL request (used for introspection).
ExecutionResult post_graphql(const std::string& endpoint, const std::string& query_text,
                             const std::map<std::string, std::string>& headers,
                             std::chrono::milliseconds timeout);

struct PropertyVerdict {
    PropertyId property = PropertyId::NoServerError;
    bool passed = true;
    std::string detail;
    std::optional<std::string> path;
};

// Evaluates the enabled properties:
//   NO_SERVER_ERROR    fails on transport errors and HTTP >= 500
//   SCHEMA_CONFORMANCE fails when 2xx data violates the requested selection
//   NO_ERRORS_SECTION  fails when a 2xx body carries a non-empty errors array
// 4xx responses fail none of these; they are counted as client errors.
std::vector<PropertyVerdict> check_properties(const ExecutionResult& result,
                                              const QueryTree& tree, Operation op,
                                              const ResponseSpecMap& specs,
                                              const SchemaModel& schema,
                                              const std::set<PropertyId>& enabled,
                                              bool strict = false);

struct QueryRecord {
    int index = 0;
    int size = 0;
    Operation operation = Operation::Query;
    std::string text;
    int status = 0;
    double latency_ms = 0.0;
    bool client_error = false;
    bool failed = false;
    bool skipped = false;
    std::vector<PropertyVerdict> verdicts;
    TupleSet tuples;

    Json to_json(bool include_latency) const;
};

struct FailureRecord {
    PropertyId property = PropertyId::NoServerError;
    int query_index = 0;
    std::string original_text;
    std::string shrunk_text;
    int original_nodes = 0;
    int shrunk_nodes = 0;
    int shrink_executions = 0;
    bool shrink_budget_exhausted = false;
    std::string detail;

    Json to_json() const;
};

struct TestReport {
    Json config;
    std::vector<QueryRecord> queries;
    std::vector<FailureRecord> failures;
    CoverageState coverage;
    int executed = 0;
    int passed = 0;
    int failed = 0;
    int client_errors = 0;
    int skipped = 0;

    bool all_passed() const { return failed == 0; }
    Json to_json(bool include_latency = true) const;
};

inline constexpr int kShrinkBudget = 200;

struct ShrinkOutcome {
    std::vector<GenNode> nodes;
    std::string text;
    int executions = 0;
    bool budget_exhausted = false;
};

// Greedy minimization of a failing flat list: drop the deepest generation,
// then remove sibling subtrees one at a time, then shrink argument values
// toward ""/0/false, re-executing after each step; a candidate is accepted
// only when the same property still fails. Gives up after kShrinkBudget
// executions and returns the best result so far.
ShrinkOutcome shrink(const std::vector<GenNode>& nodes, Operation op, PropertyId property,
                     const Executor& executor, const ResponseSpecMap& specs,
                     const SchemaModel& schema, bool strict = false);

// The full loop: for each test, generate -> clean -> build -> serialize ->
// execute -> check, accumulating coverage; the first failing query of each
// property is shrunk afterwards. Fully reproducible from (seed, config).
TestReport run(const RunConfig& cfg, const SchemaModel& schema,
               const GeneratorRegistry& registry);

// Same loop with an injectable transport; make_executor is invoked once per
// worker thread.
TestReport run_with_executor(const RunConfig& cfg, const SchemaModel& schema,
                             const GeneratorRegistry& registry,
                             const std::function<Executor()>& make_executor);

} // namespace gqlcheck
