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

#include "gqlcheck/runner.hpp"

#include <algorithm>
#include <mutex>
#include <thread>

#include <httplib.h>

namespace gqlcheck {

namespace {

struct ParsedEndpoint {
    std::string base; // scheme://host[:port]
    std::string path;
};

ParsedEndpoint parse_endpoint(const std::string& endpoint) {
    const auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint must start with http:// or https://: " + endpoint);
    }
    const std::string scheme = endpoint.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") {
        throw ConfigError("unsupported endpoint scheme \"" + scheme + "\"");
    }
    const auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        return {endpoint, "/graphql"};
    }
    return {endpoint.substr(0, path_start), endpoint.substr(path_start)};
}

// Per-test RNG stream: queries depend only on (seed, test index), so the
// generated set is identical for any worker count.
std::uint64_t test_seed(std::uint64_t seed, int test_index, int attempt) {
    return mix_seed(mix_seed(seed, static_cast<std::uint64_t>(test_index)),
                    static_cast<std::uint64_t>(attempt));
}

// Cleaning occasionally leaves nothing (a root object whose drawn fields
// were all objects at the final generation); a bounded number of fresh
// draws keeps one query per test without breaking determinism.
constexpr int kGenerationAttempts = 10;

struct GeneratedQuery {
    FlatQuery flat;
    std::vector<GenNode> cleaned;
    QueryTree tree;
    std::string text;
};

std::optional<GeneratedQuery> generate_query(const SchemaModel& schema,
                                             const GeneratorRegistry& registry,
                                             const RunConfig& cfg, int test_index, int size) {
    for (int attempt = 0; attempt < kGenerationAttempts; ++attempt) {
        GenContext ctx{Rng(test_seed(cfg.seed, test_index, attempt)), size, cfg.charset,
                       cfg.strict};
        SynthesisConfig synth{cfg.max_fields, cfg.max_iterations, size, cfg.include_mutations};
        GeneratedQuery q;
        q.flat = generate_flat(schema, synth, registry, ctx);
        q.cleaned = clean_flat(q.flat.nodes);
        if (q.cleaned.empty()) {
            continue;
        }
        q.tree = build_tree(q.cleaned);
        q.text = serialize(q.tree, q.flat.operation);
        return q;
    }
    return std::nullopt;
}

std::string first_failure_detail(const std::vector<PropertyVerdict>& verdicts,
                                 PropertyId property) {
    for (const auto& v : verdicts) {
        if (v.property == property && !v.passed) {
            return v.detail;
        }
    }
    return {};
}

} // namespace

const char* to_string(PropertyId property) {
    switch (property) {
        case PropertyId::NoServerError: return "no-server-error";
        case PropertyId::SchemaConformance: return "schema-conformance";
        case PropertyId::NoErrorsSection: return "no-errors-section";
    }
    return "?";
}

std::optional<PropertyId> property_from_string(std::string_view name) {
    if (name == "no-server-error") return PropertyId::NoServerError;
    if (name == "schema-conformance") return PropertyId::SchemaConformance;
    if (name == "no-errors-section") return PropertyId::NoErrorsSection;
    return std::nullopt;
}

const std::set<PropertyId>& all_properties() {
    static const std::set<PropertyId> properties = {
        PropertyId::NoServerError,
        PropertyId::SchemaConformance,
        PropertyId::NoErrorsSection,
    };
    return properties;
}

int RunConfig::size_for_test(int index) const {
    if (fixed_size) {
        return std::max(1, *fixed_size);
    }
    if (num_tests <= 0) {
        return 1;
    }
    const long long scaled =
        (static_cast<long long>(index) * max_size + num_tests - 1) / num_tests;
    return std::max(1, static_cast<int>(scaled));
}

Json RunConfig::to_json() const {
    Json properties = Json::array();
    for (const auto& p : enabled_properties) {
        properties.push_back(to_string(p));
    }
    Json filter_list = Json::array();
    for (const auto& t : tuple_filters) {
        filter_list.push_back(Json::array({t.object_type, t.field}));
    }
    return Json{
        {"endpoint", endpoint},
        {"tests", num_tests},
        {"max_size", max_size},
        {"fixed_size", fixed_size ? Json(*fixed_size) : Json(nullptr)},
        {"max_fields", max_fields},
        {"max_iterations", max_iterations},
        {"seed", seed},
        {"include_mutations", include_mutations},
        {"charset", to_string(charset)},
        {"properties", std::move(properties)},
        {"workers", workers},
        {"timeout_ms", timeout.count()},
        {"include_roots", include_roots},
        {"tuple_filters", std::move(filter_list)},
        {"strict", strict},
    };
}

struct HttpExecutor::Impl {
    ParsedEndpoint endpoint;
    httplib::Headers headers;
    httplib::Client client;

    Impl(const RunConfig& cfg)
        : endpoint(parse_endpoint(cfg.endpoint)), client(endpoint.base) {
        for (const auto& [key, value] : cfg.headers) {
            headers.emplace(key, value);
        }
        client.set_connection_timeout(cfg.timeout);
        client.set_read_timeout(cfg.timeout);
        client.set_write_timeout(cfg.timeout);
        client.set_keep_alive(true);
    }
};

HttpExecutor::HttpExecutor(const RunConfig& cfg) : impl_(std::make_unique<Impl>(cfg)) {}
HttpExecutor::~HttpExecutor() = default;
HttpExecutor::HttpExecutor(HttpExecutor&&) noexcept = default;
HttpExecutor& HttpExecutor::operator=(HttpExecutor&&) noexcept = default;

ExecutionResult HttpExecutor::post(const std::string& query_text) {
    ExecutionResult result;
    const std::string body = query_envelope(query_text).dump();
    const auto start = std::chrono::steady_clock::now();
    auto response =
        impl_->client.Post(impl_->endpoint.path, impl_->headers, body, "application/json");
    result.latency = std::chrono::duration_cast<std::chrono::microseconds>(
        std::chrono::steady_clock::now() - start);
    if (!response) {
        result.transport_error = httplib::to_string(response.error());
        return result;
    }
    result.status = response->status;
    Json parsed = Json::parse(response->body, nullptr, false);
    result.body = parsed.is_discarded() ? Json() : std::move(parsed);
    return result;
}

ExecutionResult execute(const std::string& query_text, const RunConfig& cfg) {
    HttpExecutor executor(cfg);
    return executor.post(query_text);
}

ExecutionResult post_graphql(const std::string& endpoint, const std::string& query_text,
                             const std::map<std::string, std::string>& headers,
                             std::chrono::milliseconds timeout) {
    RunConfig cfg;
    cfg.endpoint = endpoint;
    cfg.headers = headers;
    cfg.timeout = timeout;
    return execute(query_text, cfg);
}

std::vector<PropertyVerdict> check_properties(const ExecutionResult& result,
                                              const QueryTree& tree, Operation op,
                                              const ResponseSpecMap& specs,
                                              const SchemaModel& schema,
                                              const std::set<PropertyId>& enabled,
                                              bool strict) {
    std::vector<PropertyVerdict> verdicts;

    if (enabled.count(PropertyId::NoServerError)) {
        PropertyVerdict v{PropertyId::NoServerError, true, "", std::nullopt};
        if (result.transport_error) {
            v.passed = false;
            v.detail = "transport error: " + *result.transport_error;
        } else if (result.status >= 500) {
            v.passed = false;
            v.detail = "HTTP " + std::to_string(result.status);
        }
        verdicts.push_back(std::move(v));
    }

    if (enabled.count(PropertyId::SchemaConformance)) {
        PropertyVerdict v{PropertyId::SchemaConformance, true, "", std::nullopt};
        if (!result.transport_error && result.success()) {
            if (!result.body.is_object()) {
                v.passed = false;
                v.detail = "response body is not a JSON object";
            } else if (!result.body.contains("data")) {
                if (!result.body.contains("errors")) {
                    v.passed = false;
                    v.detail = "response carries neither data nor errors";
                }
            } else {
                ConformanceOptions opts;
                opts.strict_scalars = strict;
                opts.require_requested = strict;
                const auto violations =
                    validate_selection(result.body["data"], tree, op, specs, schema, opts);
                if (!violations.empty()) {
                    v.passed = false;
                    v.detail = violations.front().message;
                    v.path = violations.front().path;
                }
            }
        }
        verdicts.push_back(std::move(v));
    }

    if (enabled.count(PropertyId::NoErrorsSection)) {
        PropertyVerdict v{PropertyId::NoErrorsSection, true, "", std::nullopt};
        if (!result.transport_error && result.success() && result.body.is_object() &&
            result.body.contains("errors") && result.body["errors"].is_array() &&
            !result.body["errors"].empty()) {
            v.passed = false;
            const auto& first = result.body["errors"][0];
            v.detail = "errors section present despite success status";
            if (first.is_object() && first.contains("message") && first["message"].is_string()) {
                v.detail += ": " + first["message"].get<std::string>();
            }
        }
        verdicts.push_back(std::move(v));
    }

    return verdicts;
}

namespace {

// Closes a candidate node set under the parent relation and re-derives the
// executable query; empty candidates are reported as nullopt.
struct ShrinkContext {
    Operation op;
    PropertyId property;
    const Executor& executor;
    const ResponseSpecMap& specs;
    const SchemaModel& schema;
    bool strict;
    int executions = 0;
    bool budget_exhausted = false;

    struct Candidate {
        std::vector<GenNode> cleaned;
        std::string text;
    };

    std::optional<Candidate> realize(const std::vector<GenNode>& nodes) const {
        auto cleaned = clean_flat(nodes);
        if (cleaned.empty()) {
            return std::nullopt;
        }
        QueryTree tree = build_tree(cleaned);
        return Candidate{std::move(cleaned), serialize(tree, op)};
    }

    // True when the candidate still fails the same property.
    bool still_fails(const Candidate& candidate) {
        if (executions >= kShrinkBudget) {
            budget_exhausted = true;
            return false;
        }
        ++executions;
        const ExecutionResult result = executor(candidate.text);
        QueryTree tree = build_tree(candidate.cleaned);
        const auto verdicts =
            check_properties(result, tree, op, specs, schema, {property}, strict);
        return std::any_of(verdicts.begin(), verdicts.end(), [&](const PropertyVerdict& v) {
            return v.property == property && !v.passed;
        });
    }
};

// Removes a node and everything below it.
std::vector<GenNode> without_subtree(const std::vector<GenNode>& nodes, std::size_t index) {
    std::set<int> removed_objects;
    std::vector<bool> keep(nodes.size(), true);
    keep[index] = false;
    if (nodes[index].object_id) {
        removed_objects.insert(*nodes[index].object_id);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (keep[i] && nodes[i].field_id && removed_objects.count(*nodes[i].field_id)) {
                keep[i] = false;
                if (nodes[i].object_id) {
                    removed_objects.insert(*nodes[i].object_id);
                }
                changed = true;
            }
        }
    }
    std::vector<GenNode> out;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (keep[i]) {
            out.push_back(nodes[i]);
        }
    }
    return out;
}

Json minimal_literal(const Json& value) {
    if (as_enum(value)) {
        return value;
    }
    switch (value.type()) {
        case Json::value_t::string: return "";
        case Json::value_t::number_integer:
        case Json::value_t::number_unsigned: return 0;
        case Json::value_t::number_float: return 0.0;
        case Json::value_t::boolean: return false;
        case Json::value_t::array: return Json::array();
        case Json::value_t::object: return Json::object();
        default: return value;
    }
}

} // namespace

ShrinkOutcome shrink(const std::vector<GenNode>& nodes, Operation op, PropertyId property,
                     const Executor& executor, const ResponseSpecMap& specs,
                     const SchemaModel& schema, bool strict) {
    ShrinkContext ctx{op, property, executor, specs, schema, strict};

    std::vector<GenNode> current = clean_flat(nodes);
    bool progress = true;
    while (progress && !ctx.budget_exhausted) {
        progress = false;

        // Phase 1: drop the deepest generation outright.
        while (!ctx.budget_exhausted) {
            int max_generation = 0;
            for (const auto& node : current) {
                max_generation = std::max(max_generation, node.generation);
            }
            if (max_generation == 0) {
                break;
            }
            std::vector<GenNode> truncated;
            for (const auto& node : current) {
                if (node.generation < max_generation) {
                    truncated.push_back(node);
                }
            }
            auto candidate = ctx.realize(truncated);
            if (candidate && ctx.still_fails(*candidate)) {
                current = candidate->cleaned;
                progress = true;
            } else {
                break;
            }
        }

        // Phase 2: drop sibling subtrees one at a time.
        bool removed = true;
        while (removed && !ctx.budget_exhausted) {
            removed = false;
            for (std::size_t i = 0; i < current.size(); ++i) {
                if (!current[i].field_id) {
                    continue; // the root stays
                }
                auto candidate = ctx.realize(without_subtree(current, i));
                if (candidate && ctx.still_fails(*candidate)) {
                    current = candidate->cleaned;
                    removed = true;
                    progress = true;
                    break;
                }
            }
        }

        // Phase 3: shrink argument values toward minimal literals, then try
        // removing optional arguments entirely.
        for (std::size_t i = 0; i < current.size() && !ctx.budget_exhausted; ++i) {
            for (std::size_t a = 0; a < current[i].args.size() && !ctx.budget_exhausted; ++a) {
                const Json minimal = minimal_literal(current[i].args[a].second);
                if (minimal != current[i].args[a].second) {
                    auto attempt = current;
                    attempt[i].args[a].second = minimal;
                    auto candidate = ctx.realize(attempt);
                    if (candidate && ctx.still_fails(*candidate)) {
                        current = candidate->cleaned;
                        progress = true;
                    }
                }
            }
        }
        for (std::size_t i = 0; i < current.size() && !ctx.budget_exhausted; ++i) {
            for (std::size_t a = 0; a < current[i].args.size() && !ctx.budget_exhausted; ++a) {
                const ObjectSpec* parent = nullptr;
                // Argument removal must keep required arguments in place.
                std::string parent_type;
                if (!current[i].field_id) {
                    parent_type = current[i].fragment_on.value_or(
                        op == Operation::Query ? schema.query_root
                                               : schema.mutation_root.value_or(""));
                } else {
                    for (const auto& other : current) {
                        if (other.object_id && *other.object_id == *current[i].field_id) {
                            parent_type = current[i].fragment_on.value_or(other.type_name);
                            break;
                        }
                    }
                }
                parent = schema.find_object(parent_type);
                const FieldSpec* field = parent ? parent->find_field(current[i].name) : nullptr;
                bool required = true;
                if (field) {
                    for (const auto& arg : field->args) {
                        if (arg.name == current[i].args[a].first) {
                            required = arg.required;
                            break;
                        }
                    }
                }
                if (required) {
                    continue;
                }
                auto attempt = current;
                attempt[i].args.erase(attempt[i].args.begin() + static_cast<long>(a));
                auto candidate = ctx.realize(attempt);
                if (candidate && ctx.still_fails(*candidate)) {
                    current = candidate->cleaned;
                    progress = true;
                    --a;
                }
            }
        }
    }

    ShrinkOutcome outcome;
    outcome.nodes = current;
    outcome.text = serialize(build_tree(current), op);
    outcome.executions = ctx.executions;
    outcome.budget_exhausted = ctx.budget_exhausted;
    return outcome;
}

Json QueryRecord::to_json(bool include_latency) const {
    Json verdict_list = Json::array();
    for (const auto& v : verdicts) {
        Json item{{"property", to_string(v.property)}, {"passed", v.passed}};
        if (!v.passed) {
            item["detail"] = v.detail;
            if (v.path) {
                item["path"] = *v.path;
            }
        }
        verdict_list.push_back(std::move(item));
    }
    Json tuple_list = Json::array();
    for (const auto& t : tuples) {
        tuple_list.push_back(Json::array({t.object_type, t.field}));
    }
    return Json{
        {"index", index},
        {"size", size},
        {"operation", to_string(operation)},
        {"query", text},
        {"status", status},
        {"latency_ms", include_latency ? latency_ms : 0.0},
        {"client_error", client_error},
        {"failed", failed},
        {"skipped", skipped},
        {"verdicts", std::move(verdict_list)},
        {"tuples", std::move(tuple_list)},
    };
}

Json FailureRecord::to_json() const {
    return Json{
        {"property", to_string(property)},
        {"query_index", query_index},
        {"original_query", original_text},
        {"shrunk_query", shrunk_text},
        {"original_nodes", original_nodes},
        {"shrunk_nodes", shrunk_nodes},
        {"shrink_executions", shrink_executions},
        {"shrink_budget_exhausted", shrink_budget_exhausted},
        {"detail", detail},
    };
}

Json TestReport::to_json(bool include_latency) const {
    Json query_list = Json::array();
    for (const auto& record : queries) {
        query_list.push_back(record.to_json(include_latency));
    }
    Json failure_list = Json::array();
    for (const auto& failure : failures) {
        failure_list.push_back(failure.to_json());
    }
    return Json{
        {"config", config},
        {"queries", std::move(query_list)},
        {"failures", std::move(failure_list)},
        {"coverage", coverage.to_json()},
        {"counts",
         Json{{"executed", executed},
              {"passed", passed},
              {"failed", failed},
              {"client_errors", client_errors},
              {"skipped", skipped}}},
    };
}

TestReport run_with_executor(const RunConfig& cfg, const SchemaModel& schema,
                             const GeneratorRegistry& registry,
                             const std::function<Executor()>& make_executor) {
    if (cfg.num_tests < 1) {
        throw ConfigError("num_tests must be at least 1");
    }
    // Surface an unusable schema before any execution.
    try {
        if (valid_query_roots(schema, cfg.include_mutations).empty()) {
            throw EmptySchema("schema offers no root fields to generate from");
        }
    } catch (const NoQueryRoot&) {
        throw EmptySchema("schema has no query root");
    }

    const ResponseSpecMap specs = derive_response_specs(schema);

    TestReport report;
    report.config = cfg.to_json();
    report.coverage = make_coverage_state(schema, cfg.tuple_filters, cfg.include_roots);
    report.queries.resize(static_cast<std::size_t>(cfg.num_tests));

    // Retained only for failing tests; shrinking needs the flat list.
    std::vector<std::optional<FlatQuery>> failing_flat(
        static_cast<std::size_t>(cfg.num_tests));

    std::mutex coverage_mutex;
    const int worker_count = std::max(1, std::min(cfg.workers, cfg.num_tests));

    auto work = [&](int worker_index) {
        Executor executor = make_executor();
        for (int index = 1 + worker_index; index <= cfg.num_tests; index += worker_count) {
            QueryRecord& record = report.queries[static_cast<std::size_t>(index - 1)];
            record.index = index;
            record.size = cfg.size_for_test(index);

            auto generated = generate_query(schema, registry, cfg, index, record.size);
            if (!generated) {
                record.skipped = true;
                continue;
            }
            record.operation = generated->flat.operation;
            record.text = generated->text;
            record.tuples = query_tuples(generated->tree, schema, generated->flat.operation);

            const ExecutionResult result = executor(record.text);
            record.status = result.status;
            record.latency_ms =
                static_cast<double>(result.latency.count()) / 1000.0;
            record.client_error = result.client_error();
            record.verdicts = check_properties(result, generated->tree,
                                               generated->flat.operation, specs, schema,
                                               cfg.enabled_properties, cfg.strict);
            record.failed = std::any_of(record.verdicts.begin(), record.verdicts.end(),
                                        [](const PropertyVerdict& v) { return !v.passed; });
            if (record.failed) {
                failing_flat[static_cast<std::size_t>(index - 1)] = generated->flat;
            }
            {
                std::lock_guard<std::mutex> lock(coverage_mutex);
                report.coverage.cover_all(record.tuples);
            }
        }
    };

    if (worker_count == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(static_cast<std::size_t>(worker_count));
        for (int w = 0; w < worker_count; ++w) {
            threads.emplace_back(work, w);
        }
        for (auto& t : threads) {
            t.join();
        }
    }

    for (const auto& record : report.queries) {
        if (record.skipped) {
            ++report.skipped;
            continue;
        }
        ++report.executed;
        if (record.failed) {
            ++report.failed;
        } else if (record.client_error) {
            ++report.client_errors;
        } else {
            ++report.passed;
        }
    }

    // Shrink the first failing query of each property, in property order.
    Executor shrink_executor;
    for (const PropertyId property : all_properties()) {
        if (!cfg.enabled_properties.count(property)) {
            continue;
        }
        const QueryRecord* first_failure = nullptr;
        for (const auto& record : report.queries) {
            const bool failed_this = std::any_of(
                record.verdicts.begin(), record.verdicts.end(),
                [&](const PropertyVerdict& v) { return v.property == property && !v.passed; });
            if (failed_this) {
                first_failure = &record;
                break;
            }
        }
        if (!first_failure) {
            continue;
        }
        if (!shrink_executor) {
            shrink_executor = make_executor();
        }
        const auto& flat = *failing_flat[static_cast<std::size_t>(first_failure->index - 1)];
        ShrinkOutcome outcome = shrink(flat.nodes, flat.operation, property, shrink_executor,
                                       specs, schema, cfg.strict);
        FailureRecord failure;
        failure.property = property;
        failure.query_index = first_failure->index;
        failure.original_text = first_failure->text;
        failure.shrunk_text = outcome.text;
        failure.original_nodes = static_cast<int>(clean_flat(flat.nodes).size());
        failure.shrunk_nodes = static_cast<int>(outcome.nodes.size());
        failure.shrink_executions = outcome.executions;
        failure.shrink_budget_exhausted = outcome.budget_exhausted;
        failure.detail = first_failure_detail(first_failure->verdicts, property);
        report.failures.push_back(std::move(failure));
    }

    return report;
}

TestReport run(const RunConfig& cfg, const SchemaModel& schema,
               const GeneratorRegistry& registry) {
    return run_with_executor(cfg, schema, registry, [&cfg]() -> Executor {
        auto executor = std::make_shared<HttpExecutor>(cfg);
        return [executor](const std::string& query_text) { return executor->post(query_text); };
    });
}

} // namespace gqlcheck
