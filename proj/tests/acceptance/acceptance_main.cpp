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

// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>

#include <gqlcheck/coverage.hpp>
#include <gqlcheck/fixture.hpp>
#include <gqlcheck/query_parser.hpp>
#include <gqlcheck/runner.hpp>

#include "support/flat_list_gen.hpp"
#include "support/grammar_oracle.hpp"
#include "support/test_schemas.hpp"

using namespace gqlcheck;
using Clock = std::chrono::steady_clock;

namespace {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
};

std::string percent_str(double p) {
    std::ostringstream out;
    out.precision(2);
    out << std::fixed << p * 100.0 << "%";
    return out.str();
}

// Shared generation helper: one query for (seed, index), no retries.
std::optional<std::pair<FlatQuery, QueryTree>> generate_one(const SchemaModel& schema,
                                                            const GeneratorRegistry& registry,
                                                            std::uint64_t seed, int index,
                                                            int size, int max_fields,
                                                            bool include_mutations,
                                                            CharsetMode charset) {
    GenContext ctx{Rng(mix_seed(seed, static_cast<std::uint64_t>(index))), size, charset,
                   false};
    SynthesisConfig cfg{max_fields, 10, size, include_mutations};
    FlatQuery flat = generate_flat(schema, cfg, registry, ctx);
    auto cleaned = clean_flat(flat.nodes);
    if (cleaned.empty()) {
        return std::nullopt;
    }
    QueryTree tree = build_tree(cleaned);
    flat.nodes = std::move(cleaned);
    return std::make_pair(std::move(flat), std::move(tree));
}

// ---------------------------------------------------------------------
// Criterion 1: seeded-fault reproduction, exactly 11 of 15 found.
// ---------------------------------------------------------------------

struct FaultRunOutcome {
    bool detected = false;
    std::map<PropertyId, int> shrunk_nodes; // per detecting property
};

CriterionResult criterion_fault_matrix(std::map<FaultId, FaultRunOutcome>& outcomes) {
    CriterionResult result{1, "seeded-fault reproduction (11/15)"};
    const auto start = Clock::now();

    const std::set<FaultId> expected_detected = {
        FaultId::InputValidation1, FaultId::InputValidation2, FaultId::InputValidation3,
        FaultId::LogicProject,     FaultId::LogicUser,        FaultId::LogicOwner,
        FaultId::LogicMembers,     FaultId::WrongTypeProject, FaultId::WrongTypeUser,
        FaultId::WrongTypeOwner,   FaultId::WrongTypeMembers,
    };

    const GeneratorRegistry registry = dataset_generator_recipe(FixtureDataset::standard());
    const SchemaModel& schema = FixtureService::schema();

    std::string mismatches;
    int fault_index = 0;
    for (const FaultId fault : all_faults()) {
        ++fault_index;
        FixtureServer server{FixtureService({fault})};
        if (!server.start(0)) {
            result.detail = "could not start fixture server";
            return result;
        }
        RunConfig cfg;
        cfg.endpoint = server.endpoint();
        cfg.num_tests = 2000;
        cfg.max_size = 50;
        cfg.max_fields = 2;
        cfg.charset = CharsetMode::FullByte;
        cfg.seed = 20000 + static_cast<std::uint64_t>(fault_index);
        cfg.workers = 4;
        cfg.timeout = std::chrono::milliseconds(5000);

        const TestReport report = run(cfg, schema, registry);
        server.stop();

        FaultRunOutcome outcome;
        outcome.detected = report.failed > 0;
        for (const auto& failure : report.failures) {
            outcome.shrunk_nodes[failure.property] = failure.shrunk_nodes;
        }
        outcomes[fault] = outcome;

        const bool should_detect = expected_detected.count(fault) > 0;
        if (outcome.detected != should_detect) {
            mismatches += std::string(" ") + to_string(fault) +
                          (outcome.detected ? " (unexpectedly detected)" : " (missed)");
        }
    }

    const double elapsed =
        std::chrono::duration_cast<std::chrono::duration<double>>(Clock::now() - start)
            .count();
    int detected_count = 0;
    for (const auto& [fault, outcome] : outcomes) {
        detected_count += outcome.detected;
    }

    std::ostringstream detail;
    detail << detected_count << "/15 detected in " << static_cast<int>(elapsed) << "s";
    if (!mismatches.empty()) {
        detail << "; mismatches:" << mismatches;
    }
    result.detail = detail.str();
    result.passed = mismatches.empty() && detected_count == 11 && elapsed < 300.0;
    if (elapsed >= 300.0) {
        result.detail += " (over the 5 minute budget)";
    }
    return result;
}

// ---------------------------------------------------------------------
// Criteria 2 and 6: coverage saturation and incremental-vs-recount.
// ---------------------------------------------------------------------

struct CoverageOutcome {
    CriterionResult saturation{2, "coverage saturation and max-fields monotonicity"};
    CriterionResult oracle_equivalence{6, "incremental coverage equals recount"};
};

CoverageOutcome criterion_coverage() {
    CoverageOutcome out;
    const SchemaModel& schema = FixtureService::schema();
    const GeneratorRegistry registry; // built-ins only; query-based coverage

    // Aggregated coverage over repeated 1000-query runs at fixed size 10.
    CoverageState aggregate = make_coverage_state(schema, {}, true);
    bool recount_ok = true;
    int runs_used = 0;
    for (int run_index = 1; run_index <= 30 && aggregate.percent() < 1.0; ++run_index) {
        ++runs_used;
        CoverageState incremental = make_coverage_state(schema, {}, true);
        std::vector<TupleSet> log;
        for (int i = 1; i <= 1000; ++i) {
            const auto generated =
                generate_one(schema, registry, 300 + static_cast<std::uint64_t>(run_index), i,
                             10, 2, true, CharsetMode::Alphanumeric);
            if (!generated) {
                continue;
            }
            const TupleSet tuples =
                query_tuples(generated->second, schema, generated->first.operation);
            incremental.cover_all(tuples);
            log.push_back(tuples);
        }
        CoverageState recount = make_coverage_state(schema, {}, true);
        for (const auto& tuples : log) {
            recount.cover_all(tuples);
        }
        recount_ok = recount_ok && incremental.covered == recount.covered;
        aggregate = merge(aggregate, incremental);
    }
    const bool saturated = aggregate.percent() == 1.0;

    // Single-run average coverage, strictly increasing in max_fields. The
    // per-run budget is small enough that no configuration saturates.
    std::map<int, double> average;
    for (const int max_fields : {1, 2, 3}) {
        double total = 0.0;
        for (const std::uint64_t seed : {11ull, 12ull, 13ull}) {
            CoverageState state = make_coverage_state(schema, {}, true);
            for (int i = 1; i <= 8; ++i) {
                const auto generated = generate_one(schema, registry, seed, i, 10, max_fields,
                                                    true, CharsetMode::Alphanumeric);
                if (generated) {
                    state.cover_all(
                        query_tuples(generated->second, schema, generated->first.operation));
                }
            }
            total += state.percent();
        }
        average[max_fields] = total / 3.0;
    }
    const bool monotone = average[1] < average[2] && average[2] < average[3];

    std::ostringstream detail;
    detail << "aggregate " << percent_str(aggregate.percent()) << " after " << runs_used
           << " runs; single-run averages " << percent_str(average[1]) << " / "
           << percent_str(average[2]) << " / " << percent_str(average[3])
           << " for max-fields 1/2/3";
    out.saturation.detail = detail.str();
    out.saturation.passed = saturated && runs_used <= 30 && monotone;

    out.oracle_equivalence.detail =
        recount_ok ? "exact covered-set equality on every run" : "incremental/recount mismatch";
    out.oracle_equivalence.passed = recount_ok;
    return out;
}

// ---------------------------------------------------------------------
// Criterion 3: runs to full aggregate coverage shrink as max-fields grows.
// ---------------------------------------------------------------------

CriterionResult criterion_runs_to_full() {
    CriterionResult result{3, "runs-to-100% decreases with max-fields"};
    const SchemaModel& schema = FixtureService::schema();
    const GeneratorRegistry registry;
    constexpr int kQueriesPerRun = 10;
    constexpr int kSize = 5;
    constexpr int kRunCap = 500;

    std::map<int, double> mean_runs;
    for (const int max_fields : {1, 2, 3}) {
        double total = 0.0;
        for (std::uint64_t seed = 900; seed < 910; ++seed) {
            CoverageState aggregate = make_coverage_state(schema, {}, true);
            int runs = 0;
            while (aggregate.percent() < 1.0 && runs < kRunCap) {
                ++runs;
                for (int i = 1; i <= kQueriesPerRun; ++i) {
                    const auto generated = generate_one(
                        schema, registry, mix_seed(seed, static_cast<std::uint64_t>(runs)), i,
                        kSize, max_fields, true, CharsetMode::Alphanumeric);
                    if (generated) {
                        aggregate.cover_all(
                            query_tuples(generated->second, schema, generated->first.operation));
                    }
                }
            }
            total += runs;
        }
        mean_runs[max_fields] = total / 10.0;
    }

    std::ostringstream table;
    table << "mean runs to 100% (10 queries/run, size 5): ";
    table << "max-fields 1: " << mean_runs[1] << ", 2: " << mean_runs[2]
          << ", 3: " << mean_runs[3];
    result.detail = table.str();
    result.passed = mean_runs[1] > mean_runs[2] && mean_runs[2] > mean_runs[3];
    return result;
}

// ---------------------------------------------------------------------
// Criterion 4: 10,000 generated queries all parse under the oracle.
// ---------------------------------------------------------------------

CriterionResult criterion_grammar() {
    CriterionResult result{4, "10,000 serialized queries parse under the grammar oracle"};
    const SchemaModel fixture = FixtureService::schema();
    const SchemaModel rich = testsupport::rich_schema();
    const GeneratorRegistry registry;

    int produced = 0;
    int failures = 0;
    std::string first_error;
    std::uint64_t seed = 0;
    while (produced < 10000) {
        ++seed;
        const SchemaModel& schema = seed % 2 ? rich : fixture;
        const int size = 1 + static_cast<int>(seed % 100);
        const CharsetMode charset =
            seed % 4 < 2 ? CharsetMode::FullByte : CharsetMode::Alphanumeric;
        const auto generated =
            generate_one(schema, registry, 5000, static_cast<int>(seed), size, 3, true, charset);
        if (!generated) {
            continue;
        }
        ++produced;
        const std::string text = serialize(generated->second, generated->first.operation);
        std::string error;
        if (!grammar_oracle::valid_query(text, &error)) {
            ++failures;
            if (first_error.empty()) {
                first_error = error;
            }
        }
    }
    std::ostringstream detail;
    detail << produced << " queries, " << failures << " grammar failures";
    if (failures > 0) {
        detail << " (first: " << first_error << ")";
    }
    result.detail = detail.str();
    result.passed = failures == 0;
    return result;
}

// ---------------------------------------------------------------------
// Criterion 5: cleaning soundness and tree join over 10,000 flat lists.
// ---------------------------------------------------------------------

CriterionResult criterion_cleaning() {
    CriterionResult result{5, "cleaning soundness and id-join tree building"};
    const SchemaModel& fixture = FixtureService::schema();
    const GeneratorRegistry registry;

    Rng list_rng(777);
    int checked = 0;
    for (int iteration = 0; iteration < 10000; ++iteration) {
        std::vector<GenNode> nodes;
        if (iteration % 2 == 0) {
            nodes = testsupport::random_flat_list(list_rng);
        } else {
            GenContext ctx{Rng(mix_seed(606, static_cast<std::uint64_t>(iteration))),
                           1 + iteration % 12, CharsetMode::Alphanumeric, false};
            nodes = generate_flat(fixture, {3, 6, 1 + iteration % 12, true}, registry, ctx)
                        .nodes;
        }
        const auto cleaned = clean_flat(nodes);
        for (const auto& node : cleaned) {
            if (node.kind != NodeKind::Object) {
                continue;
            }
            bool has_child = false;
            for (const auto& other : cleaned) {
                has_child =
                    has_child || (other.field_id && *other.field_id == *node.object_id);
            }
            if (!has_child) {
                result.detail = "childless object survived cleaning";
                return result;
            }
        }
        if (cleaned.empty()) {
            continue;
        }
        const QueryTree tree = build_tree(cleaned);
        // Brute-force (object_id, field_id) join, compared as edge
        // multisets of (parent name, child name).
        std::multiset<std::pair<std::string, std::string>> expected_edges;
        for (const auto& child : cleaned) {
            if (!child.field_id) {
                continue;
            }
            for (const auto& parent : cleaned) {
                if (parent.object_id && *parent.object_id == *child.field_id) {
                    expected_edges.insert({parent.name, child.name});
                }
            }
        }
        std::multiset<std::pair<std::string, std::string>> actual_edges;
        auto edge_walk = [&](auto&& self, const QueryTree& node) -> void {
            for (const auto& child : node.children) {
                actual_edges.insert({node.name, child.name});
                self(self, child);
            }
        };
        edge_walk(edge_walk, tree);
        if (actual_edges != expected_edges || tree.node_count() != cleaned.size()) {
            result.detail = "tree edges diverge from the (object_id, field_id) join";
            return result;
        }
        ++checked;
    }
    result.detail = std::to_string(checked) + " non-empty lists verified";
    result.passed = true;
    return result;
}

// ---------------------------------------------------------------------
// Criterion 7: byte-identical reports for identical seeds.
// ---------------------------------------------------------------------

CriterionResult criterion_determinism() {
    CriterionResult result{7, "identical seeds give byte-identical reports"};
    FixtureServer server{FixtureService()};
    if (!server.start(0)) {
        result.detail = "could not start fixture server";
        return result;
    }
    RunConfig cfg;
    cfg.endpoint = server.endpoint();
    cfg.num_tests = 200;
    cfg.max_size = 30;
    cfg.max_fields = 2;
    cfg.charset = CharsetMode::FullByte;
    cfg.seed = 424242;
    cfg.workers = 3;
    const GeneratorRegistry registry = dataset_generator_recipe(FixtureDataset::standard());
    const SchemaModel& schema = FixtureService::schema();

    const TestReport a = run(cfg, schema, registry);
    const TestReport b = run(cfg, schema, registry);
    server.stop();

    const std::string dump_a = a.to_json(false).dump();
    const std::string dump_b = b.to_json(false).dump();
    bool logs_equal = a.queries.size() == b.queries.size();
    for (std::size_t i = 0; logs_equal && i < a.queries.size(); ++i) {
        logs_equal = a.queries[i].text == b.queries[i].text;
    }
    result.passed = dump_a == dump_b && logs_equal;
    result.detail = result.passed ? "200-test reports identical (latency masked)"
                                  : "reports diverged";
    return result;
}

// ---------------------------------------------------------------------
// Criterion 8: shrunk repros are as small as an exhaustive search finds.
// ---------------------------------------------------------------------

std::vector<QueryTree> enumerate_selections(const SchemaModel& schema, const std::string& type,
                                            int budget);

// All renderings of one field within the node budget (budget counts the
// field node itself).
std::vector<QueryTree> enumerate_field(const SchemaModel& schema, const FieldSpec& field,
                                       int budget) {
    std::vector<QueryTree> out;
    if (budget < 1) {
        return out;
    }
    const TypeKind kind = field.type.named().kind;
    std::vector<Json> id_pool;
    for (const auto& arg : field.args) {
        if (arg.required) {
            id_pool = {Json(""), Json("1"), Json("zz"), Json("a!b"),
                       Json(std::string(kOverlongIdLength + 1, 'a'))};
            break;
        }
    }
    auto with_args = [&](QueryTree tree) {
        if (id_pool.empty()) {
            out.push_back(std::move(tree));
            return;
        }
        for (const auto& value : id_pool) {
            QueryTree variant = tree;
            variant.args.emplace_back(field.args.front().name, value);
            out.push_back(std::move(variant));
        }
    };
    if (kind == TypeKind::Scalar || kind == TypeKind::Enum) {
        QueryTree leaf;
        leaf.name = field.name;
        with_args(std::move(leaf));
        return out;
    }
    for (auto& selection : enumerate_selections(schema, *field.type.named().name, budget - 1)) {
        QueryTree node;
        node.name = field.name;
        node.children = selection.children;
        with_args(std::move(node));
    }
    return out;
}

// Non-empty child selections for an object type within the budget, returned
// as anonymous carrier nodes.
std::vector<QueryTree> enumerate_selections(const SchemaModel& schema, const std::string& type,
                                            int budget) {
    std::vector<QueryTree> out;
    if (budget < 1) {
        return out;
    }
    const ObjectSpec* object = schema.find_object(type);
    if (!object) {
        return out;
    }
    // Combinations over the field list: for each field either skip it or
    // include one of its renderings.
    std::vector<QueryTree> partial{QueryTree{}};
    for (const auto& field : object->fields) {
        std::vector<QueryTree> next;
        for (const auto& base : partial) {
            next.push_back(base); // skip
            const int used = static_cast<int>(base.node_count()) - 1;
            for (auto& rendering : enumerate_field(schema, field, budget - used)) {
                QueryTree grown = base;
                grown.children.push_back(rendering);
                if (static_cast<int>(grown.node_count()) - 1 <= budget) {
                    next.push_back(std::move(grown));
                }
            }
        }
        partial = std::move(next);
    }
    for (auto& candidate : partial) {
        if (!candidate.children.empty()) {
            out.push_back(std::move(candidate));
        }
    }
    return out;
}

CriterionResult criterion_shrinking(const std::map<FaultId, FaultRunOutcome>& outcomes) {
    CriterionResult result{8, "shrunk repros match exhaustive minimal failures"};
    const SchemaModel& schema = FixtureService::schema();
    const ResponseSpecMap specs = derive_response_specs(schema);

    // Enumerate root-level queries of at most 6 nodes once.
    std::vector<std::pair<QueryTree, std::string>> candidates;
    const ObjectSpec* query_root = schema.find_object(schema.query_root);
    for (const auto& field : query_root->fields) {
        for (auto& tree : enumerate_field(schema, field, 6)) {
            candidates.emplace_back(tree, serialize(tree, Operation::Query));
        }
    }

    std::ostringstream detail;
    bool all_ok = true;
    for (const auto& [fault, outcome] : outcomes) {
        if (!outcome.detected) {
            continue;
        }
        FixtureService service({fault});
        int oracle_min = 0;
        for (const auto& [tree, text] : candidates) {
            const auto reply = service.handle(query_envelope(text).dump());
            ExecutionResult exec_result;
            exec_result.status = reply.status;
            exec_result.body = reply.body;
            const auto verdicts = check_properties(exec_result, tree, Operation::Query, specs,
                                                   schema, all_properties());
            const bool failed = std::any_of(verdicts.begin(), verdicts.end(),
                                            [](const PropertyVerdict& v) { return !v.passed; });
            if (failed) {
                const int nodes = static_cast<int>(tree.node_count());
                oracle_min = oracle_min == 0 ? nodes : std::min(oracle_min, nodes);
            }
        }
        int shrunk_min = 0;
        for (const auto& [property, nodes] : outcome.shrunk_nodes) {
            shrunk_min = shrunk_min == 0 ? nodes : std::min(shrunk_min, nodes);
        }
        if (oracle_min == 0 || shrunk_min == 0 || shrunk_min > oracle_min) {
            all_ok = false;
            detail << " " << to_string(fault) << " (shrunk " << shrunk_min << " vs oracle "
                   << oracle_min << ")";
        }
    }
    result.passed = all_ok;
    result.detail = all_ok ? std::to_string(candidates.size()) +
                                 " candidate queries enumerated; all shrunk repros minimal"
                           : "non-minimal shrinks:" + detail.str();
    return result;
}

// ---------------------------------------------------------------------
// Criterion 9: conformance golden corpus.
// ---------------------------------------------------------------------

CriterionResult criterion_conformance_corpus() {
    CriterionResult result{9, "conformance verdicts on the 50-case golden corpus"};
    const SchemaModel schema = testsupport::person_pet_schema();
    const ResponseSpecMap specs = derive_response_specs(schema);
    const QueryTree tree = ast_to_tree(
        parse_query("{person {name age pet {name}}}").roots[0]);

    Rng rng(314159);
    int correct = 0;
    int total = 0;

    auto build_valid = [&](bool all_present) {
        Json pet = Json{{"name", "pet" + std::to_string(rng.below(100))}};
        Json person = Json::object();
        person["name"] = "person" + std::to_string(rng.below(100));
        if (all_present || rng.chance(0.7)) {
            person["age"] = static_cast<std::int64_t>(rng.below(90));
        }
        if (all_present || rng.chance(0.7)) {
            person["pet"] = rng.chance(0.2) && !all_present ? Json(nullptr) : pet;
        }
        return Json{{"person", person}};
    };

    // 25 conformant payloads.
    for (int i = 0; i < 25; ++i) {
        ++total;
        const Json payload = build_valid(false);
        const auto violations =
            validate_selection(payload, tree, Operation::Query, specs, schema);
        correct += violations.empty();
    }

    // 25 payloads with one wrong-typed leaf; the violation must name the
    // mutated path exactly.
    const std::vector<std::pair<std::vector<std::string>, Json>> mutations = {
        {{"person", "name"}, Json(42)},
        {{"person", "age"}, Json("old")},
        {{"person", "pet", "name"}, Json(true)},
    };
    for (int i = 0; i < 25; ++i) {
        ++total;
        Json payload = build_valid(true);
        const auto& [path, wrong_value] = mutations[rng.below(mutations.size())];
        Json* cursor = &payload;
        for (const auto& key : path) {
            cursor = &(*cursor)[key];
        }
        *cursor = wrong_value;
        std::string expected_path = "data";
        for (const auto& key : path) {
            expected_path += "." + key;
        }
        const auto violations =
            validate_selection(payload, tree, Operation::Query, specs, schema);
        correct += !violations.empty() && violations.front().path == expected_path;
    }

    result.detail = std::to_string(correct) + "/" + std::to_string(total) + " verdicts correct";
    result.passed = correct == total;
    return result;
}

} // namespace

int main() {
    std::vector<CriterionResult> results;

    std::map<FaultId, FaultRunOutcome> fault_outcomes;
    results.push_back(criterion_fault_matrix(fault_outcomes));

    CoverageOutcome coverage = criterion_coverage();
    results.push_back(coverage.saturation);
    results.push_back(criterion_runs_to_full());
    results.push_back(criterion_grammar());
    results.push_back(criterion_cleaning());
    results.push_back(coverage.oracle_equivalence);
    results.push_back(criterion_determinism());
    results.push_back(criterion_shrinking(fault_outcomes));
    results.push_back(criterion_conformance_corpus());

    std::sort(results.begin(), results.end(),
              [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });

    int failures = 0;
    for (const auto& result : results) {
        failures += !result.passed;
        std::cout << (result.passed ? "[PASS]" : "[FAIL]") << " criterion " << result.id
                  << ": " << result.name << " — " << result.detail << "\n";
    }
    std::cout << (failures == 0 ? "all criteria passed"
                                : std::to_string(failures) + " criteria failed")
              << "\n";
    return failures == 0 ? 0 : 1;
}
