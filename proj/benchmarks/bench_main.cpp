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

#include <benchmark/benchmark.h>

#include <gqlcheck/coverage.hpp>
#include <gqlcheck/fixture.hpp>
#include <gqlcheck/query_parser.hpp>
#include <gqlcheck/runner.hpp>

using namespace gqlcheck;

namespace {

void BM_ParseIntrospection(benchmark::State& state) {
    const Json& doc = FixtureService::introspection();
    for (auto _ : state) {
        SchemaModel schema = parse_introspection(doc);
        benchmark::DoNotOptimize(schema);
    }
}
BENCHMARK(BM_ParseIntrospection);

void BM_GenerateSerialize(benchmark::State& state) {
    const SchemaModel& schema = FixtureService::schema();
    const GeneratorRegistry registry;
    const int size = static_cast<int>(state.range(0));
    std::uint64_t seed = 0;
    for (auto _ : state) {
        GenContext ctx{Rng(++seed), size, CharsetMode::FullByte, false};
        const FlatQuery flat = generate_flat(schema, {2, 10, size, false}, registry, ctx);
        const auto cleaned = clean_flat(flat.nodes);
        if (cleaned.empty()) {
            continue;
        }
        const std::string text = serialize(build_tree(cleaned), flat.operation);
        benchmark::DoNotOptimize(text);
    }
}
BENCHMARK(BM_GenerateSerialize)->Arg(2)->Arg(10)->Arg(50)->Arg(100);

void BM_QueryTuples(benchmark::State& state) {
    const SchemaModel& schema = FixtureService::schema();
    const GeneratorRegistry registry;
    GenContext ctx{Rng(7), 10, CharsetMode::Alphanumeric, false};
    const FlatQuery flat = generate_flat(schema, {3, 10, 10, false}, registry, ctx);
    const QueryTree tree = build_tree(clean_flat(flat.nodes));
    for (auto _ : state) {
        TupleSet tuples = query_tuples(tree, schema, flat.operation);
        benchmark::DoNotOptimize(tuples);
    }
}
BENCHMARK(BM_QueryTuples);

void BM_ParseQuery(benchmark::State& state) {
    const SchemaModel& schema = FixtureService::schema();
    const GeneratorRegistry registry;
    GenContext ctx{Rng(11), 20, CharsetMode::FullByte, false};
    const FlatQuery flat = generate_flat(schema, {3, 10, 20, false}, registry, ctx);
    const std::string text = serialize(build_tree(clean_flat(flat.nodes)), flat.operation);
    for (auto _ : state) {
        AstDocument doc = parse_query(text);
        benchmark::DoNotOptimize(doc);
    }
}
BENCHMARK(BM_ParseQuery);

void BM_FixtureExecute(benchmark::State& state) {
    FixtureService service;
    const std::string body =
        query_envelope("{projects {name owner {name age} members {name}}}").dump();
    for (auto _ : state) {
        auto reply = service.handle(body);
        benchmark::DoNotOptimize(reply);
    }
}
BENCHMARK(BM_FixtureExecute);

} // namespace

BENCHMARK_MAIN();
