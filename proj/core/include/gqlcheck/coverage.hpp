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

#include "gqlcheck/schema.hpp"
#include "gqlcheck/synthesis.hpp"

namespace gqlcheck {

// The coverage unit: a field paired with its containing object type.
struct CoverageTuple {
    std::string object_type;
    std::string field;

    auto operator<=>(const CoverageTuple&) const = default;
};

using TupleSet = std::set<CoverageTuple>;

struct CoverageState {
    TupleSet universe;
    TupleSet covered;
    TupleSet filters;

    // Tuples outside the universe are ignored, which keeps covered a subset
    // of universe by construction.
    void cover(const CoverageTuple& t);
    void cover_all(const TupleSet& ts);
    // |covered| / |universe|; 1.0 on an empty universe.
    double percent() const;
    TupleSet uncovered() const;
    Json to_json() const;
};

// All (object type, field) pairs of the schema, minus filters. Fields of the
// root operation types are included only when include_roots is set; meta
// types and fields never count.
TupleSet schema_tuples(const SchemaModel& schema, const TupleSet& filters = {},
                       bool include_roots = true);

CoverageState make_coverage_state(const SchemaModel& schema, const TupleSet& filters = {},
                                  bool include_roots = true);

// Tuples a query would exercise. Fields selected through an inline fragment
// count under the concrete type.
TupleSet query_tuples(const QueryTree& tree, const SchemaModel& schema,
                      Operation op = Operation::Query);

// Tuples actually delivered by a response: fields present and non-null in
// the `data` payload. Always a subset of query_tuples for the same tree.
TupleSet response_tuples(const Json& payload, const QueryTree& tree, const SchemaModel& schema,
                         Operation op = Operation::Query);

double coverage_percent(const CoverageState& state);

// Union of covered sets; both states must share one universe.
CoverageState merge(const CoverageState& a, const CoverageState& b);

// One "Type.field" per line; '#' starts a comment.
TupleSet load_tuple_filters(const std::string& path);
TupleSet parse_tuple_filters(const std::string& text);

// CSV dump: object_type,field,covered
std::string tuples_csv(const CoverageState& state);

} // namespace gqlcheck
