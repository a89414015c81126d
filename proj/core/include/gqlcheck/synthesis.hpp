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

#include "gqlcheck/generators.hpp"
#include "gqlcheck/schema.hpp"

namespace gqlcheck {

enum class NodeKind { Object, Scalar, Enum };

const char* to_string(NodeKind kind);

// Argument lists keep generation order, which is the declaration order of
// the schema.
using ArgList = std::vector<std::pair<std::string, Json>>;

// One node of the flat generation list. Object nodes get a unique
// object_id; every non-root node points at its containing object through
// field_id. generation marks the iteration that produced the node.
struct GenNode {
    std::string name;
    NodeKind kind = NodeKind::Scalar;
    std::string type_name;
    std::optional<int> object_id;
    std::optional<int> field_id;
    int generation = 0;
    ArgList args;
    // Concrete type to select behind an interface/union parent.
    std::optional<std::string> fragment_on;
};

struct QueryTree {
    std::string name;
    ArgList args;
    std::optional<std::string> fragment_on;
    std::vector<QueryTree> children;

    std::size_t node_count() const;
};

struct SynthesisConfig {
    int max_fields = 2;
    int max_iterations = 10;
    int size = 10;
    bool include_mutations = false;
};

struct FlatQuery {
    Operation operation = Operation::Query;
    std::vector<GenNode> nodes;
};

// Iteration-based generation: one uniformly drawn root, then
// min(size, max_iterations) expansion rounds; each round expands every
// object node of the previous generation by 1..max_fields distinct fields.
FlatQuery generate_flat(const SchemaModel& schema, const SynthesisConfig& cfg,
                        const GeneratorRegistry& registry, GenContext& ctx);

// Removes object nodes without any children, repeatedly, until none remain
// (an object must carry a field selection to be a valid query). Returns the
// empty list when the root itself ends up childless.
std::vector<GenNode> clean_flat(const std::vector<GenNode>& nodes);

// Folds a cleaned, non-empty flat list into a tree along the
// object_id/field_id relation. Children keep flat-list order.
QueryTree build_tree(const std::vector<GenNode>& nodes);

// Renders executable GraphQL query text with nested selection sets, inline
// argument literals and inline fragments.
std::string serialize(const QueryTree& tree, Operation op = Operation::Query);

// Renders one JSON value as a GraphQL literal (enum-tagged values are
// emitted bare).
std::string graphql_literal(const Json& value);

// {"query": "<text>"} — the standard HTTP request envelope.
Json query_envelope(const std::string& query_text);

} // namespace gqlcheck
