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

#include "gqlcheck/coverage.hpp"

#include <fstream>
#include <sstream>

namespace gqlcheck {

void CoverageState::cover(const CoverageTuple& t) {
    if (universe.count(t)) {
        covered.insert(t);
    }
}

void CoverageState::cover_all(const TupleSet& ts) {
    for (const auto& t : ts) {
        cover(t);
    }
}

double CoverageState::percent() const {
    if (universe.empty()) {
        return 1.0;
    }
    return static_cast<double>(covered.size()) / static_cast<double>(universe.size());
}

TupleSet CoverageState::uncovered() const {
    TupleSet rest;
    for (const auto& t : universe) {
        if (!covered.count(t)) {
            rest.insert(t);
        }
    }
    return rest;
}

Json CoverageState::to_json() const {
    Json uncov = Json::array();
    for (const auto& t : uncovered()) {
        uncov.push_back(Json::array({t.object_type, t.field}));
    }
    return Json{
        {"universe_size", universe.size()},
        {"covered_size", covered.size()},
        {"percent", percent()},
        {"uncovered", std::move(uncov)},
    };
}

TupleSet schema_tuples(const SchemaModel& schema, const TupleSet& filters, bool include_roots) {
    TupleSet tuples;
    for (const auto& [name, object] : schema.objects) {
        if (is_meta_name(name) || object.kind == ObjectKind::Union) {
            continue;
        }
        const bool is_root =
            name == schema.query_root || (schema.mutation_root && name == *schema.mutation_root);
        if (is_root && !include_roots) {
            continue;
        }
        for (const auto& field : object.fields) {
            if (is_meta_name(field.name)) {
                continue;
            }
            CoverageTuple t{name, field.name};
            if (!filters.count(t)) {
                tuples.insert(std::move(t));
            }
        }
    }
    return tuples;
}

CoverageState make_coverage_state(const SchemaModel& schema, const TupleSet& filters,
                                  bool include_roots) {
    CoverageState state;
    state.filters = filters;
    state.universe = schema_tuples(schema, filters, include_roots);
    return state;
}

namespace {

void collect_query_tuples(const QueryTree& node, const std::string& parent_type,
                          const SchemaModel& schema, TupleSet& out) {
    const std::string owner = node.fragment_on.value_or(parent_type);
    if (!is_meta_name(node.name)) {
        out.insert({owner, node.name});
    }
    if (node.children.empty()) {
        return;
    }
    const ObjectSpec* owner_spec = schema.find_object(owner);
    const FieldSpec* field = owner_spec ? owner_spec->find_field(node.name) : nullptr;
    if (!field) {
        throw Error("query field \"" + node.name + "\" is not declared on type " + owner);
    }
    const std::string child_parent = *field->type.named().name;
    for (const auto& child : node.children) {
        collect_query_tuples(child, child_parent, schema, out);
    }
}

void walk_response_value(const Json& value, const QueryTree& node, const std::string& owner,
                         const SchemaModel& schema, TupleSet& out);

// Emits the tuple for a delivered field (present and non-null), then
// descends into its value.
void collect_response_tuples(const Json& value, const QueryTree& node,
                             const std::string& parent_type, const SchemaModel& schema,
                             TupleSet& out) {
    if (value.is_null()) {
        return;
    }
    const std::string owner = node.fragment_on.value_or(parent_type);
    if (!is_meta_name(node.name)) {
        out.insert({owner, node.name});
    }
    walk_response_value(value, node, owner, schema, out);
}

void walk_response_value(const Json& value, const QueryTree& node, const std::string& owner,
                         const SchemaModel& schema, TupleSet& out) {
    if (value.is_array()) {
        for (const auto& item : value) {
            walk_response_value(item, node, owner, schema, out);
        }
        return;
    }
    if (node.children.empty() || !value.is_object()) {
        return;
    }

    std::set<std::string> requested{"__typename"};
    for (const auto& child : node.children) {
        requested.insert(child.name);
    }
    for (const auto& [key, item] : value.items()) {
        if (!requested.count(key)) {
            throw PayloadShapeMismatch("response key \"" + key +
                                       "\" is outside the query selection");
        }
    }

    const ObjectSpec* owner_spec = schema.find_object(owner);
    const FieldSpec* field = owner_spec ? owner_spec->find_field(node.name) : nullptr;
    if (!field) {
        throw Error("query field \"" + node.name + "\" is not declared on type " + owner);
    }
    const std::string child_parent = *field->type.named().name;
    for (const auto& child : node.children) {
        if (value.contains(child.name) && !value[child.name].is_null()) {
            collect_response_tuples(value[child.name], child, child_parent, schema, out);
        }
    }
}

} // namespace

TupleSet query_tuples(const QueryTree& tree, const SchemaModel& schema, Operation op) {
    TupleSet out;
    const std::string root = op == Operation::Query
                                 ? schema.query_root
                                 : schema.mutation_root.value_or(schema.query_root);
    collect_query_tuples(tree, root, schema, out);
    return out;
}

TupleSet response_tuples(const Json& payload, const QueryTree& tree, const SchemaModel& schema,
                         Operation op) {
    TupleSet out;
    if (payload.is_null()) {
        return out;
    }
    if (!payload.is_object()) {
        throw PayloadShapeMismatch("response data is not an object");
    }
    for (const auto& [key, item] : payload.items()) {
        if (key != tree.name) {
            throw PayloadShapeMismatch("response key \"" + key +
                                       "\" is outside the query selection");
        }
    }
    const std::string root = op == Operation::Query
                                 ? schema.query_root
                                 : schema.mutation_root.value_or(schema.query_root);
    if (payload.contains(tree.name) && !payload[tree.name].is_null()) {
        collect_response_tuples(payload[tree.name], tree, root, schema, out);
    }
    return out;
}

double coverage_percent(const CoverageState& state) {
    return state.percent();
}

CoverageState merge(const CoverageState& a, const CoverageState& b) {
    if (a.universe != b.universe) {
        throw UniverseMismatch("cannot merge coverage states with different universes");
    }
    CoverageState out = a;
    out.covered.insert(b.covered.begin(), b.covered.end());
    return out;
}

TupleSet parse_tuple_filters(const std::string& text) {
    TupleSet filters;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        // Trim surrounding whitespace.
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) {
            continue;
        }
        const auto end = line.find_last_not_of(" \t\r");
        line = line.substr(begin, end - begin + 1);
        const auto dot = line.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == line.size()) {
            throw ConfigError("bad tuple filter at line " + std::to_string(line_no) +
                              " (expected Type.field): " + line);
        }
        filters.insert({line.substr(0, dot), line.substr(dot + 1)});
    }
    return filters;
}

TupleSet load_tuple_filters(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open tuple filter file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_tuple_filters(buffer.str());
}

std::string tuples_csv(const CoverageState& state) {
    std::string out = "object_type,field,covered\n";
    for (const auto& t : state.universe) {
        out += t.object_type + "," + t.field + "," +
               (state.covered.count(t) ? "true" : "false") + "\n";
    }
    return out;
}

} // namespace gqlcheck
