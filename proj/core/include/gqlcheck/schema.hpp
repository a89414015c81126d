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

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gqlcheck/errors.hpp"

namespace gqlcheck {

using Json = nlohmann::json;

enum class TypeKind {
    Scalar,
    Object,
    Enum,
    InputObject,
    Interface,
    Union,
    List,
    NonNull,
};

enum class Operation { Query, Mutation };

const char* to_string(TypeKind kind);
const char* to_string(Operation op);

// A possibly wrapped reference to a named type. LIST and NON_NULL carry
// of_type and no name; every other kind carries a name and no of_type.
struct TypeRef {
    TypeKind kind = TypeKind::Scalar;
    std::optional<std::string> name;
    std::shared_ptr<const TypeRef> of_type;

    // Strips LIST/NON_NULL wrappers down to the named type.
    const TypeRef& named() const;
    bool non_null() const { return kind == TypeKind::NonNull; }
    // True when the type, ignoring an outer NON_NULL, is a list.
    bool is_list() const;

    static TypeRef make_named(TypeKind kind, std::string name);
    static TypeRef list_of(TypeRef inner);
    static TypeRef non_null_of(TypeRef inner);
};

bool operator==(const TypeRef& a, const TypeRef& b);
inline bool operator!=(const TypeRef& a, const TypeRef& b) { return !(a == b); }

struct ArgSpec {
    std::string name;
    TypeRef type;
    bool required = false; // outermost NON_NULL
    bool default_present = false;
};

struct FieldSpec {
    std::string name;
    TypeRef type;
    std::vector<ArgSpec> args;
};

enum class ObjectKind { Object, Interface, Union };

struct ObjectSpec {
    std::string name;
    ObjectKind kind = ObjectKind::Object;
    std::vector<FieldSpec> fields;
    std::vector<std::string> possible_types; // INTERFACE/UNION only

    const FieldSpec* find_field(std::string_view field_name) const;
};

// Typed view of a GraphQL schema, immutable once built. All containers are
// ordered so that iteration, and everything derived from it, is
// deterministic.
struct SchemaModel {
    std::string query_root;
    std::optional<std::string> mutation_root;
    std::map<std::string, ObjectSpec> objects; // OBJECT, INTERFACE and UNION
    std::set<std::string> scalars;
    std::map<std::string, std::vector<std::string>> enums;
    std::map<std::string, std::vector<ArgSpec>> input_objects;

    const ObjectSpec* find_object(std::string_view type_name) const;
    bool has_type(std::string_view type_name) const;

    // Checks reference-graph closure and basic shape rules; throws
    // DanglingTypeReference or MalformedIntrospection.
    void validate() const;
};

bool is_builtin_scalar(std::string_view name);

// Introspection meta types and fields use the reserved "__" prefix.
bool is_meta_name(std::string_view name);

// Accepts the standard introspection result shape: either the full HTTP
// body ({"data": {"__schema": ...}}) or the bare {"__schema": ...} object.
SchemaModel parse_introspection(const Json& doc);
SchemaModel parse_introspection_file(const std::string& path);

// Fields usable as the root of a generated query: the query root's fields,
// followed by the mutation root's fields when include_mutations is set.
std::vector<FieldSpec> valid_query_roots(const SchemaModel& schema, bool include_mutations);

// The introspection request sent to obtain a schema from a live endpoint.
const std::string& introspection_query();

} // namespace gqlcheck
